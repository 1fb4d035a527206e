#pragma once

#include "polytomo/operators.hpp"

namespace polytomo {

/// Which protocol setting produced a constraint: (input, povm, effect)
/// indices, with input = -1 for state-tomography constraints.
struct Provenance {
  int input = -1;
  int povm = -1;
  int effect = -1;
};

/// Closed half-space {x : normal . x <= offset}.
struct HalfSpace {
  VectorR normal;
  double offset = 0.0;
  Provenance origin;
};

}  // namespace polytomo
