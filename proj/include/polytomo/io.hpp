#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <variant>

#include <json.hpp>

#include "polytomo/functionals.hpp"
#include "polytomo/harness.hpp"
#include "polytomo/polytope.hpp"

namespace polytomo {

using Json = nlohmann::json;

/// Malformed input files: invalid JSON, missing or mistyped fields, or
/// contents failing the domain invariants. Messages name the location.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using DatasetVariant = std::variant<QstDataset, QptDataset>;

// Complex matrices travel as nested arrays of [re, im] pairs, row-major.
Json complex_matrix_to_json(const MatrixC& m);
MatrixC complex_matrix_from_json(const Json& j, const std::string& field);

Json dataset_to_json(const QstDataset& data);
Json dataset_to_json(const QptDataset& data);
DatasetVariant dataset_from_json(const Json& j);

/// Parse with ParseError diagnostics (byte position for syntax errors).
Json parse_json(const std::string& text, const std::string& context);
Json load_json_file(const std::filesystem::path& path);
void write_json_file(const Json& j, const std::filesystem::path& path);

/// Explicit per-effect error budgets, shape-checked against the dataset.
QstEpsilons qst_epsilons_from_json(const Json& j, const QstDataset& data);
QptEpsilons qpt_epsilons_from_json(const Json& j, const QptDataset& data);

/// Functional builders addressed by name; the dataset supplies bases and
/// dimensions. QST types: fidelity_pure, observable_mean,
/// outcome_probability. QPT types: process_fidelity, output_observable,
/// output_probability.
AffineFunctional functional_from_json(const Json& spec, const QstDataset& data);
AffineFunctional functional_from_json(const Json& spec, const QptDataset& data);

Json coverage_to_json(const CoverageReport& report);
std::string coverage_to_csv(const CoverageReport& report);
Json sweep_to_json(const IntervalSweep& sweep);
std::string sweep_to_csv(const IntervalSweep& sweep);

}  // namespace polytomo
