#include "polytomo/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace polytomo {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw ParseError(what); }

const Json& require(const Json& j, const char* field) {
  if (!j.is_object() || !j.contains(field))
    parse_fail(std::string("missing field '") + field + "'");
  return j.at(field);
}

Index require_dim(const Json& j, const char* field) {
  const Json& v = require(j, field);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 2)
    parse_fail(std::string("field '") + field + "' must be an integer >= 2");
  return static_cast<Index>(v.get<std::int64_t>());
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::int64_t> counts_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) parse_fail("field '" + field + "' must be an array of counts");
  std::vector<std::int64_t> counts;
  counts.reserve(j.size());
  for (const Json& entry : j) {
    if (!entry.is_number_integer())
      parse_fail("field '" + field + "' must contain integers");
    counts.push_back(entry.get<std::int64_t>());
  }
  return counts;
}

Povm povm_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.size() < 2)
    parse_fail("field '" + field + "' must be an array of at least two effect matrices");
  std::vector<Effect> effects;
  effects.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string effect_field = field + "[" + std::to_string(k) + "]";
    try {
      effects.push_back(Effect(complex_matrix_from_json(j[k], effect_field)));
    } catch (const std::invalid_argument& e) {
      parse_fail(effect_field + ": " + e.what());
    }
  }
  try {
    return Povm(std::move(effects));
  } catch (const std::invalid_argument& e) {
    parse_fail(field + ": " + e.what());
  }
}

}  // namespace

Json complex_matrix_to_json(const MatrixC& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j)
      row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

MatrixC complex_matrix_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) parse_fail("field '" + field + "' must be a matrix");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty())
    parse_fail("field '" + field + "' must be a matrix of [re, im] pairs");
  const std::size_t cols = j[0].size();
  MatrixC m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      parse_fail("field '" + field + "': ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) {
      const Json& cell = j[r][c];
      if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() || !cell[1].is_number())
        parse_fail("field '" + field + "': entries must be [re, im] pairs, at row " +
                   std::to_string(r) + " col " + std::to_string(c));
      m(static_cast<Index>(r), static_cast<Index>(c)) =
          Complex(cell[0].get<double>(), cell[1].get<double>());
    }
  }
  return m;
}

Json dataset_to_json(const QstDataset& data) {
  Json j;
  j["kind"] = "qst";
  j["dim_in"] = data.dim();
  j["dim_out"] = data.dim();
  Json povms = Json::array();
  for (const Povm& povm : data.povms()) {
    Json effects = Json::array();
    for (const Effect& e : povm.effects()) effects.push_back(complex_matrix_to_json(e.matrix()));
    povms.push_back(std::move(effects));
  }
  j["povms"] = std::move(povms);
  j["counts"] = data.counts();
  return j;
}

Json dataset_to_json(const QptDataset& data) {
  // The file schema shares one POVM list across inputs; require the in-memory
  // settings to actually agree before flattening them.
  const auto& first = data.settings().front();
  for (const auto& per_input : data.settings()) {
    if (per_input.size() != first.size())
      throw std::invalid_argument("dataset_to_json: inputs measured with different POVM lists");
    for (std::size_t jdx = 0; jdx < first.size(); ++jdx) {
      if (per_input[jdx].povm.size() != first[jdx].povm.size())
        throw std::invalid_argument("dataset_to_json: inputs measured with different POVM lists");
      for (std::size_t k = 0; k < first[jdx].povm.size(); ++k) {
        const double dev = (per_input[jdx].povm[k].matrix() - first[jdx].povm[k].matrix())
                               .cwiseAbs()
                               .maxCoeff();
        if (dev > 1e-12)
          throw std::invalid_argument(
              "dataset_to_json: inputs measured with different POVM lists");
      }
    }
  }

  Json j;
  j["kind"] = "qpt";
  j["dim_in"] = data.dim_in();
  j["dim_out"] = data.dim_out();
  Json inputs = Json::array();
  for (const DensityMatrix& rho : data.inputs())
    inputs.push_back(complex_matrix_to_json(rho.matrix()));
  j["inputs"] = std::move(inputs);
  Json povms = Json::array();
  for (const QptSetting& setting : first) {
    Json effects = Json::array();
    for (const Effect& e : setting.povm.effects())
      effects.push_back(complex_matrix_to_json(e.matrix()));
    povms.push_back(std::move(effects));
  }
  j["povms"] = std::move(povms);
  Json counts = Json::array();
  for (const auto& per_input : data.settings()) {
    Json per_input_counts = Json::array();
    for (const QptSetting& setting : per_input) per_input_counts.push_back(setting.counts);
    counts.push_back(std::move(per_input_counts));
  }
  j["counts"] = std::move(counts);
  return j;
}

DatasetVariant dataset_from_json(const Json& j) {
  const Json& kind = require(j, "kind");
  if (!kind.is_string()) parse_fail("field 'kind' must be \"qst\" or \"qpt\"");
  const std::string kind_str = kind.get<std::string>();
  const Index dim_in = require_dim(j, "dim_in");
  const Index dim_out = require_dim(j, "dim_out");

  const Json& povms_json = require(j, "povms");
  if (!povms_json.is_array() || povms_json.empty())
    parse_fail("field 'povms' must be a nonempty array");
  std::vector<Povm> povms;
  povms.reserve(povms_json.size());
  for (std::size_t i = 0; i < povms_json.size(); ++i)
    povms.push_back(povm_from_json(povms_json[i], "povms[" + std::to_string(i) + "]"));

  const Json& counts_json = require(j, "counts");
  if (!counts_json.is_array()) parse_fail("field 'counts' must be an array");

  if (kind_str == "qst") {
    if (dim_in != dim_out) parse_fail("qst dataset requires dim_in == dim_out");
    if (counts_json.size() != povms.size())
      parse_fail("field 'counts' must have one entry per POVM");
    std::vector<std::vector<std::int64_t>> counts;
    counts.reserve(counts_json.size());
    for (std::size_t i = 0; i < counts_json.size(); ++i)
      counts.push_back(counts_from_json(counts_json[i], "counts[" + std::to_string(i) + "]"));
    try {
      return QstDataset(std::move(povms), std::move(counts), basis_for_dim(dim_in));
    } catch (const std::invalid_argument& e) {
      parse_fail(std::string("invalid qst dataset: ") + e.what());
    }
  }

  if (kind_str != "qpt") parse_fail("field 'kind' must be \"qst\" or \"qpt\"");
  const Json& inputs_json = require(j, "inputs");
  if (!inputs_json.is_array() || inputs_json.empty())
    parse_fail("field 'inputs' must be a nonempty array of state matrices");
  std::vector<DensityMatrix> inputs;
  inputs.reserve(inputs_json.size());
  for (std::size_t i = 0; i < inputs_json.size(); ++i) {
    const std::string field = "inputs[" + std::to_string(i) + "]";
    try {
      inputs.push_back(DensityMatrix(complex_matrix_from_json(inputs_json[i], field)));
    } catch (const std::invalid_argument& e) {
      parse_fail(field + ": " + e.what());
    }
  }
  if (counts_json.size() != inputs.size())
    parse_fail("field 'counts' must have one entry per input state");
  std::vector<std::vector<QptSetting>> settings;
  settings.reserve(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const Json& per_input = counts_json[i];
    if (!per_input.is_array() || per_input.size() != povms.size())
      parse_fail("counts[" + std::to_string(i) + "] must have one entry per POVM");
    std::vector<QptSetting> input_settings;
    input_settings.reserve(povms.size());
    for (std::size_t jdx = 0; jdx < povms.size(); ++jdx) {
      input_settings.push_back(QptSetting{
          povms[jdx],
          counts_from_json(per_input[jdx], "counts[" + std::to_string(i) + "][" +
                                               std::to_string(jdx) + "]")});
    }
    settings.push_back(std::move(input_settings));
  }
  try {
    return QptDataset(std::move(inputs), std::move(settings), basis_for_dim(dim_in),
                      basis_for_dim(dim_out));
  } catch (const std::invalid_argument& e) {
    parse_fail(std::string("invalid qpt dataset: ") + e.what());
  }
}

Json parse_json(const std::string& text, const std::string& context) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    parse_fail(context + ": " + e.what());
  }
}

Json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_json(buffer.str(), path.string());
}

void write_json_file(const Json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

QstEpsilons qst_epsilons_from_json(const Json& j, const QstDataset& data) {
  const Json& eps = require(j, "epsilon");
  if (!eps.is_array() || eps.size() != data.povms().size())
    parse_fail("field 'epsilon' must have one entry per POVM");
  QstEpsilons alloc;
  alloc.reserve(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const Json& row = eps[i];
    if (!row.is_array() || row.size() != data.povms()[i].size())
      parse_fail("epsilon[" + std::to_string(i) + "] must have one entry per effect");
    std::vector<double> values;
    for (const Json& v : row) {
      if (!v.is_number()) parse_fail("epsilon entries must be numbers");
      values.push_back(v.get<double>());
    }
    alloc.push_back(std::move(values));
  }
  return alloc;
}

QptEpsilons qpt_epsilons_from_json(const Json& j, const QptDataset& data) {
  const Json& eps = require(j, "epsilon");
  if (!eps.is_array() || eps.size() != data.inputs().size())
    parse_fail("field 'epsilon' must have one entry per input state");
  QptEpsilons alloc;
  alloc.reserve(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const Json& per_input = eps[i];
    if (!per_input.is_array() || per_input.size() != data.settings()[i].size())
      parse_fail("epsilon[" + std::to_string(i) + "] must have one entry per POVM");
    QstEpsilons input_alloc;
    for (std::size_t jdx = 0; jdx < per_input.size(); ++jdx) {
      const Json& row = per_input[jdx];
      if (!row.is_array() || row.size() != data.settings()[i][jdx].povm.size())
        parse_fail("epsilon[" + std::to_string(i) + "][" + std::to_string(jdx) +
                   "] must have one entry per effect");
      std::vector<double> values;
      for (const Json& v : row) {
        if (!v.is_number()) parse_fail("epsilon entries must be numbers");
        values.push_back(v.get<double>());
      }
      input_alloc.push_back(std::move(values));
    }
    alloc.push_back(std::move(input_alloc));
  }
  return alloc;
}

namespace {

std::string functional_type(const Json& spec) {
  const Json& type = require(spec, "type");
  if (!type.is_string()) parse_fail("functional field 'type' must be a string");
  return type.get<std::string>();
}

[[noreturn]] void wrong_kind(const std::string& type, const char* kind) {
  parse_fail("functional type '" + type + "' does not apply to a " + kind + " dataset");
}

}  // namespace

AffineFunctional functional_from_json(const Json& spec, const QstDataset& data) {
  const std::string type = functional_type(spec);
  try {
    if (type == "fidelity_pure") {
      const MatrixC column = complex_matrix_from_json(require(spec, "psi"), "psi");
      if (column.cols() != 1) parse_fail("field 'psi' must be a column vector");
      return fidelity_to_pure(column.col(0), data.basis());
    }
    if (type == "observable_mean") {
      return observable_mean(
          HermitianOperator(complex_matrix_from_json(require(spec, "observable"), "observable")),
          data.basis());
    }
    if (type == "outcome_probability") {
      return outcome_probability(
          Effect(complex_matrix_from_json(require(spec, "effect"), "effect")), data.basis());
    }
  } catch (const std::invalid_argument& e) {
    parse_fail(std::string("invalid functional spec: ") + e.what());
  }
  wrong_kind(type, "qst");
}

AffineFunctional functional_from_json(const Json& spec, const QptDataset& data) {
  const std::string type = functional_type(spec);
  try {
    if (type == "process_fidelity") {
      const MatrixC u = complex_matrix_from_json(require(spec, "unitary"), "unitary");
      return process_fidelity_to_unitary(choi_of_unitary(u), data.basis_in(), data.basis_out());
    }
    if (type == "output_observable") {
      return output_observable(
          DensityMatrix(complex_matrix_from_json(require(spec, "input"), "input")),
          HermitianOperator(complex_matrix_from_json(require(spec, "observable"), "observable")),
          data.basis_in(), data.basis_out());
    }
    if (type == "output_probability") {
      return output_probability(
          DensityMatrix(complex_matrix_from_json(require(spec, "input"), "input")),
          Effect(complex_matrix_from_json(require(spec, "effect"), "effect")), data.basis_in(),
          data.basis_out());
    }
  } catch (const std::invalid_argument& e) {
    parse_fail(std::string("invalid functional spec: ") + e.what());
  }
  wrong_kind(type, "qpt");
}

Json coverage_to_json(const CoverageReport& report) {
  Json j;
  j["epsilon_grid"] = report.epsilon_grid;
  j["f_fail"] = report.f_fail;
  j["failures"] = report.failures;
  j["trials"] = report.trials;
  j["protocol"] = report.protocol;
  j["seed"] = report.seed;
  return j;
}

std::string coverage_to_csv(const CoverageReport& report) {
  std::ostringstream os;
  os << "epsilon,f_fail,trials\n";
  for (std::size_t i = 0; i < report.epsilon_grid.size(); ++i)
    os << format_double(report.epsilon_grid[i]) << ',' << format_double(report.f_fail[i]) << ','
       << report.trials << '\n';
  return os.str();
}

Json sweep_to_json(const IntervalSweep& sweep) {
  Json entries = Json::array();
  for (const SweepEntry& e : sweep.entries) {
    Json entry;
    entry["epsilon"] = e.epsilon;
    entry["trial"] = e.trial;
    if (e.failed) {
      entry["failed"] = true;
      entry["failure"] = e.failure;
    } else {
      entry["lo"] = e.lo;
      entry["hi"] = e.hi;
      entry["contains_truth"] = e.contains_truth;
    }
    entries.push_back(std::move(entry));
  }
  Json j;
  j["entries"] = std::move(entries);
  j["true_value"] = sweep.true_value;
  j["trials"] = sweep.trials;
  j["shots"] = sweep.shots;
  j["seed"] = sweep.seed;
  return j;
}

std::string sweep_to_csv(const IntervalSweep& sweep) {
  std::ostringstream os;
  os << "epsilon,lo,hi,contains_truth\n";
  for (const SweepEntry& e : sweep.entries) {
    if (e.failed) continue;
    os << format_double(e.epsilon) << ',' << format_double(e.lo) << ',' << format_double(e.hi)
       << ',' << (e.contains_truth ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace polytomo
