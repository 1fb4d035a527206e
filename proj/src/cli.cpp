#include "polytomo/cli.hpp"

#include <cstdint>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "polytomo/io.hpp"

namespace polytomo {

namespace {

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    std::ofstream out(output_path);
    if (!out) throw std::runtime_error("cannot write '" + output_path + "'");
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
  }
}

void emit_json(const Json& j, const std::string& output_path) {
  emit(j.dump(2), output_path);
}

std::optional<Eigen::Matrix2d> confusion_from_spec(const Json& spec) {
  if (!spec.contains("readout_error")) return std::nullopt;
  const Json& j = spec.at("readout_error");
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 ||
      !j[1].is_array() || j[1].size() != 2)
    throw ParseError("field 'readout_error' must be a 2x2 matrix of numbers");
  Eigen::Matrix2d nu;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      if (!j[r][c].is_number()) throw ParseError("field 'readout_error' must contain numbers");
      nu(r, c) = j[r][c].get<double>();
    }
  return nu;
}

int spec_int(const Json& spec, const char* field, int lo, int hi) {
  if (!spec.contains(field) || !spec.at(field).is_number_integer())
    throw ParseError(std::string("field '") + field + "' must be an integer");
  const std::int64_t v = spec.at(field).get<std::int64_t>();
  if (v < lo || v > hi)
    throw ParseError(std::string("field '") + field + "' out of range");
  return static_cast<int>(v);
}

std::int64_t spec_shots(const Json& spec) {
  if (!spec.contains("shots") || !spec.at("shots").is_number_integer() ||
      spec.at("shots").get<std::int64_t>() < 0)
    throw ParseError("field 'shots' must be a nonnegative integer");
  return spec.at("shots").get<std::int64_t>();
}

std::vector<double> spec_epsilon_grid(const Json& spec) {
  if (!spec.contains("epsilon_grid") || !spec.at("epsilon_grid").is_array() ||
      spec.at("epsilon_grid").empty())
    throw ParseError("field 'epsilon_grid' must be a nonempty array");
  std::vector<double> grid;
  for (const Json& v : spec.at("epsilon_grid")) {
    if (!v.is_number()) throw ParseError("field 'epsilon_grid' must contain numbers");
    grid.push_back(v.get<double>());
  }
  return grid;
}

std::string spec_model(const Json& spec) {
  if (!spec.contains("model") || !spec.at("model").is_string())
    throw ParseError("field 'model' must be a string");
  return spec.at("model").get<std::string>();
}

DensityMatrix qst_truth_from_spec(const Json& spec, int num_qubits) {
  const std::string model = spec_model(spec);
  if (model == "ghz") return ghz_state(num_qubits);
  if (model == "custom") {
    try {
      return DensityMatrix(complex_matrix_from_json(
          spec.contains("state") ? spec.at("state") : Json(), "state"));
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("field 'state': ") + e.what());
    }
  }
  throw ParseError("qst model must be \"ghz\" or \"custom\"");
}

ChoiMatrix qpt_truth_from_spec(const Json& spec, int num_qubits) {
  const std::string model = spec_model(spec);
  if (model == "depolarizing") {
    if (!spec.contains("p") || !spec.at("p").is_number())
      throw ParseError("depolarizing model needs a numeric field 'p'");
    return depolarizing_channel(num_qubits, spec.at("p").get<double>());
  }
  if (model == "custom") {
    const Index d = Index(1) << num_qubits;
    try {
      return ChoiMatrix(d, d,
                        HermitianOperator(complex_matrix_from_json(
                            spec.contains("choi") ? spec.at("choi") : Json(), "choi")));
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("field 'choi': ") + e.what());
    }
  }
  throw ParseError("qpt model must be \"depolarizing\" or \"custom\"");
}

bool spec_is_qpt(const Json& spec) {
  if (!spec.contains("kind") || !spec.at("kind").is_string())
    throw ParseError("field 'kind' must be \"qst\" or \"qpt\"");
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "qst") return false;
  if (kind == "qpt") return true;
  throw ParseError("field 'kind' must be \"qst\" or \"qpt\"");
}

bool spec_exact(const Json& spec, bool flag) {
  if (spec.contains("exact_frequencies")) {
    if (!spec.at("exact_frequencies").is_boolean())
      throw ParseError("field 'exact_frequencies' must be boolean");
    return flag || spec.at("exact_frequencies").get<bool>();
  }
  return flag;
}

Json diagnostics_json(const Polyhedron& poly) {
  Json j;
  j["ambient_dim"] = poly.ambient_dim;
  j["num_constraints"] = poly.halfspaces.size();
  j["rank"] = constraint_rank(poly);
  j["bounded"] = is_bounded(poly);
  return j;
}

struct RegionSetup {
  Polyhedron poly;
  DatasetVariant data;
};

RegionSetup build_region(const std::string& data_path, double confidence,
                         const std::string& epsilon_path) {
  DatasetVariant data = dataset_from_json(load_json_file(data_path));
  Polyhedron poly;
  if (const QstDataset* qst = std::get_if<QstDataset>(&data)) {
    QstEpsilons alloc = epsilon_path.empty()
                            ? uniform_allocation(qst->shape(), confidence)
                            : qst_epsilons_from_json(load_json_file(epsilon_path), *qst);
    poly = build_qst_polytope(*qst, alloc);
  } else {
    const QptDataset& qpt = std::get<QptDataset>(data);
    QptEpsilons alloc = epsilon_path.empty()
                            ? uniform_allocation(qpt.shape(), confidence)
                            : qpt_epsilons_from_json(load_json_file(epsilon_path), qpt);
    poly = build_qpt_polytope(qpt, alloc);
  }
  return RegionSetup{std::move(poly), std::move(data)};
}

int cmd_simulate(const std::string& spec_path, std::uint64_t seed, bool exact,
                 const std::string& output) {
  const Json spec = load_json_file(spec_path);
  const bool qpt = spec_is_qpt(spec);
  const int num_qubits = spec_int(spec, "num_qubits", 1, 8);
  const std::int64_t shots = spec_shots(spec);
  const auto confusion = confusion_from_spec(spec);
  const bool exact_mode = spec_exact(spec, exact);
  if (qpt) {
    const ChoiMatrix truth = qpt_truth_from_spec(spec, num_qubits);
    const MeasurementProtocol protocol =
        tetrahedron_pauli_qpt_protocol(num_qubits, shots, confusion);
    emit_json(dataset_to_json(run_qpt_experiment(truth, protocol, seed, exact_mode)), output);
  } else {
    const DensityMatrix truth = qst_truth_from_spec(spec, num_qubits);
    const MeasurementProtocol protocol = pauli_qst_protocol(num_qubits, shots, confusion);
    emit_json(dataset_to_json(run_qst_experiment(truth, protocol, seed, exact_mode)), output);
  }
  return 0;
}

int cmd_check(const std::string& data_path, const std::string& candidate_path,
              double confidence, const std::string& epsilon_path, const std::string& output) {
  RegionSetup setup = build_region(data_path, confidence, epsilon_path);
  const Json candidate_json = load_json_file(candidate_path);
  const MatrixC matrix =
      complex_matrix_from_json(candidate_json.contains("matrix") ? candidate_json.at("matrix")
                                                                 : Json(),
                               "matrix");
  VectorR point;
  try {
    if (const QstDataset* qst = std::get_if<QstDataset>(&setup.data)) {
      point = embed_state(DensityMatrix(matrix), qst->basis());
    } else {
      const QptDataset& qpt = std::get<QptDataset>(setup.data);
      point = embed_choi(ChoiMatrix(qpt.dim_in(), qpt.dim_out(), HermitianOperator(matrix)),
                         qpt.basis_in(), qpt.basis_out())
                  .stacked();
    }
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid candidate: ") + e.what());
  }

  const Membership verdict = contains(setup.poly, point);
  Json result;
  result["confidence_level"] = setup.poly.confidence_level;
  result["membership"] = verdict.inside;
  result["diagnostics"] = diagnostics_json(setup.poly);
  if (!verdict.inside) {
    Json violated;
    violated["input"] = verdict.violated.input;
    violated["povm"] = verdict.violated.povm;
    violated["effect"] = verdict.violated.effect;
    violated["excess"] = verdict.violation;
    result["diagnostics"]["violated"] = std::move(violated);
  }
  emit_json(result, output);
  return 0;
}

int cmd_interval(const std::string& data_path, const std::string& functional_path,
                 double confidence, const std::string& epsilon_path, const std::string& output) {
  RegionSetup setup = build_region(data_path, confidence, epsilon_path);
  const Json spec = load_json_file(functional_path);
  const AffineFunctional functional =
      std::holds_alternative<QstDataset>(setup.data)
          ? functional_from_json(spec, std::get<QstDataset>(setup.data))
          : functional_from_json(spec, std::get<QptDataset>(setup.data));

  Json result;
  result["diagnostics"] = diagnostics_json(setup.poly);
  result["functional"] = functional.label;
  try {
    const ConfidenceInterval ci = interval(functional, setup.poly);
    result["confidence_level"] = ci.confidence_level;
    result["interval"] = Json{{"lo", ci.lo}, {"hi", ci.hi}};
    emit_json(result, output);
    return 0;
  } catch (const std::exception& e) {
    result["error"] = e.what();
    if (!output.empty()) write_json_file(result, output);
    throw;
  }
}

int cmd_bounded(const std::string& data_path, const std::string& output) {
  // Boundedness depends only on the constraint normals, so any valid
  // allocation serves.
  RegionSetup setup = build_region(data_path, 0.5, "");
  Json result = diagnostics_json(setup.poly);
  result["confidence_level"] = setup.poly.confidence_level;
  emit_json(result, output);
  return result["bounded"].get<bool>() ? 0 : 2;
}

int cmd_coverage(const std::string& spec_path, std::uint64_t seed, bool exact,
                 const std::string& output, const std::string& format) {
  const Json spec = load_json_file(spec_path);
  const bool qpt = spec_is_qpt(spec);
  const int num_qubits = spec_int(spec, "num_qubits", 1, 8);
  const std::int64_t shots = spec_shots(spec);
  const std::vector<double> grid = spec_epsilon_grid(spec);
  const int trials = spec_int(spec, "trials", 1, 1000000);
  const auto confusion = confusion_from_spec(spec);
  const bool exact_mode = spec_exact(spec, exact);

  CoverageReport report;
  if (qpt) {
    report = coverage_experiment(qpt_truth_from_spec(spec, num_qubits),
                                 tetrahedron_pauli_qpt_protocol(num_qubits, shots, confusion),
                                 grid, trials, seed, exact_mode);
  } else {
    report = coverage_experiment(qst_truth_from_spec(spec, num_qubits),
                                 pauli_qst_protocol(num_qubits, shots, confusion), grid, trials,
                                 seed, exact_mode);
  }
  if (format == "csv")
    emit(coverage_to_csv(report), output);
  else
    emit_json(coverage_to_json(report), output);
  return 0;
}

int cmd_sweep(const std::string& spec_path, std::uint64_t seed, bool exact,
              const std::string& output, const std::string& format) {
  const Json spec = load_json_file(spec_path);
  const int num_qubits = spec_int(spec, "num_qubits", 1, 8);
  const std::int64_t shots = spec_shots(spec);
  const std::vector<double> grid = spec_epsilon_grid(spec);
  const int trials = spec_int(spec, "trials", 1, 1000000);
  const auto confusion = confusion_from_spec(spec);
  const bool exact_mode = spec_exact(spec, exact);
  const ChoiMatrix truth = qpt_truth_from_spec(spec, num_qubits);

  const Index d = Index(1) << num_qubits;
  ChoiMatrix target = spec.contains("target_unitary")
                          ? choi_of_unitary(complex_matrix_from_json(spec.at("target_unitary"),
                                                                     "target_unitary"))
                          : choi_of_unitary(MatrixC::Identity(d, d));

  const IntervalSweep sweep =
      fidelity_sweep(truth, tetrahedron_pauli_qpt_protocol(num_qubits, shots, confusion), target,
                     grid, trials, seed, exact_mode);
  if (format == "csv")
    emit(sweep_to_csv(sweep), output);
  else
    emit_json(sweep_to_json(sweep), output);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("polytomo");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Confidence polytopes for quantum state and process tomography"};
  app.require_subcommand(1);

  std::string spec_path, data_path, candidate_path, functional_path, epsilon_path;
  std::string output, format = "json";
  std::uint64_t seed = 0;
  double confidence = 0.95;
  bool exact = false;

  CLI::App* simulate = app.add_subcommand("simulate", "Generate a dataset from a model spec");
  simulate->add_option("--spec", spec_path, "experiment spec JSON")->required();
  simulate->add_option("--seed", seed, "RNG seed");
  simulate->add_flag("--exact-frequencies", exact, "emit rounded Born frequencies");
  simulate->add_option("--output", output, "output path (default: stdout)");

  CLI::App* check = app.add_subcommand("check", "Test membership of a candidate state/channel");
  check->add_option("--data", data_path, "dataset JSON")->required();
  check->add_option("--candidate", candidate_path, "candidate JSON ({\"matrix\": ...})")
      ->required();
  check->add_option("--confidence", confidence, "target confidence level");
  check->add_option("--epsilon-file", epsilon_path, "explicit per-effect epsilon allocation");
  check->add_option("--output", output, "output path (default: stdout)");

  CLI::App* interval_cmd =
      app.add_subcommand("interval", "Confidence interval for an affine functional");
  interval_cmd->add_option("--data", data_path, "dataset JSON")->required();
  interval_cmd->add_option("--functional", functional_path, "functional spec JSON")->required();
  interval_cmd->add_option("--confidence", confidence, "target confidence level");
  interval_cmd->add_option("--epsilon-file", epsilon_path,
                           "explicit per-effect epsilon allocation");
  interval_cmd->add_option("--output", output, "output path (default: stdout)");

  CLI::App* bounded = app.add_subcommand("bounded", "Report informational completeness");
  bounded->add_option("--data", data_path, "dataset JSON")->required();
  bounded->add_option("--output", output, "output path (default: stdout)");

  CLI::App* coverage = app.add_subcommand("coverage", "Monte-Carlo coverage study");
  coverage->add_option("--spec", spec_path, "coverage spec JSON")->required();
  coverage->add_option("--seed", seed, "RNG seed");
  coverage->add_flag("--exact-frequencies", exact, "use rounded Born frequencies");
  coverage->add_option("--output", output, "output path (default: stdout)");
  coverage->add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  CLI::App* sweep = app.add_subcommand("sweep", "Fidelity-interval sweep for a QPT model");
  sweep->add_option("--spec", spec_path, "sweep spec JSON")->required();
  sweep->add_option("--seed", seed, "RNG seed");
  sweep->add_flag("--exact-frequencies", exact, "use rounded Born frequencies");
  sweep->add_option("--output", output, "output path (default: stdout)");
  sweep->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
    if (simulate->parsed()) return cmd_simulate(spec_path, seed, exact, output);
    if (check->parsed())
      return cmd_check(data_path, candidate_path, confidence, epsilon_path, output);
    if (interval_cmd->parsed())
      return cmd_interval(data_path, functional_path, confidence, epsilon_path, output);
    if (bounded->parsed()) return cmd_bounded(data_path, output);
    if (coverage->parsed()) return cmd_coverage(spec_path, seed, exact, output, format);
    if (sweep->parsed()) return cmd_sweep(spec_path, seed, exact, output, format);
    return 1;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_name() == "CallForHelp" ? 0 : 1;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const UnboundedRegionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const EmptyRegionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 4;
  }
}

}  // namespace polytomo
