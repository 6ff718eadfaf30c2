#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "hiermtl/baselines.hpp"
#include "hiermtl/random.hpp"
#include "hiermtl/dataset.hpp"
#include "hiermtl/error.hpp"
#include "hiermtl/eval.hpp"
#include "hiermtl/io.hpp"
#include "hiermtl/metrics.hpp"
#include "hiermtl/objective.hpp"
#include "hiermtl/solver.hpp"
#include "hiermtl/synthgen.hpp"
#include "hiermtl/theory.hpp"

namespace hiermtl::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Flag validation failures that CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    parts.push_back(b == std::string::npos ? std::string() : item.substr(b, e - b + 1));
  }
  return parts;
}

std::vector<double> parse_numbers(const std::string& text, const std::string& flag) {
  std::vector<double> values;
  for (const auto& p : split_list(text)) {
    if (p.empty()) continue;
    try {
      values.push_back(io::parse_double(p));
    } catch (const Error&) {
      throw UsageError(flag + ": '" + p + "' is not a number");
    }
  }
  return values;
}

Penalties parse_lambda_triple(const std::string& text) {
  const auto v = parse_numbers(text, "--lambda");
  if (v.size() != 3) throw UsageError("--lambda expects three comma-separated values");
  return {v[0], v[1], v[2]};
}

struct TheoremSpec {
  std::optional<double> sigma;
  double t = 10.0;
  theory::Multipliers c{2.0, 2.5, 32.0};
};

// "sigma=1,t=10,c=2,2.5,32": key=value items, c takes three values.
TheoremSpec parse_theorem(const std::string& text) {
  TheoremSpec spec;
  const auto parts = split_list(text);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    if (eq == std::string::npos) throw UsageError("--theorem1: expected key=value, got '" + parts[i] + "'");
    const std::string key = parts[i].substr(0, eq);
    const std::string value = parts[i].substr(eq + 1);
    auto number = [&](const std::string& s) {
      try {
        return io::parse_double(s);
      } catch (const Error&) {
        throw UsageError("--theorem1: '" + s + "' is not a number");
      }
    };
    if (key == "sigma") {
      spec.sigma = number(value);
    } else if (key == "t") {
      spec.t = number(value);
    } else if (key == "c") {
      if (i + 2 >= parts.size()) throw UsageError("--theorem1: c needs three values");
      spec.c = {number(value), number(parts[i + 1]), number(parts[i + 2])};
      i += 2;
    } else {
      throw UsageError("--theorem1: unknown key '" + key + "'");
    }
  }
  return spec;
}

fs::path manifest_path(const std::string& data) {
  const fs::path p(data);
  return fs::is_directory(p) ? p / "manifest.json" : p;
}

MultiTaskDataset load(const std::string& data, bool normalize, std::ostream& err) {
  MultiTaskDataset ds = io::load_dataset(manifest_path(data));
  if (!normalize) return ds;
  NormalizedDataset n = normalize_columns(ds);
  for (const auto& w : n.warnings)
    err << "warning: subtask " << w.subtask << " column " << w.column << " is constant; left at zero\n";
  return std::move(n.dataset);
}

std::vector<Penalties> read_grid(const fs::path& path) {
  const json j = io::read_json(path);
  const json& list = j.is_object() && j.contains("grid") ? j.at("grid") : j;
  if (!list.is_array() || list.empty()) throw Error(ErrorCode::ParseError, path.string() + ": grid must be a non-empty array");
  std::vector<Penalties> grid;
  for (const auto& row : list) {
    if (row.is_array() && row.size() == 3) {
      grid.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
    } else if (row.is_object()) {
      grid.push_back({row.at("lambda1").get<double>(), row.at("lambda2").get<double>(), row.at("lambda3").get<double>()});
    } else {
      throw Error(ErrorCode::ParseError, path.string() + ": grid entries must be [l1,l2,l3]");
    }
  }
  return grid;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  return f;
}

void write_text(const fs::path& path, const std::string& text) {
  auto f = open_out(path);
  f << text;
  if (!f) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

void add_solver_flags(CLI::App* cmd, SolverConfig& s, bool& no_accel) {
  cmd->add_flag("--no-accel", no_accel, "Disable momentum (plain proximal gradient)");
  cmd->add_option("--rho0", s.rho0, "Initial step constant")->capture_default_str();
  cmd->add_option("--eta", s.eta, "Backtracking growth factor")->capture_default_str();
  cmd->add_option("--max-iter", s.max_iterations, "Iteration cap")->capture_default_str();
  cmd->add_option("--tol", s.rel_tolerance, "Relative objective-change tolerance")->capture_default_str();
}

// ---- generate ---------------------------------------------------------------

struct GenerateArgs {
  std::string preset = "paper-sim";
  std::uint64_t seed = 0;
  std::string out;
  std::string kind;
  std::optional<std::size_t> d, attributes, users, samples;
  std::optional<double> noise_variance, feature_variance;
  double relative_band = 0.1;
};

SynthConfig preset_config(const std::string& preset) {
  SynthConfig c;
  if (preset == "paper-sim") return c;
  if (preset == "shoes-binary" || preset == "shoes-relative") {
    c.n_a = 6;
    c.users_per_attribute = 10;
    c.samples_per_subtask = 60;
    return c;
  }
  throw UsageError("unknown preset '" + preset + "'");
}

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  SynthConfig c = preset_config(a.preset);
  c.seed = a.seed;
  if (a.d && *a.d != c.d) {
    // keep the zero patterns at the same fraction of the feature rows
    const std::size_t base = c.d;
    auto scale = [&](std::size_t i) { return i * *a.d / base; };
    c.theta_zero_range = {scale(c.theta_zero_range.begin), scale(c.theta_zero_range.end)};
    c.p_zero_row_range = {scale(c.p_zero_row_range.begin), scale(c.p_zero_row_range.end)};
    c.d = *a.d;
  }
  if (a.users) c.u_zero_cols_per_attribute = std::min(c.u_zero_cols_per_attribute, *a.users);
  if (a.attributes) c.n_a = *a.attributes;
  if (a.users) c.users_per_attribute = *a.users;
  if (a.samples) c.samples_per_subtask = *a.samples;
  if (a.noise_variance) c.noise_variance = *a.noise_variance;
  if (a.feature_variance) c.feature_variance = *a.feature_variance;

  TaskKind kind = TaskKind::regression;
  if (a.preset == "shoes-binary") kind = TaskKind::binary;
  if (a.preset == "shoes-relative") kind = TaskKind::relative;
  if (!a.kind.empty()) kind = parse_task_kind(a.kind);

  const SyntheticData data =
      kind == TaskKind::regression ? generate(c) : generate_classification(c, kind, a.relative_band);
  const fs::path manifest = io::write_dataset(data.dataset, a.out);
  io::write_json(io::to_json(data.truth), fs::path(a.out) / "truth.json");
  out << "wrote " << data.dataset.n_users() << " subtasks to " << manifest.parent_path().string() << "\n";
  return kOk;
}

// ---- fit --------------------------------------------------------------------

struct FitArgs {
  std::string data;
  std::string lambda;
  std::string theorem;
  std::string cv;
  std::size_t folds = 3;
  std::uint64_t seed = 0;
  SolverConfig solver;
  bool no_accel = false;
  bool normalize = false;
  bool include_trace = false;
  std::string trace;
  std::string out;
};

int cmd_fit(FitArgs a, std::ostream& out, std::ostream& err) {
  const int sources = int(!a.lambda.empty()) + int(!a.theorem.empty()) + int(!a.cv.empty());
  if (sources != 1) throw UsageError("give exactly one of --lambda, --theorem1, --cv");

  const MultiTaskDataset ds = load(a.data, a.normalize, err);
  SolverConfig config = a.solver;
  config.accelerated = !a.no_accel;
  config.record_trace = !a.trace.empty() || a.include_trace;

  if (!a.lambda.empty()) {
    config.penalties = parse_lambda_triple(a.lambda);
  } else if (!a.theorem.empty()) {
    const TheoremSpec spec = parse_theorem(a.theorem);
    theory::TheoryParams params;
    params.sigma = spec.sigma ? *spec.sigma : estimate_noise_sigma(ds);
    params.t = spec.t;
    params.d = ds.dim();
    params.users_per_attribute = ds.users_per_attribute();
    params.n_min = ds.min_rows();
    config.penalties = theory::lambda_schedule(params, spec.c);
    if (!spec.sigma) err << "estimated sigma " << io::format_double(params.sigma) << "\n";
  } else {
    const CvResult cv = cross_validate(ds, read_grid(a.cv), a.folds, a.seed, config);
    config.penalties = cv.best;
  }
  validate(config);

  const FitResult result = fit(ds, config);
  if (!a.trace.empty()) io::write_trace_csv(result.trace, a.trace);
  if (!a.out.empty()) io::write_json(io::to_json(result, config, a.include_trace), a.out);

  const auto& p = config.penalties;
  out << "lambdas " << io::format_double(p.lambda1) << "," << io::format_double(p.lambda2) << ","
      << io::format_double(p.lambda3) << "\n";
  out << "objective " << io::format_double(result.final_objective) << "\n";
  out << "iterations " << result.iterations_used << "\n";
  out << "status " << to_string(result.status) << "\n";
  return result.status == FitStatus::non_finite ? kNonFinite : kOk;
}

// ---- evaluate ---------------------------------------------------------------

struct EvaluateArgs {
  std::string weights;
  std::string data;
  std::string metric;
  double zero_band = 0.0;
  bool normalize = false;
  std::string out;
  std::string json_out;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  const MultiTaskDataset ds = load(a.data, a.normalize, err);
  const MetricKind metric = a.metric.empty() ? default_metric(ds.kind()) : parse_metric_kind(a.metric);
  if (!metric_fits_task(metric, ds.kind()))
    throw UsageError(std::string("metric ") + to_string(metric) + " does not apply to " + to_string(ds.kind()) +
                     " tasks");
  if (a.zero_band < 0.0) throw UsageError("--zero-band must be non-negative");

  const WeightDecomposition w = io::read_weights(a.weights);
  if (!w.matches(ds)) throw Error(ErrorCode::DimensionMismatch, "weights do not match the dataset layout");
  SubtaskPredictor predictor = predictor_from(w);
  std::fill(predictor.zero_bands.begin(), predictor.zero_bands.end(), a.zero_band);

  const EvalReport report = evaluate(ds, predictor, metric, "model");
  const std::string table = report_table_csv({report}, ds.attribute_names());
  out << table;
  if (!a.out.empty()) write_text(a.out, table);
  if (!a.json_out.empty()) io::write_json(to_json(report), a.json_out);
  return kOk;
}

// ---- benchmark --------------------------------------------------------------

struct BenchmarkArgs {
  std::string preset;
  std::string descriptor;
  std::string data;
  std::string out;
  std::uint64_t seed = 0;
  std::optional<std::string> methods;
  std::optional<int> repetitions;
  std::string fractions;
  int restarts = 10;
  int iterations = 100;
};

std::vector<Method> parse_methods(const std::string& text) {
  std::vector<Method> methods;
  for (const auto& m : split_list(text))
    if (!m.empty()) methods.push_back(parse_method(m));
  if (methods.empty()) throw UsageError("method list is empty");
  return methods;
}

ExperimentDescriptor descriptor_from_json(const json& j) {
  ExperimentDescriptor d;
  if (j.contains("methods")) {
    d.methods.clear();
    for (const auto& m : j.at("methods")) d.methods.push_back(parse_method(m.get<std::string>()));
    if (d.methods.empty()) throw UsageError("method list is empty");
  }
  if (j.contains("train_fractions")) d.train_fractions = j.at("train_fractions").get<std::vector<double>>();
  if (j.contains("repetitions")) d.repetitions = j.at("repetitions").get<int>();
  if (j.contains("seed")) d.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("cv_folds")) d.cv_folds = j.at("cv_folds").get<std::size_t>();
  if (j.contains("normalize")) d.normalize = j.at("normalize").get<bool>();
  if (j.contains("baseline_lambda_grid"))
    d.baseline_lambda_grid = j.at("baseline_lambda_grid").get<std::vector<double>>();
  if (j.contains("grid"))
    for (const auto& row : j.at("grid"))
      d.grid.push_back({row.at(0).get<double>(), row.at(1).get<double>(), row.at(2).get<double>()});
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    if (s.contains("max_iterations")) d.solver.max_iterations = s.at("max_iterations").get<int>();
    if (s.contains("rel_tolerance")) d.solver.rel_tolerance = s.at("rel_tolerance").get<double>();
    if (s.contains("rho0")) d.solver.rho0 = s.at("rho0").get<double>();
    if (s.contains("eta")) d.solver.eta = s.at("eta").get<double>();
    if (s.contains("accelerated")) d.solver.accelerated = s.at("accelerated").get<bool>();
  }
  return d;
}

std::string percent_label(double fraction) {
  return std::to_string(static_cast<int>(std::lround(fraction * 100.0)));
}

MultiTaskDataset benchmark_data(const BenchmarkArgs& a, const json& source, std::ostream& err) {
  if (!a.data.empty()) return load(a.data, false, err);
  SynthConfig c;
  TaskKind kind = TaskKind::regression;
  if (!source.is_null()) {
    if (source.contains("manifest")) return load(source.at("manifest").get<std::string>(), false, err);
    if (source.contains("preset")) {
      const std::string p = source.at("preset").get<std::string>();
      c = preset_config(p);
      if (p == "shoes-binary") kind = TaskKind::binary;
      if (p == "shoes-relative") kind = TaskKind::relative;
    }
    if (source.contains("kind")) kind = parse_task_kind(source.at("kind").get<std::string>());
    if (source.contains("d")) c.d = source.at("d").get<std::size_t>();
    if (source.contains("n_a")) c.n_a = source.at("n_a").get<std::size_t>();
    if (source.contains("users_per_attribute")) c.users_per_attribute = source.at("users_per_attribute").get<std::size_t>();
    if (source.contains("samples_per_subtask")) c.samples_per_subtask = source.at("samples_per_subtask").get<std::size_t>();
    if (source.contains("noise_variance")) c.noise_variance = source.at("noise_variance").get<double>();
  } else if (a.preset == "shoes-binary" || a.preset == "shoes-relative") {
    c = preset_config(a.preset);
    kind = a.preset == "shoes-binary" ? TaskKind::binary : TaskKind::relative;
  }
  c.seed = source.is_object() && source.contains("seed") ? source.at("seed").get<std::uint64_t>() : a.seed;
  return kind == TaskKind::regression ? generate(c).dataset : generate_classification(c, kind).dataset;
}

int run_tables(const MultiTaskDataset& data, const ExperimentDescriptor& d, const fs::path& dir, std::ostream& out) {
  validate(d);
  const std::vector<EvalReport> reports = run_experiment(data, d);
  json all = json::array();
  for (const auto& r : reports) all.push_back(to_json(r));
  const std::size_t per_fraction = d.methods.size();
  for (std::size_t f = 0; f < d.train_fractions.size(); ++f) {
    const std::vector<EvalReport> slice(reports.begin() + f * per_fraction, reports.begin() + (f + 1) * per_fraction);
    const std::string table = report_table_csv(slice, data.attribute_names());
    const fs::path path = dir / ("table_" + percent_label(d.train_fractions[f]) + ".csv");
    write_text(path, table);
    out << "# train fraction " << d.train_fractions[f] << " -> " << path.string() << "\n" << table;
  }
  io::write_json(json{{"reports", all}}, dir / "report.json");
  return kOk;
}

int run_accel(const MultiTaskDataset& raw, const BenchmarkArgs& a, const std::vector<double>& fractions,
              const fs::path& dir, std::ostream& out) {
  if (a.restarts < 1 || a.iterations < 1) throw UsageError("--restarts and --iterations must be positive");
  const MultiTaskDataset data = normalize_columns(raw).dataset;
  for (std::size_t f = 0; f < fractions.size(); ++f) {
    const TrainTestSplit split = split_train_test(data, fractions[f], derive_seed(a.seed, "split", f));
    const Penalties penalties = scaled_penalties(split.train, 1e-3, 1e-3, 1e-3);
    const ConvergenceCurves curves =
        acceleration_curves(split.train, penalties, a.restarts, a.iterations, derive_seed(a.seed, "restarts", f));
    std::ostringstream csv;
    csv << "iteration,accelerated,plain\n";
    for (std::size_t k = 0; k < curves.accelerated.size(); ++k)
      csv << k + 1 << "," << io::format_double(curves.accelerated[k]) << "," << io::format_double(curves.plain[k])
          << "\n";
    const fs::path path = dir / ("accel_" + percent_label(fractions[f]) + ".csv");
    write_text(path, csv.str());
    out << "wrote " << path.string() << "\n";
  }
  return kOk;
}

int cmd_benchmark(const BenchmarkArgs& a, std::ostream& out, std::ostream& err) {
  if (a.preset.empty() == a.descriptor.empty()) throw UsageError("give exactly one of --preset, --descriptor");
  const fs::path dir(a.out);

  std::vector<double> fractions{0.4, 0.8};
  if (!a.fractions.empty()) fractions = parse_numbers(a.fractions, "--fractions");

  if (a.preset == "accel-compare") {
    return run_accel(benchmark_data(a, json(), err), a, fractions, dir, out);
  }

  ExperimentDescriptor d;
  json source;
  if (!a.descriptor.empty()) {
    const json j = io::read_json(a.descriptor);
    d = descriptor_from_json(j);
    if (j.contains("data")) source = j.at("data");
  } else if (a.preset == "paper-sim-table" || a.preset == "shoes-binary" || a.preset == "shoes-relative") {
    d.seed = a.seed;
    d.train_fractions = fractions;
  } else {
    throw UsageError("unknown preset '" + a.preset + "'");
  }
  if (a.methods) d.methods = parse_methods(*a.methods);
  if (a.repetitions) d.repetitions = *a.repetitions;
  if (d.methods.empty()) throw UsageError("method list is empty");
  return run_tables(benchmark_data(a, source, err), d, dir, out);
}

// ---- theory -----------------------------------------------------------------

struct TheoryArgs {
  double sigma = 1.0;
  std::size_t d = 50;
  std::string users = "10,10,10,10,10";
  std::string t_values = "1,2,5,10,20,50,100,200,500,1000";
  std::string multipliers = "2,2.5,32";
};

int cmd_theory(const TheoryArgs& a, std::ostream& out) {
  theory::TheoryParams params;
  params.sigma = a.sigma;
  params.d = a.d;
  for (double u : parse_numbers(a.users, "--users")) {
    if (u < 1.0 || u != std::floor(u)) throw UsageError("--users entries must be positive integers");
    params.users_per_attribute.push_back(static_cast<std::size_t>(u));
  }
  const auto c = parse_numbers(a.multipliers, "--multipliers");
  if (c.size() != 3) throw UsageError("--multipliers expects three values");
  const double d_total = static_cast<double>(a.d * params.n_users());

  out << "t,z,delta,vacuous,lambda1,lambda2,lambda3\n";
  for (double t : parse_numbers(a.t_values, "--t")) {
    params.t = t;
    const Penalties l = theory::lambda_schedule(params, {c[0], c[1], c[2]});
    const double delta = theory::delta_probability(d_total, t);
    out << io::format_double(t) << "," << io::format_double(theory::z_value(d_total, t)) << ","
        << io::format_double(delta) << "," << (theory::is_vacuous(delta) ? 1 : 0) << ","
        << io::format_double(l.lambda1) << "," << io::format_double(l.lambda2) << "," << io::format_double(l.lambda3)
        << "\n";
  }
  return kOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidConfig:
    case ErrorCode::UnknownTaskKind:
    case ErrorCode::NegativeLambda:
    case ErrorCode::NegativeTau:
    case ErrorCode::MultiplierBelowOne:
      return kUsage;
    case ErrorCode::IoError:
    case ErrorCode::ParseError:
      return kIo;
    case ErrorCode::NonFiniteValue:
      return kNonFinite;
    default:
      return kFailure;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hierarchical multi-task regression with structured sparsity", "hiermtl"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate_cmd = app.add_subcommand("generate", "Write a synthetic dataset and its ground truth");
  generate_cmd->add_option("--preset", gen.preset, "paper-sim | shoes-binary | shoes-relative")->capture_default_str();
  generate_cmd->add_option("--seed", gen.seed)->capture_default_str();
  generate_cmd->add_option("--out", gen.out, "Output directory")->required();
  generate_cmd->add_option("--kind", gen.kind, "regression | binary | relative");
  generate_cmd->add_option("--d", gen.d, "Feature dimension");
  generate_cmd->add_option("--attributes", gen.attributes, "Number of attributes");
  generate_cmd->add_option("--users", gen.users, "Users per attribute");
  generate_cmd->add_option("--samples", gen.samples, "Samples per subtask");
  generate_cmd->add_option("--noise-variance", gen.noise_variance);
  generate_cmd->add_option("--feature-variance", gen.feature_variance);
  generate_cmd->add_option("--relative-band", gen.relative_band, "Tie band for relative labels, in score stds")
      ->capture_default_str();

  FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "Fit the joint model");
  fit_cmd->add_option("--data", fit_args.data, "Dataset directory or manifest")->required();
  fit_cmd->add_option("--lambda", fit_args.lambda, "l1,l2,l3");
  fit_cmd->add_option("--theorem1", fit_args.theorem, "sigma=S,t=T,c=C1,C2,C3 (sigma optional)");
  fit_cmd->add_option("--cv", fit_args.cv, "JSON grid of [l1,l2,l3] for cross-validation");
  fit_cmd->add_option("--folds", fit_args.folds)->capture_default_str();
  fit_cmd->add_option("--seed", fit_args.seed)->capture_default_str();
  add_solver_flags(fit_cmd, fit_args.solver, fit_args.no_accel);
  fit_cmd->add_flag("--normalize", fit_args.normalize, "Scale feature columns to unit norm per subtask");
  fit_cmd->add_flag("--include-trace", fit_args.include_trace, "Embed the trace in the output JSON");
  fit_cmd->add_option("--trace", fit_args.trace, "Trace CSV path");
  fit_cmd->add_option("--out", fit_args.out, "Fit result JSON path");

  EvaluateArgs eval_args;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score weights on a dataset");
  eval_cmd->add_option("--weights", eval_args.weights, "Fit result or truth JSON")->required();
  eval_cmd->add_option("--data", eval_args.data, "Dataset directory or manifest")->required();
  eval_cmd->add_option("--metric", eval_args.metric, "nmse | accuracy | ranking_accuracy");
  eval_cmd->add_option("--zero-band", eval_args.zero_band, "Score half-width predicted as 0 (relative tasks)")
      ->capture_default_str();
  eval_cmd->add_flag("--normalize", eval_args.normalize);
  eval_cmd->add_option("--out", eval_args.out, "Report CSV path");
  eval_cmd->add_option("--json", eval_args.json_out, "Report JSON path");

  BenchmarkArgs bench;
  auto* bench_cmd = app.add_subcommand("benchmark", "Run comparison experiments");
  bench_cmd->add_option("--preset", bench.preset, "paper-sim-table | accel-compare | shoes-binary | shoes-relative");
  bench_cmd->add_option("--descriptor", bench.descriptor, "Experiment descriptor JSON");
  bench_cmd->add_option("--data", bench.data, "Use this dataset instead of generating one");
  bench_cmd->add_option("--out", bench.out, "Output directory")->required();
  bench_cmd->add_option("--seed", bench.seed)->capture_default_str();
  bench_cmd->add_option("--methods", bench.methods, "Comma-separated: zero, ridge, lasso, ours");
  bench_cmd->add_option("--repetitions", bench.repetitions);
  bench_cmd->add_option("--fractions", bench.fractions, "Comma-separated train fractions");
  bench_cmd->add_option("--restarts", bench.restarts)->capture_default_str();
  bench_cmd->add_option("--iterations", bench.iterations)->capture_default_str();

  TheoryArgs th;
  auto* theory_cmd = app.add_subcommand("theory", "Print the probability bound and lambda schedule as CSV");
  theory_cmd->add_option("--sigma", th.sigma)->capture_default_str();
  theory_cmd->add_option("--d", th.d)->capture_default_str();
  theory_cmd->add_option("--users", th.users, "Users per attribute, comma-separated")->capture_default_str();
  theory_cmd->add_option("--t", th.t_values, "Comma-separated t values")->capture_default_str();
  theory_cmd->add_option("--multipliers", th.multipliers)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const CLI::App* sub = nullptr;
    for (const auto* s : app.get_subcommands()) sub = s;
    err << (sub ? sub->help() : app.help());
    return kUsage;
  }

  try {
    if (*generate_cmd) return cmd_generate(gen, out);
    if (*fit_cmd) return cmd_fit(fit_args, out, err);
    if (*eval_cmd) return cmd_evaluate(eval_args, out, err);
    if (*bench_cmd) return cmd_benchmark(bench, out, err);
    if (*theory_cmd) return cmd_theory(th, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace hiermtl::cli
