#include "hiermtl/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hiermtl/error.hpp"

namespace hiermtl::io {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

SubtaskData read_subtask_csv(const fs::path& path, std::size_t d, std::size_t attribute, std::size_t user) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, path.string() + ": missing header");
  line = strip_cr(line);
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = split_commas(line);
  if (header.size() != d + 1) {
    throw Error(ErrorCode::ShapeMismatch, path.string() + ": header has " + std::to_string(header.size()) +
                                              " fields, expected " + std::to_string(d + 1));
  }
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_commas(line);
    if (fields.size() != d + 1) {
      throw Error(ErrorCode::ShapeMismatch, path.string() + ":" + std::to_string(line_no) + ": row has " +
                                                std::to_string(fields.size()) + " fields, expected " +
                                                std::to_string(d + 1));
    }
    for (const auto f : fields) {
      try {
        values.push_back(parse_double(f));
      } catch (const Error& e) {
        throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
    ++rows;
  }
  SubtaskData s{attribute, user, Matrix(rows, d), Vector(rows)};
  for (std::size_t r = 0; r < rows; ++r) {
    s.responses(static_cast<Eigen::Index>(r)) = values[r * (d + 1)];
    for (std::size_t c = 0; c < d; ++c) {
      s.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = values[r * (d + 1) + 1 + c];
    }
  }
  return s;
}

void check_labels(const SubtaskData& s, TaskKind kind, const std::string& where) {
  for (Eigen::Index r = 0; r < s.responses.size(); ++r) {
    const double y = s.responses(r);
    const bool ok = kind == TaskKind::regression ? std::isfinite(y)
                    : kind == TaskKind::binary   ? (y == 1.0 || y == -1.0)
                                                 : (y == 1.0 || y == 0.0 || y == -1.0);
    if (!ok) {
      throw Error(ErrorCode::ParseError, where + ": response " + format_double(y) + " is not valid for task kind " +
                                             to_string(kind));
    }
  }
}

template <class T>
T field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw Error(ErrorCode::ParseError, where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, where + ": field '" + key + "': " + e.what());
  }
}

json matrix_rows(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_rows(const json& rows, Eigen::Index n_rows, Eigen::Index n_cols, const char* name) {
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n_rows) {
    throw Error(ErrorCode::ShapeMismatch, std::string(name) + " has the wrong number of rows");
  }
  Matrix m(n_rows, n_cols);
  for (Eigen::Index r = 0; r < n_rows; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n_cols) {
      throw Error(ErrorCode::ShapeMismatch, std::string(name) + " has the wrong number of columns");
    }
    for (Eigen::Index c = 0; c < n_cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

}  // namespace

MultiTaskDataset load_dataset(const fs::path& manifest_path) {
  const json manifest = read_json(manifest_path);
  const std::string where = manifest_path.string();
  const TaskKind kind = parse_task_kind(field<std::string>(manifest, "task_kind", where));
  const auto d = field<std::size_t>(manifest, "d", where);
  if (d == 0) throw Error(ErrorCode::ParseError, where + ": d must be positive");
  const auto& attributes = manifest.contains("attributes") ? manifest.at("attributes") : json();
  if (!attributes.is_array() || attributes.empty()) {
    throw Error(ErrorCode::ParseError, where + ": 'attributes' must be a non-empty array");
  }
  const fs::path base = manifest_path.parent_path();
  std::vector<std::size_t> layout;
  std::vector<SubtaskData> subtasks;
  std::vector<std::string> attribute_names;
  std::vector<std::vector<std::string>> user_names;
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    const auto& a = attributes[i];
    attribute_names.push_back(a.value("name", ""));
    const auto& users = a.contains("users") ? a.at("users") : json();
    if (!users.is_array() || users.empty()) {
      throw Error(ErrorCode::ParseError, where + ": attribute " + std::to_string(i) + " has no users");
    }
    layout.push_back(users.size());
    user_names.emplace_back();
    for (std::size_t j = 0; j < users.size(); ++j) {
      user_names.back().push_back(users[j].value("name", ""));
      const fs::path csv = base / field<std::string>(users[j], "csv", where);
      SubtaskData s = read_subtask_csv(csv, d, i, j);
      check_labels(s, kind, csv.string());
      subtasks.push_back(std::move(s));
    }
  }
  MultiTaskDataset dataset(kind, d, std::move(layout), std::move(subtasks));
  dataset.set_names(std::move(attribute_names), std::move(user_names));
  return dataset;
}

fs::path write_dataset(const MultiTaskDataset& dataset, const fs::path& directory) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + directory.string() + ": " + ec.message());

  std::string header = "y";
  for (std::size_t c = 0; c < dataset.dim(); ++c) header += ",f" + std::to_string(c);

  json attributes = json::array();
  for (std::size_t i = 0; i < dataset.n_attributes(); ++i) {
    json users = json::array();
    for (std::size_t j = 0; j < dataset.users_per_attribute()[i]; ++j) {
      const std::string file = "a" + std::to_string(i) + "_u" + std::to_string(j) + ".csv";
      const auto& s = dataset.subtask(i, j);
      std::ofstream out(directory / file);
      if (!out) throw Error(ErrorCode::IoError, "cannot write " + (directory / file).string());
      out << header << '\n';
      for (Eigen::Index r = 0; r < s.features.rows(); ++r) {
        out << format_double(s.responses(r));
        for (Eigen::Index c = 0; c < s.features.cols(); ++c) out << ',' << format_double(s.features(r, c));
        out << '\n';
      }
      if (!out) throw Error(ErrorCode::IoError, "failed writing " + (directory / file).string());
      users.push_back({{"name", dataset.user_names()[i][j]}, {"csv", file}});
    }
    attributes.push_back({{"name", dataset.attribute_names()[i]}, {"users", std::move(users)}});
  }
  const json manifest = {{"task_kind", to_string(dataset.kind())}, {"d", dataset.dim()}, {"attributes", attributes}};
  const fs::path manifest_path = directory / "manifest.json";
  write_json(manifest, manifest_path);
  return manifest_path;
}

json to_json(const WeightDecomposition& weights) {
  std::vector<std::size_t> layout;
  for (std::size_t i = 0; i < weights.n_attributes(); ++i) layout.push_back(weights.users_in_attribute(i));
  json theta = json::array();
  for (Eigen::Index k = 0; k < weights.theta.size(); ++k) theta.push_back(weights.theta(k));
  return {{"d", weights.dim()},
          {"users_per_attribute", layout},
          {"theta", std::move(theta)},
          {"p", matrix_rows(weights.p)},
          {"u", matrix_rows(weights.u)}};
}

WeightDecomposition weights_from_json(const json& j) {
  const std::string where = "weights";
  const auto d = field<std::size_t>(j, "d", where);
  const auto layout = field<std::vector<std::size_t>>(j, "users_per_attribute", where);
  WeightDecomposition w(d, layout);
  const auto theta = field<std::vector<double>>(j, "theta", where);
  if (theta.size() != d) throw Error(ErrorCode::ShapeMismatch, "theta has the wrong length");
  for (std::size_t k = 0; k < d; ++k) w.theta(static_cast<Eigen::Index>(k)) = theta[k];
  w.p = matrix_from_rows(j.at("p"), w.p.rows(), w.p.cols(), "p");
  w.u = matrix_from_rows(j.at("u"), w.u.rows(), w.u.cols(), "u");
  return w;
}

json to_json(const SolverConfig& config) {
  return {{"lambda1", config.penalties.lambda1},
          {"lambda2", config.penalties.lambda2},
          {"lambda3", config.penalties.lambda3},
          {"rho0", config.rho0},
          {"eta", config.eta},
          {"max_iterations", config.max_iterations},
          {"rel_tolerance", config.rel_tolerance},
          {"accelerated", config.accelerated}};
}

json to_json(const SolverTrace& trace) {
  json records = json::array();
  for (const auto& r : trace.records) {
    records.push_back({{"iteration", r.iteration},
                       {"objective", r.objective},
                       {"loss", r.loss},
                       {"regularizer", r.regularizer},
                       {"rho", r.rho},
                       {"backtracks", r.backtracks},
                       {"momentum", r.momentum},
                       {"seconds", r.seconds}});
  }
  return records;
}

json to_json(const FitResult& result, const SolverConfig& config, bool include_trace) {
  json j = {{"weights", to_json(result.weights)},
            {"config", to_json(config)},
            {"converged", result.converged},
            {"status", to_string(result.status)},
            {"iterations_used", result.iterations_used},
            {"initial_objective", result.initial_objective},
            {"final_objective", result.final_objective}};
  if (include_trace) j["trace"] = to_json(result.trace);
  return j;
}

json to_json(const SynthConfig& c) {
  return {{"d", c.d},
          {"n_a", c.n_a},
          {"users_per_attribute", c.users_per_attribute},
          {"samples_per_subtask", c.samples_per_subtask},
          {"feature_variance", c.feature_variance},
          {"noise_variance", c.noise_variance},
          {"theta_mean", c.theta_mean},
          {"theta_variance", c.theta_variance},
          {"p_mean", c.p_mean},
          {"p_variance", c.p_variance},
          {"u_mean", c.u_mean},
          {"u_variance", c.u_variance},
          {"theta_zero_range", {c.theta_zero_range.begin, c.theta_zero_range.end}},
          {"p_zero_row_range", {c.p_zero_row_range.begin, c.p_zero_row_range.end}},
          {"u_zero_cols_per_attribute", c.u_zero_cols_per_attribute},
          {"seed", c.seed}};
}

json to_json(const GroundTruth& truth) { return {{"weights", to_json(truth.weights)}, {"config", to_json(truth.config)}}; }

WeightDecomposition read_weights(const fs::path& path) {
  const json j = read_json(path);
  if (!j.contains("weights")) throw Error(ErrorCode::ParseError, path.string() + ": missing 'weights'");
  return weights_from_json(j.at("weights"));
}

void write_json(const json& j, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

void write_trace_csv(const SolverTrace& trace, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << "iteration,objective,loss,regularizer,rho,backtracks,momentum,seconds\n";
  for (const auto& r : trace.records) {
    out << r.iteration << ',' << format_double(r.objective) << ',' << format_double(r.loss) << ','
        << format_double(r.regularizer) << ',' << format_double(r.rho) << ',' << r.backtracks << ','
        << format_double(r.momentum) << ',' << format_double(r.seconds) << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

}  // namespace hiermtl::io
