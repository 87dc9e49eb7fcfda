#include "blockspec/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace blockspec {

using nlohmann::json;

namespace {

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  const std::size_t end = std::min(text.size(), byte > 0 ? byte - 1 : 0);
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

void reject_unknown_keys(const json& object, const std::set<std::string>& allowed,
                         const std::string& prefix) {
  for (const auto& [key, value] : object.items()) {
    if (!allowed.contains(key)) throw ValidationError(prefix + key, "unknown key");
  }
}

double as_number(const json& value, const std::string& field) {
  if (!value.is_number()) throw ValidationError(field, "expected a number");
  return value.get<double>();
}

std::uint64_t as_unsigned(const json& value, const std::string& field) {
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  if (value.is_number_integer()) throw ValidationError(field, "must not be negative");
  throw ValidationError(field, "expected a nonnegative integer");
}

Eigen::VectorXd parse_alpha(const json& value) {
  if (!value.is_array() || value.empty()) {
    throw ValidationError("alpha", "expected a nonempty array of numbers");
  }
  Eigen::VectorXd alpha(static_cast<Eigen::Index>(value.size()));
  for (std::size_t c = 0; c < value.size(); ++c) {
    alpha[static_cast<Eigen::Index>(c)] =
        as_number(value[c], "alpha[" + std::to_string(c) + "]");
  }
  return alpha;
}

Eigen::MatrixXd parse_g(const json& value, Eigen::Index d) {
  if (!value.is_array() || static_cast<Eigen::Index>(value.size()) != d) {
    throw ValidationError("g", "expected " + std::to_string(d) + " rows to match alpha");
  }
  Eigen::MatrixXd g(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    const json& row = value[static_cast<std::size_t>(c)];
    const std::string row_name = "g[" + std::to_string(c) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d) {
      throw ValidationError(row_name, "expected " + std::to_string(d) + " entries");
    }
    for (Eigen::Index e = 0; e < d; ++e) {
      g(c, e) = as_number(row[static_cast<std::size_t>(e)],
                          row_name + "[" + std::to_string(e) + "]");
    }
  }
  return g;
}

SolverParams parse_solver(const json& value) {
  if (!value.is_object()) throw ValidationError("solver", "expected an object");
  reject_unknown_keys(value, {"tol", "max_iter", "damping", "t0", "t_min", "vanish_threshold"},
                      "solver.");
  SolverParams p;
  if (value.contains("tol")) p.tol = as_number(value["tol"], "solver.tol");
  if (value.contains("max_iter")) {
    p.max_iter = static_cast<long>(as_unsigned(value["max_iter"], "solver.max_iter"));
  }
  if (value.contains("damping")) p.damping = as_number(value["damping"], "solver.damping");
  if (value.contains("t0")) p.t0 = as_number(value["t0"], "solver.t0");
  if (value.contains("t_min")) p.t_min = as_number(value["t_min"], "solver.t_min");
  if (value.contains("vanish_threshold")) {
    p.vanish_threshold = as_number(value["vanish_threshold"], "solver.vanish_threshold");
  }
  return p;
}

}  // namespace

void RunConfig::validate() const {
  try {
    blockspec::validate(structure);
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::kInvalidAlpha: throw ValidationError("alpha", e.what());
      case ErrorCode::kInvalidD: throw ValidationError("alpha", e.what());
      default: throw ValidationError("g", e.what());
    }
  }
  const auto d = static_cast<std::size_t>(structure.blocks());
  if (n < 10 || n < d) throw ValidationError("N", "must be at least max(10, D)");
  if (trials < 1) throw ValidationError("trials", "must be at least 1");
  if (grid_points < 9) throw ValidationError("grid_points", "must be at least 9");
  try {
    solver.validate();
  } catch (const Error& e) {
    throw ValidationError("solver", e.what());
  }
}

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    std::ostringstream msg;
    msg << "line " << line << ", column " << column << ": " << e.what();
    throw ParseError(msg.str(), line, column);
  }
  if (!doc.is_object()) throw ValidationError("<root>", "expected a JSON object");
  reject_unknown_keys(doc,
                      {"alpha", "g", "distribution", "N", "trials", "seed", "grid_points", "solver",
                       "output_path"},
                      "");
  if (!doc.contains("alpha")) throw ValidationError("alpha", "required");
  if (!doc.contains("g")) throw ValidationError("g", "required");

  RunConfig cfg;
  cfg.structure.alpha = parse_alpha(doc["alpha"]);
  cfg.structure.g = parse_g(doc["g"], cfg.structure.alpha.size());
  if (doc.contains("distribution")) {
    const json& dist = doc["distribution"];
    const auto parsed = dist.is_string() ? parse_distribution(dist.get<std::string>()) : std::nullopt;
    if (!parsed) {
      throw ValidationError("distribution",
                            "expected \"real-gaussian\", \"complex-gaussian\" or \"rademacher\"");
    }
    cfg.structure.distribution = *parsed;
  }
  if (doc.contains("N")) cfg.n = static_cast<std::size_t>(as_unsigned(doc["N"], "N"));
  if (doc.contains("trials")) {
    cfg.trials = static_cast<std::size_t>(as_unsigned(doc["trials"], "trials"));
  }
  if (doc.contains("seed")) cfg.seed = as_unsigned(doc["seed"], "seed");
  if (doc.contains("grid_points")) {
    const std::uint64_t points = as_unsigned(doc["grid_points"], "grid_points");
    if (points > 100000000) throw ValidationError("grid_points", "too large");
    cfg.grid_points = static_cast<int>(points);
  }
  if (doc.contains("solver")) cfg.solver = parse_solver(doc["solver"]);
  if (doc.contains("output_path")) {
    if (!doc["output_path"].is_string()) throw ValidationError("output_path", "expected a string");
    cfg.output_path = doc["output_path"].get<std::string>();
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open config file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace blockspec
