#include "blockspec/report_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>
#include <vector>

#include "blockspec/error.hpp"

namespace blockspec {

using nlohmann::ordered_json;

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw Error(ErrorCode::kIoError, "cannot format double");
  return std::string(buf.data(), ptr);
}

std::string density_csv(const RadialDensity& density) {
  const Eigen::Index d = density.psi_grid.rows();
  std::string out = "r,u,f,p,M";
  for (Eigen::Index c = 0; c < d; ++c) out += ",psi_" + std::to_string(c + 1);
  out += '\n';
  for (std::size_t k = 0; k < density.size(); ++k) {
    out += format_double(density.r_grid[k]);
    for (const double v : {density.u_grid[k], density.f[k], density.p[k], density.M[k]}) {
      out += ',';
      out += format_double(v);
    }
    for (Eigen::Index c = 0; c < d; ++c) {
      out += ',';
      out += format_double(density.psi_grid(c, static_cast<Eigen::Index>(k)));
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    fields.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) return fields;
    start = pos + 1;
  }
}

double parse_field(std::string_view field, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::kParseError,
                "line " + std::to_string(line) + ": bad number '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

RadialDensity parse_density_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start < text.size();) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  if (lines.empty()) throw Error(ErrorCode::kParseError, "empty density CSV");
  const auto header = split(lines[0], ',');
  if (header.size() < 6 || header[0] != "r" || header[4] != "M") {
    throw Error(ErrorCode::kParseError, "unexpected density CSV header");
  }
  const auto d = static_cast<Eigen::Index>(header.size() - 5);
  const std::size_t rows = lines.size() - 1;

  RadialDensity out;
  out.psi_grid.resize(d, static_cast<Eigen::Index>(rows));
  for (std::size_t k = 0; k < rows; ++k) {
    const auto fields = split(lines[k + 1], ',');
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(k + 2) + ": wrong field count");
    }
    out.r_grid.push_back(parse_field(fields[0], k + 2));
    out.u_grid.push_back(parse_field(fields[1], k + 2));
    out.f.push_back(parse_field(fields[2], k + 2));
    out.p.push_back(parse_field(fields[3], k + 2));
    out.M.push_back(parse_field(fields[4], k + 2));
    for (Eigen::Index c = 0; c < d; ++c) {
      out.psi_grid(c, static_cast<Eigen::Index>(k)) =
          parse_field(fields[static_cast<std::size_t>(5 + c)], k + 2);
    }
  }
  out.radius = out.r_grid.empty() ? 0.0 : out.r_grid.back();
  return out;
}

std::string eigenvalues_csv(const EmpiricalSpectrum& spectrum) {
  std::string out = "re,im,trial\n";
  for (std::size_t k = 0; k < spectrum.eigenvalues.size(); ++k) {
    const auto z = spectrum.eigenvalues[k];
    out += format_double(z.real());
    out += ',';
    out += format_double(z.imag());
    out += ',';
    out += std::to_string(k / spectrum.n);
    out += '\n';
  }
  return out;
}

namespace {

ordered_json matrix_json(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

ordered_json radius_json(const ReducedPair& reduced) {
  ordered_json out;
  out["radius"] = std::sqrt(reduced.pf_value);
  out["pf_value"] = reduced.pf_value;
  out["pf_vector"] = std::vector<double>(reduced.pf_vector.begin(), reduced.pf_vector.end());
  out["G"] = matrix_json(reduced.G);
  out["Ghat"] = matrix_json(reduced.Ghat);
  return out;
}

ordered_json mass_json(double r1, double r2, double mass) {
  ordered_json out;
  out["r1"] = r1;
  out["r2"] = r2;
  out["mass"] = mass;
  return out;
}

ordered_json comparison_json(const ComparisonReport& report, const EmpiricalSpectrum& empirical) {
  ordered_json out;
  out["N"] = empirical.n;
  out["trials"] = empirical.trials;
  out["seed"] = empirical.seed;
  out["ks_radial"] = report.ks_radial;
  out["radius_rel_err"] = report.radius_rel_err;
  out["theory_radius"] = report.theory_radius;
  out["empirical_radius"] = report.empirical_radius;
  ordered_json bins = ordered_json::array();
  for (const auto& b : report.per_bin) {
    ordered_json bin;
    bin["r_lo"] = b.r_lo;
    bin["r_hi"] = b.r_hi;
    bin["empirical_mass"] = b.empirical_mass;
    bin["theory_mass"] = b.theory_mass;
    bin["diff"] = b.diff;
    bins.push_back(std::move(bin));
  }
  out["per_bin"] = std::move(bins);
  return out;
}

}  // namespace blockspec
