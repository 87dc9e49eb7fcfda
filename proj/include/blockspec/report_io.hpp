#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "blockspec/density.hpp"
#include "blockspec/montecarlo.hpp"
#include "blockspec/reduced_matrices.hpp"

namespace blockspec {

// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

// Columns r,u,f,p,M,psi_1..psi_D; LF line endings, header row.
std::string density_csv(const RadialDensity& density);

// Inverse of density_csv (f, p, M, psi taken verbatim, radius = last r).
RadialDensity parse_density_csv(std::string_view text);

// Columns re,im,trial.
std::string eigenvalues_csv(const EmpiricalSpectrum& spectrum);

nlohmann::ordered_json radius_json(const ReducedPair& reduced);
nlohmann::ordered_json mass_json(double r1, double r2, double mass);
nlohmann::ordered_json comparison_json(const ComparisonReport& report,
                                       const EmpiricalSpectrum& empirical);

}  // namespace blockspec
