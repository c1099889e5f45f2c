#pragma once

#include <span>
#include <string>
#include <vector>

namespace qasurv {

enum class PreTransform { kIdentity, kNaturalLog };

const char* pre_transform_name(PreTransform t);
PreTransform pre_transform_from_name(const std::string& name);

// Applies the covariate's pre-transform. Throws DegenerateCovariateError
// when a log transform receives a non-positive value.
double apply_pre_transform(PreTransform t, double x, const std::string& covariate);

// Knot layout and basis rule of one restricted-cubic-spline covariate.
// The basis has knots.size() - 1 columns: one linear term plus
// knots.size() - 2 cubic terms that are linear outside the boundary knots.
struct SplineSpec {
  std::vector<double> knots;  // strictly increasing, 3 to 5 knots
  std::string source_covariate;
  PreTransform pre_transform = PreTransform::kIdentity;

  int basis_dim() const { return static_cast<int>(knots.size()) - 1; }
};

// Places knots at the default quantiles of the (pre-transformed) values:
// k=3 at (0.10, 0.50, 0.90), k=4 at (0.05, 0.35, 0.65, 0.95),
// k=5 at (0.05, 0.275, 0.50, 0.725, 0.95).
SplineSpec make_spline_spec(std::vector<double> values, int k,
                            PreTransform pre_transform,
                            std::string covariate_name);

// Evaluates the basis at x (already pre-transformed). `out` must have
// basis_dim() entries. Column 0 is x itself; cubic terms are scaled by
// 1 / (t_k - t_1)^2 so all columns share the linear column's scale.
void spline_basis(const SplineSpec& spec, double x, std::span<double> out);
std::vector<double> spline_basis(const SplineSpec& spec, double x);

}  // namespace qasurv
