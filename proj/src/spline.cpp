#include "qasurv/spline.hpp"

#include <algorithm>
#include <cmath>

#include "qasurv/errors.hpp"
#include "qasurv/stats.hpp"

namespace qasurv {

const char* pre_transform_name(PreTransform t) {
  return t == PreTransform::kNaturalLog ? "natural_log" : "identity";
}

PreTransform pre_transform_from_name(const std::string& name) {
  if (name == "identity") return PreTransform::kIdentity;
  if (name == "natural_log") return PreTransform::kNaturalLog;
  throw InvalidInputError("unknown pre-transform: " + name);
}

double apply_pre_transform(PreTransform t, double x, const std::string& covariate) {
  if (t == PreTransform::kIdentity) return x;
  if (!(x > 0.0)) {
    throw DegenerateCovariateError(covariate,
                                   "natural log requires positive values");
  }
  return std::log(x);
}

namespace {

std::vector<double> knot_quantiles(int k) {
  switch (k) {
    case 3:
      return {0.10, 0.50, 0.90};
    case 4:
      return {0.05, 0.35, 0.65, 0.95};
    case 5:
      return {0.05, 0.275, 0.50, 0.725, 0.95};
    default:
      throw InvalidInputError("spline knot count must be 3, 4, or 5");
  }
}

inline double positive_cube(double u) {
  return u > 0.0 ? u * u * u : 0.0;
}

}  // namespace

SplineSpec make_spline_spec(std::vector<double> values, int k,
                            PreTransform pre_transform,
                            std::string covariate_name) {
  const auto probs = knot_quantiles(k);
  if (values.empty()) {
    throw DegenerateCovariateError(covariate_name, "no values to place knots on");
  }
  for (double& v : values) {
    if (!std::isfinite(v)) {
      throw InvalidInputError("spline values must be finite");
    }
    v = apply_pre_transform(pre_transform, v, covariate_name);
  }
  std::sort(values.begin(), values.end());
  long distinct = 1;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] != values[i - 1]) ++distinct;
  }
  if (distinct < k) {
    throw DegenerateCovariateError(
        covariate_name, "fewer than " + std::to_string(k) + " distinct values");
  }

  SplineSpec spec;
  spec.source_covariate = std::move(covariate_name);
  spec.pre_transform = pre_transform;
  spec.knots.reserve(probs.size());
  for (double p : probs) spec.knots.push_back(stats::quantile_sorted(values, p));
  for (std::size_t i = 1; i < spec.knots.size(); ++i) {
    if (!(spec.knots[i] > spec.knots[i - 1])) {
      throw DegenerateCovariateError(spec.source_covariate,
                                     "duplicate knots; values too concentrated");
    }
  }
  return spec;
}

void spline_basis(const SplineSpec& spec, double x, std::span<double> out) {
  const int k = static_cast<int>(spec.knots.size());
  if (static_cast<int>(out.size()) != k - 1) {
    throw InvalidInputError("spline_basis: output span has wrong size");
  }
  if (!std::isfinite(x)) {
    throw InvalidInputError("spline_basis: x must be finite");
  }
  const auto& t = spec.knots;
  out[0] = x;
  const double span2 = (t[k - 1] - t[0]) * (t[k - 1] - t[0]);
  const double tail = t[k - 1] - t[k - 2];
  for (int j = 0; j < k - 2; ++j) {
    const double term = positive_cube(x - t[j]) -
                        positive_cube(x - t[k - 2]) * (t[k - 1] - t[j]) / tail +
                        positive_cube(x - t[k - 1]) * (t[k - 2] - t[j]) / tail;
    out[j + 1] = term / span2;
  }
}

std::vector<double> spline_basis(const SplineSpec& spec, double x) {
  std::vector<double> out(spec.basis_dim());
  spline_basis(spec, x, out);
  return out;
}

}  // namespace qasurv
