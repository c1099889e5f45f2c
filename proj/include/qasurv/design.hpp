#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "qasurv/feature_row.hpp"
#include "qasurv/spline.hpp"

namespace qasurv {

enum class TermKind { kSpline, kBinary, kLinear };

// One covariate's transform plan.
struct CovariateTerm {
  std::string covariate;
  TermKind kind = TermKind::kLinear;
  int spline_knots = 0;  // only for kSpline
  PreTransform pre_transform = PreTransform::kIdentity;
};

// The fixed model of the analysis: four 3-knot splines (three of them on
// the log scale), one binary indicator, one plain integer column.
struct ModelPlan {
  std::vector<CovariateTerm> terms;

  static ModelPlan standard();
};

enum class ColumnKind { kLinear, kSplineNonlinear, kBinary, kInteger };

const char* column_kind_name(ColumnKind kind);

struct DesignColumn {
  std::string label;      // "bodylength", "bodylength'", ...
  std::string covariate;  // source feature name
  ColumnKind kind = ColumnKind::kLinear;
  int nonlinear_index = 0;  // 1-based spline term index, 0 otherwise
  double mean = 0.0;        // centering offset applied to this column
};

// Everything needed to rebuild and interpret design rows, minus the data.
struct TermLayout {
  CovariateTerm term;
  std::optional<SplineSpec> spline;
  int first_column = 0;
  int column_count = 0;
};

struct DesignInfo {
  std::vector<DesignColumn> columns;
  std::vector<TermLayout> terms;

  int dimension() const { return static_cast<int>(columns.size()); }
  const TermLayout& layout_for(const std::string& covariate) const;

  // Basis row for one FeatureRow on the original (uncentered) scale.
  Eigen::RowVectorXd raw_row(const FeatureRow& row) const;
  // Centered basis row, as used for fitting and prediction.
  Eigen::RowVectorXd centered_row(const FeatureRow& row) const;
};

// n x p centered design matrix. Constant columns are rejected at
// construction; every spline covariate contributes k - 1 adjacent columns.
struct DesignMatrix {
  DesignInfo info;
  Eigen::MatrixXd values;  // centered

  int n() const { return static_cast<int>(values.rows()); }
  int p() const { return static_cast<int>(values.cols()); }
};

DesignMatrix build_design(const std::vector<FeatureRow>& rows,
                          const ModelPlan& plan);

// Rebuilds a design matrix for new rows under an existing layout: the
// stored knots and column means are applied as-is, nothing re-derived.
DesignMatrix design_from_info(const DesignInfo& info,
                              const std::vector<FeatureRow>& rows);

}  // namespace qasurv
