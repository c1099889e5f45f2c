#include "qasurv/design.hpp"

#include <cmath>

#include "qasurv/errors.hpp"

namespace qasurv {

double covariate_value(const FeatureRow& row, const std::string& name) {
  if (name == "zscore") return row.zscore;
  if (name == "bodylength") return static_cast<double>(row.bodylength);
  if (name == "titlelength") return static_cast<double>(row.titlelength);
  if (name == "hasexample") return row.hasexample ? 1.0 : 0.0;
  if (name == "tagscount") return static_cast<double>(row.tagscount);
  if (name == "sumpeople") return static_cast<double>(row.sumpeople);
  throw InvalidInputError("unknown covariate: " + name);
}

ModelPlan ModelPlan::standard() {
  ModelPlan plan;
  plan.terms = {
      {"zscore", TermKind::kSpline, 3, PreTransform::kIdentity},
      {"bodylength", TermKind::kSpline, 3, PreTransform::kNaturalLog},
      {"titlelength", TermKind::kSpline, 3, PreTransform::kNaturalLog},
      {"hasexample", TermKind::kBinary, 0, PreTransform::kIdentity},
      {"tagscount", TermKind::kLinear, 0, PreTransform::kIdentity},
      {"sumpeople", TermKind::kSpline, 3, PreTransform::kNaturalLog},
  };
  return plan;
}

const char* column_kind_name(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::kLinear: return "linear";
    case ColumnKind::kSplineNonlinear: return "nonlinear";
    case ColumnKind::kBinary: return "binary";
    case ColumnKind::kInteger: return "integer";
  }
  return "linear";
}

const TermLayout& DesignInfo::layout_for(const std::string& covariate) const {
  for (const auto& layout : terms) {
    if (layout.term.covariate == covariate) return layout;
  }
  throw InvalidInputError("model has no covariate named '" + covariate + "'");
}

Eigen::RowVectorXd DesignInfo::raw_row(const FeatureRow& row) const {
  Eigen::RowVectorXd out(dimension());
  for (const auto& layout : terms) {
    const double raw = covariate_value(row, layout.term.covariate);
    if (layout.term.kind == TermKind::kSpline) {
      const double x = apply_pre_transform(layout.term.pre_transform, raw,
                                           layout.term.covariate);
      std::vector<double> basis = spline_basis(*layout.spline, x);
      for (int j = 0; j < layout.column_count; ++j) {
        out[layout.first_column + j] = basis[j];
      }
    } else {
      out[layout.first_column] = raw;
    }
  }
  return out;
}

Eigen::RowVectorXd DesignInfo::centered_row(const FeatureRow& row) const {
  Eigen::RowVectorXd out = raw_row(row);
  for (int j = 0; j < dimension(); ++j) out[j] -= columns[j].mean;
  return out;
}

DesignMatrix build_design(const std::vector<FeatureRow>& rows,
                          const ModelPlan& plan) {
  if (rows.empty()) {
    throw InvalidInputError("build_design requires a non-empty dataset");
  }
  if (plan.terms.empty()) {
    throw InvalidInputError("model plan has no covariates");
  }

  const auto n = static_cast<Eigen::Index>(rows.size());
  DesignMatrix design;

  // First pass: fix the layout and fit the spline specs.
  int p = 0;
  for (const auto& term : plan.terms) {
    TermLayout layout;
    layout.term = term;
    layout.first_column = p;
    if (term.kind == TermKind::kSpline) {
      std::vector<double> raw;
      raw.reserve(rows.size());
      for (const auto& row : rows) {
        raw.push_back(covariate_value(row, term.covariate));
      }
      layout.spline = make_spline_spec(std::move(raw), term.spline_knots,
                                       term.pre_transform, term.covariate);
      layout.column_count = layout.spline->basis_dim();
      design.info.columns.push_back(
          {term.covariate, term.covariate, ColumnKind::kLinear, 0, 0.0});
      for (int j = 1; j < layout.column_count; ++j) {
        design.info.columns.push_back({term.covariate + std::string(j, '\''),
                                       term.covariate,
                                       ColumnKind::kSplineNonlinear, j, 0.0});
      }
    } else {
      layout.column_count = 1;
      const auto kind = term.kind == TermKind::kBinary ? ColumnKind::kBinary
                                                       : ColumnKind::kInteger;
      design.info.columns.push_back({term.covariate, term.covariate, kind, 0, 0.0});
    }
    p += layout.column_count;
    design.info.terms.push_back(std::move(layout));
  }

  design.values.resize(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    design.values.row(i) = design.info.raw_row(rows[i]);
  }

  for (int j = 0; j < p; ++j) {
    const double lo = design.values.col(j).minCoeff();
    const double hi = design.values.col(j).maxCoeff();
    if (!(hi > lo)) {
      throw DegenerateCovariateError(design.info.columns[j].covariate,
                                     "column '" + design.info.columns[j].label +
                                         "' is constant across rows");
    }
    const double mean = design.values.col(j).mean();
    design.info.columns[j].mean = mean;
    design.values.col(j).array() -= mean;
  }
  return design;
}

DesignMatrix design_from_info(const DesignInfo& info,
                              const std::vector<FeatureRow>& rows) {
  if (rows.empty()) {
    throw InvalidInputError("design_from_info requires a non-empty dataset");
  }
  DesignMatrix design;
  design.info = info;
  design.values.resize(static_cast<Eigen::Index>(rows.size()), info.dimension());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    design.values.row(static_cast<Eigen::Index>(i)) = info.centered_row(rows[i]);
  }
  return design;
}

}  // namespace qasurv
