#pragma once

#include <string>
#include <vector>

#include "qasurv/cox.hpp"
#include "qasurv/design.hpp"
#include "qasurv/feature_row.hpp"

namespace qasurv {

struct ConfidenceInterval {
  double level = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

// Hazard ratio of one covariate over its inter-quartile range (or between
// categories for a binary covariate), all other covariates held fixed.
// Spline covariates combine their linear and nonlinear columns in one
// contrast.
struct HazardRatioEntry {
  std::string covariate;
  std::string contrast;  // original-scale description, e.g. "757 vs 279"
  double hazard_ratio = 1.0;
  std::vector<ConfidenceInterval> intervals;  // ordered by level
};

struct HazardRatioSummary {
  std::vector<HazardRatioEntry> per_covariate;
};

HazardRatioSummary hazard_ratio_summary(
    const CoxFit& fit, const std::vector<FeatureRow>& rows,
    const std::vector<double>& levels = {0.90, 0.95, 0.99});

enum class TimeTransform { kIdentity, kKaplanMeier, kRank, kLog };

const char* time_transform_name(TimeTransform t);
TimeTransform time_transform_from_name(const std::string& name);

struct ColumnPH {
  std::string label;  // design column label
  double rho = 0.0;   // correlation of scaled residuals with g(t)
  double chi_square = 0.0;
  double p_value = 1.0;  // 1 df
};

struct CovariatePH {
  std::string covariate;
  double rho = 0.0;  // of the covariate's first (linear) column
  double chi_square = 0.0;
  int df = 1;
  double p_value = 1.0;
};

struct PHDiagnostics {
  std::vector<CovariatePH> per_covariate;  // one row per model covariate
  std::vector<ColumnPH> per_column;        // one row per design column
  double global_chi_square = 0.0;
  int global_df = 0;
  double global_p = 1.0;
  TimeTransform transform = TimeTransform::kKaplanMeier;
};

// Tests the proportional-hazards assumption through the correlation of
// scaled Schoenfeld residuals with a transform of the event times.
// Columns of one spline covariate are aggregated into a single row by
// summing their chi-squares with matching degrees of freedom.
PHDiagnostics schoenfeld_test(const CoxFit& fit, const DesignMatrix& design,
                              const std::vector<double>& times,
                              const std::vector<bool>& events,
                              TimeTransform transform = TimeTransform::kKaplanMeier);

// Unscaled Schoenfeld residuals, one row per event, sorted by event time.
// Exposed for diagnostics plots and tests.
struct SchoenfeldResiduals {
  std::vector<double> event_times;  // ascending
  Eigen::MatrixXd residuals;        // n_events x p
};
SchoenfeldResiduals schoenfeld_residuals(const CoxFit& fit,
                                         const DesignMatrix& design,
                                         const std::vector<double>& times,
                                         const std::vector<bool>& events);

struct EffectPoint {
  double x = 0.0;  // original covariate scale
  double log_hazard_ratio = 0.0;
  double lower = 0.0;  // 95% band
  double upper = 0.0;
};

// Log hazard ratio of one covariate along a grid of original-scale
// values, contrasted against the covariate's observed median.
std::vector<EffectPoint> effect_curve(const CoxFit& fit,
                                      const std::vector<FeatureRow>& rows,
                                      const std::string& covariate,
                                      const std::vector<double>& grid);

}  // namespace qasurv
