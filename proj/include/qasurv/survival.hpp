#pragma once

#include <optional>
#include <string>
#include <vector>

namespace qasurv {

// One right-censored subject: the minutes a question stayed open and
// whether the observation ended with a resolution (accepted answer) or
// with the end of the observation window.
struct SurvivalRecord {
  double time = 0.0;  // minutes, >= 0
  bool event = false; // true = resolved, false = right-censored
  std::string group;  // site label; used by logrank_test
  std::vector<double> covariates;
};

// One drop of the product-limit curve.
struct SurvivalStep {
  double time = 0.0;         // distinct event time
  long at_risk = 0;          // n_i
  long events = 0;           // d_i
  double survival = 0.0;     // S(t_i)
  double greenwood = 0.0;    // Greenwood variance of log S(t_i)
  double lower = 0.0;        // confidence band, log transform
  double upper = 0.0;
};

struct SurvivalCurve {
  std::vector<SurvivalStep> steps;
  double confidence_level = 0.95;
  std::optional<double> median;        // absent when S never reaches 0.5
  std::optional<double> median_lower;  // absent = unbounded on that side
  std::optional<double> median_upper;
  long n_records = 0;
  long n_events = 0;
};

struct GroupEventCounts {
  std::string group;
  double observed = 0.0;
  double expected = 0.0;
  long records = 0;
};

struct LogRankResult {
  double chi_square = 0.0;
  int degrees_of_freedom = 0;  // number of groups - 1
  double p_value = 1.0;
  std::vector<GroupEventCounts> per_group;  // sorted by group label
};

// Kaplan-Meier product-limit estimate with a Greenwood variance of
// log S and a log-transform confidence band clamped to [0, 1].
// Ties between events and censorings at one time keep the censored
// subjects in the risk set for that time's drop.
SurvivalCurve km_fit(const std::vector<SurvivalRecord>& records,
                     double confidence_level = 0.95);

// Right-continuous step evaluation; 1 before the first event time.
double km_survival_at(const SurvivalCurve& curve, double t);

// k-sample Mantel-Haenszel (log-rank) test over the records' group
// labels. Uses the full hypergeometric covariance with one group
// dropped; p-value from the chi-square distribution on k - 1 df.
LogRankResult logrank_test(const std::vector<SurvivalRecord>& records);

}  // namespace qasurv
