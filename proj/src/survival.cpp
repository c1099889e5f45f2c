#include "qasurv/survival.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "qasurv/errors.hpp"
#include "qasurv/stats.hpp"

namespace qasurv {

namespace {

void validate_times(const std::vector<SurvivalRecord>& records) {
  if (records.empty()) {
    throw InvalidInputError("survival estimation requires a non-empty dataset");
  }
  for (const auto& r : records) {
    if (!(r.time >= 0.0) || !std::isfinite(r.time)) {
      throw InvalidInputError("survival times must be finite and non-negative");
    }
  }
}

}  // namespace

SurvivalCurve km_fit(const std::vector<SurvivalRecord>& records,
                     double confidence_level) {
  validate_times(records);
  if (!(confidence_level > 0.0 && confidence_level < 1.0)) {
    throw InvalidInputError("confidence level must lie in (0, 1)");
  }

  std::vector<std::pair<double, bool>> obs;
  obs.reserve(records.size());
  for (const auto& r : records) obs.emplace_back(r.time, r.event);
  std::sort(obs.begin(), obs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  const double z = stats::normal_two_sided_z(confidence_level);

  SurvivalCurve curve;
  curve.confidence_level = confidence_level;
  curve.n_records = static_cast<long>(records.size());

  long at_risk = static_cast<long>(obs.size());
  double survival = 1.0;
  double greenwood = 0.0;  // running variance of log S

  std::size_t i = 0;
  while (i < obs.size()) {
    const double t = obs[i].first;
    long d = 0, c = 0;
    std::size_t j = i;
    while (j < obs.size() && obs[j].first == t) {
      obs[j].second ? ++d : ++c;
      ++j;
    }
    if (d > 0) {
      curve.n_events += d;
      survival *= 1.0 - static_cast<double>(d) / static_cast<double>(at_risk);
      if (at_risk > d) {
        greenwood += static_cast<double>(d) /
                     (static_cast<double>(at_risk) * static_cast<double>(at_risk - d));
      } else {
        survival = 0.0;  // everyone remaining failed; variance stops accumulating
      }
      SurvivalStep step;
      step.time = t;
      step.at_risk = at_risk;
      step.events = d;
      step.survival = survival;
      step.greenwood = greenwood;
      if (survival > 0.0) {
        const double half = z * std::sqrt(greenwood);
        step.lower = std::exp(std::log(survival) - half);
        step.upper = std::min(1.0, std::exp(std::log(survival) + half));
      } else {
        step.lower = 0.0;
        step.upper = 0.0;
      }
      curve.steps.push_back(step);
    }
    at_risk -= d + c;
    i = j;
  }

  // The lower band sits below the curve, so it crosses 0.5 first and bounds
  // the median from below; the upper band crosses last and bounds it above.
  for (const auto& step : curve.steps) {
    if (!curve.median && step.survival <= 0.5) curve.median = step.time;
    if (!curve.median_lower && step.lower <= 0.5) curve.median_lower = step.time;
    if (!curve.median_upper && step.upper <= 0.5) curve.median_upper = step.time;
  }
  return curve;
}

double km_survival_at(const SurvivalCurve& curve, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw InvalidInputError("km_survival_at: t must be finite and non-negative");
  }
  const auto it = std::upper_bound(
      curve.steps.begin(), curve.steps.end(), t,
      [](double value, const SurvivalStep& s) { return value < s.time; });
  if (it == curve.steps.begin()) return 1.0;
  return std::prev(it)->survival;
}

LogRankResult logrank_test(const std::vector<SurvivalRecord>& records) {
  validate_times(records);

  // Group labels sorted for deterministic reporting.
  std::map<std::string, int> group_index;
  for (const auto& r : records) group_index.emplace(r.group, 0);
  const int k = static_cast<int>(group_index.size());
  if (k < 2) {
    throw InvalidInputError("log-rank test requires at least two groups");
  }
  {
    int idx = 0;
    for (auto& [label, index] : group_index) index = idx++;
  }

  struct Obs {
    double time;
    bool event;
    int group;
  };
  std::vector<Obs> obs;
  obs.reserve(records.size());
  bool any_event = false;
  for (const auto& r : records) {
    obs.push_back({r.time, r.event, group_index.at(r.group)});
    any_event |= r.event;
  }
  if (!any_event) {
    throw InvalidInputError("log-rank test requires at least one event");
  }
  std::sort(obs.begin(), obs.end(),
            [](const Obs& a, const Obs& b) { return a.time < b.time; });

  std::vector<double> at_risk(k, 0.0);
  LogRankResult result;
  result.per_group.resize(k);
  for (const auto& [label, index] : group_index) {
    result.per_group[index].group = label;
  }
  for (const auto& o : obs) {
    at_risk[o.group] += 1.0;
    result.per_group[o.group].records += 1;
  }

  Eigen::VectorXd observed = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd expected = Eigen::VectorXd::Zero(k);
  Eigen::MatrixXd covariance = Eigen::MatrixXd::Zero(k, k);
  std::vector<double> deaths(k);

  std::size_t i = 0;
  while (i < obs.size()) {
    const double t = obs[i].time;
    std::fill(deaths.begin(), deaths.end(), 0.0);
    double d_total = 0.0, removed_total = 0.0;
    std::vector<double> removed(k, 0.0);
    std::size_t j = i;
    while (j < obs.size() && obs[j].time == t) {
      removed[obs[j].group] += 1.0;
      removed_total += 1.0;
      if (obs[j].event) {
        deaths[obs[j].group] += 1.0;
        d_total += 1.0;
      }
      ++j;
    }
    if (d_total > 0.0) {
      const double n = std::accumulate(at_risk.begin(), at_risk.end(), 0.0);
      for (int g = 0; g < k; ++g) {
        observed[g] += deaths[g];
        expected[g] += d_total * at_risk[g] / n;
      }
      if (n > 1.0) {
        const double factor = d_total * (n - d_total) / (n - 1.0);
        for (int a = 0; a < k; ++a) {
          const double pa = at_risk[a] / n;
          for (int b = 0; b < k; ++b) {
            const double delta = (a == b) ? 1.0 : 0.0;
            covariance(a, b) += factor * pa * (delta - at_risk[b] / n);
          }
        }
      }
    }
    for (int g = 0; g < k; ++g) at_risk[g] -= removed[g];
    i = j;
  }

  for (int g = 0; g < k; ++g) {
    result.per_group[g].observed = observed[g];
    result.per_group[g].expected = expected[g];
  }

  // Drop the last group to remove the rank deficiency of the full matrix.
  const Eigen::VectorXd u = (observed - expected).head(k - 1);
  const Eigen::MatrixXd v = covariance.topLeftCorner(k - 1, k - 1);
  double chi_square = u.dot(v.ldlt().solve(u));
  if (!std::isfinite(chi_square) || chi_square < 0.0) chi_square = 0.0;

  result.chi_square = chi_square;
  result.degrees_of_freedom = k - 1;
  result.p_value = stats::chi_square_sf(chi_square, k - 1);
  return result;
}

}  // namespace qasurv
