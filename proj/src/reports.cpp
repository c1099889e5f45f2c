#include "qasurv/reports.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "qasurv/errors.hpp"
#include "qasurv/stats.hpp"
#include "qasurv/survival.hpp"

namespace qasurv {

namespace {

std::string format_value(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void require_converged(const CoxFit& fit, const char* what) {
  if (!fit.converged) {
    throw InvalidStateError(std::string(what) +
                            " requires a converged fit");
  }
}

// Contrast vector between two original-scale values of one covariate,
// zero on every other column. Centering cancels in the difference.
Eigen::VectorXd covariate_contrast(const DesignInfo& info,
                                   const TermLayout& layout, double hi,
                                   double lo) {
  Eigen::VectorXd delta = Eigen::VectorXd::Zero(info.dimension());
  if (layout.term.kind == TermKind::kSpline) {
    const auto& spec = *layout.spline;
    const double a =
        apply_pre_transform(layout.term.pre_transform, hi, layout.term.covariate);
    const double b =
        apply_pre_transform(layout.term.pre_transform, lo, layout.term.covariate);
    const auto basis_hi = spline_basis(spec, a);
    const auto basis_lo = spline_basis(spec, b);
    for (int j = 0; j < layout.column_count; ++j) {
      delta[layout.first_column + j] = basis_hi[j] - basis_lo[j];
    }
  } else {
    delta[layout.first_column] = hi - lo;
  }
  return delta;
}

}  // namespace

HazardRatioSummary hazard_ratio_summary(const CoxFit& fit,
                                        const std::vector<FeatureRow>& rows,
                                        const std::vector<double>& levels) {
  require_converged(fit, "hazard_ratio_summary");
  if (rows.empty()) {
    throw InvalidInputError("hazard_ratio_summary requires data rows");
  }

  std::vector<double> sorted_levels = levels;
  std::sort(sorted_levels.begin(), sorted_levels.end());

  HazardRatioSummary summary;
  for (const auto& layout : fit.design.terms) {
    std::vector<double> raw;
    raw.reserve(rows.size());
    for (const auto& row : rows) {
      raw.push_back(covariate_value(row, layout.term.covariate));
    }
    std::sort(raw.begin(), raw.end());

    double hi, lo;
    std::string contrast;
    if (layout.term.kind == TermKind::kBinary) {
      hi = 1.0;
      lo = 0.0;
      contrast = "1 vs 0";
    } else {
      hi = stats::quantile_sorted(raw, 0.75);
      lo = stats::quantile_sorted(raw, 0.25);
      contrast = format_value(hi) + " vs " + format_value(lo);
    }

    const Eigen::VectorXd delta = covariate_contrast(fit.design, layout, hi, lo);
    const double log_hr = delta.dot(fit.beta);
    const double se = std::sqrt(std::max(0.0, delta.dot(fit.covariance * delta)));

    HazardRatioEntry entry;
    entry.covariate = layout.term.covariate;
    entry.contrast = contrast;
    entry.hazard_ratio = std::exp(log_hr);
    for (double level : sorted_levels) {
      const double z = stats::normal_two_sided_z(level);
      entry.intervals.push_back(
          {level, std::exp(log_hr - z * se), std::exp(log_hr + z * se)});
    }
    summary.per_covariate.push_back(std::move(entry));
  }
  return summary;
}

const char* time_transform_name(TimeTransform t) {
  switch (t) {
    case TimeTransform::kIdentity: return "identity";
    case TimeTransform::kKaplanMeier: return "km";
    case TimeTransform::kRank: return "rank";
    case TimeTransform::kLog: return "log";
  }
  return "km";
}

TimeTransform time_transform_from_name(const std::string& name) {
  if (name == "identity") return TimeTransform::kIdentity;
  if (name == "km") return TimeTransform::kKaplanMeier;
  if (name == "rank") return TimeTransform::kRank;
  if (name == "log") return TimeTransform::kLog;
  throw InvalidInputError("unknown time transform: " + name);
}

SchoenfeldResiduals schoenfeld_residuals(const CoxFit& fit,
                                         const DesignMatrix& design,
                                         const std::vector<double>& times,
                                         const std::vector<bool>& events) {
  const Eigen::Index n = design.values.rows();
  const Eigen::Index p = design.values.cols();
  if (times.size() != static_cast<std::size_t>(n) ||
      events.size() != static_cast<std::size_t>(n)) {
    throw InvalidInputError("times/events length must match the design rows");
  }
  if (fit.beta.size() != p) {
    throw InvalidInputError("fit dimension does not match the design");
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return times[a] > times[b]; });

  const Eigen::VectorXd eta = design.values * fit.beta;

  SchoenfeldResiduals out;
  std::vector<std::pair<double, Eigen::VectorXd>> rows;  // newest first

  double risk_sum = 0.0;
  Eigen::VectorXd risk_xw = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd tied_xw(p);
  Eigen::VectorXd mean_avg(p);

  std::size_t i = 0;
  while (i < order.size()) {
    const double t = times[order[i]];
    double tied_sum = 0.0;
    tied_xw.setZero();
    std::vector<int> tied_events;
    std::size_t j = i;
    while (j < order.size() && times[order[j]] == t) {
      const int s = order[j];
      const double w = std::exp(eta[s]);
      risk_sum += w;
      risk_xw.noalias() += w * design.values.row(s).transpose();
      if (events[s]) {
        tied_events.push_back(s);
        tied_sum += w;
        tied_xw.noalias() += w * design.values.row(s).transpose();
      }
      ++j;
    }
    const long d = static_cast<long>(tied_events.size());
    if (d > 0) {
      // Efron risk-set mean, averaged over the tie weights; every tied
      // event at this time shares it.
      mean_avg.setZero();
      for (long l = 0; l < d; ++l) {
        const double f =
            d > 1 ? static_cast<double>(l) / static_cast<double>(d) : 0.0;
        mean_avg += (risk_xw - f * tied_xw) / (risk_sum - f * tied_sum);
      }
      mean_avg /= static_cast<double>(d);
      // Subjects in ascending original index order for determinism.
      std::sort(tied_events.begin(), tied_events.end());
      for (int s : tied_events) {
        rows.emplace_back(t, design.values.row(s).transpose() - mean_avg);
      }
    }
    i = j;
  }

  std::reverse(rows.begin(), rows.end());
  out.event_times.reserve(rows.size());
  out.residuals.resize(static_cast<Eigen::Index>(rows.size()), p);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.event_times.push_back(rows[r].first);
    out.residuals.row(static_cast<Eigen::Index>(r)) = rows[r].second.transpose();
  }
  return out;
}

namespace {

std::vector<double> transform_event_times(const std::vector<double>& event_times,
                                          const std::vector<double>& all_times,
                                          const std::vector<bool>& all_events,
                                          TimeTransform transform) {
  const std::size_t m = event_times.size();
  std::vector<double> g(m);
  switch (transform) {
    case TimeTransform::kIdentity:
      g = event_times;
      break;
    case TimeTransform::kLog:
      for (std::size_t i = 0; i < m; ++i) {
        if (!(event_times[i] > 0.0)) {
          throw InvalidInputError("log time transform requires positive event times");
        }
        g[i] = std::log(event_times[i]);
      }
      break;
    case TimeTransform::kRank: {
      // Average ranks over ties, 1-based.
      std::size_t i = 0;
      while (i < m) {
        std::size_t j = i;
        while (j < m && event_times[j] == event_times[i]) ++j;
        const double avg = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
        for (std::size_t r = i; r < j; ++r) g[r] = avg;
        i = j;
      }
      break;
    }
    case TimeTransform::kKaplanMeier: {
      // 1 - KM(t-): the left-continuous product-limit estimate over the
      // model's own data, evaluated just before each event.
      std::vector<SurvivalRecord> records(all_times.size());
      for (std::size_t i = 0; i < all_times.size(); ++i) {
        records[i].time = all_times[i];
        records[i].event = all_events[i];
      }
      const SurvivalCurve km = km_fit(records, 0.95);
      for (std::size_t i = 0; i < m; ++i) {
        double s_left = 1.0;
        for (const auto& step : km.steps) {
          if (step.time < event_times[i]) {
            s_left = step.survival;
          } else {
            break;
          }
        }
        g[i] = 1.0 - s_left;
      }
      break;
    }
  }
  return g;
}

}  // namespace

PHDiagnostics schoenfeld_test(const CoxFit& fit, const DesignMatrix& design,
                              const std::vector<double>& times,
                              const std::vector<bool>& events,
                              TimeTransform transform) {
  require_converged(fit, "schoenfeld_test");

  const SchoenfeldResiduals sr = schoenfeld_residuals(fit, design, times, events);
  const auto m = static_cast<Eigen::Index>(sr.event_times.size());
  const Eigen::Index p = design.values.cols();
  if (m < 2) {
    throw InvalidInputError("proportional-hazards test requires at least two events");
  }

  const std::vector<double> g =
      transform_event_times(sr.event_times, times, events, transform);
  Eigen::VectorXd xx(m);
  for (Eigen::Index i = 0; i < m; ++i) xx[i] = g[static_cast<std::size_t>(i)];
  xx.array() -= xx.mean();
  const double sxx = xx.squaredNorm();
  if (!(sxx > 0.0)) {
    throw InvalidInputError("time transform is constant over the events");
  }

  const double d = static_cast<double>(m);
  // Scaled residuals, up to the additive beta that drops out of both the
  // correlation and the slope test.
  const Eigen::MatrixXd scaled = sr.residuals * fit.covariance * d;

  PHDiagnostics out;
  out.transform = transform;

  std::vector<double> xs(m);
  for (Eigen::Index i = 0; i < m; ++i) xs[static_cast<std::size_t>(i)] = xx[i];

  std::vector<double> column_chisq(p);
  for (Eigen::Index k = 0; k < p; ++k) {
    const double test = xx.dot(scaled.col(k));
    const double denom = fit.covariance(k, k) * d * sxx;
    const double chisq = denom > 0.0 ? test * test / denom : 0.0;
    column_chisq[static_cast<std::size_t>(k)] = chisq;
    std::vector<double> col(m);
    for (Eigen::Index i = 0; i < m; ++i) col[static_cast<std::size_t>(i)] = scaled(i, k);
    out.per_column.push_back({fit.design.columns[static_cast<std::size_t>(k)].label,
                              stats::pearson_correlation(xs, col), chisq,
                              stats::chi_square_sf(chisq, 1)});
  }

  for (const auto& layout : fit.design.terms) {
    CovariatePH row;
    row.covariate = layout.term.covariate;
    row.rho = out.per_column[static_cast<std::size_t>(layout.first_column)].rho;
    row.df = layout.column_count;
    double chisq = 0.0;
    for (int j = 0; j < layout.column_count; ++j) {
      chisq += column_chisq[static_cast<std::size_t>(layout.first_column + j)];
    }
    row.chi_square = chisq;
    row.p_value = stats::chi_square_sf(chisq, row.df);
    out.per_covariate.push_back(std::move(row));
  }

  const Eigen::VectorXd v = sr.residuals.transpose() * xx;
  double global = v.dot(fit.covariance * v) * d / sxx;
  if (!std::isfinite(global) || global < 0.0) global = 0.0;
  out.global_chi_square = global;
  out.global_df = static_cast<int>(p);
  out.global_p = stats::chi_square_sf(global, out.global_df);
  return out;
}

std::vector<EffectPoint> effect_curve(const CoxFit& fit,
                                      const std::vector<FeatureRow>& rows,
                                      const std::string& covariate,
                                      const std::vector<double>& grid) {
  require_converged(fit, "effect_curve");
  const TermLayout& layout = fit.design.layout_for(covariate);

  std::vector<double> raw;
  raw.reserve(rows.size());
  for (const auto& row : rows) raw.push_back(covariate_value(row, covariate));
  std::sort(raw.begin(), raw.end());
  if (raw.empty()) {
    throw InvalidInputError("effect_curve requires data rows");
  }
  const double reference = stats::quantile_sorted(raw, 0.5);
  const double lo = raw.front(), hi = raw.back();

  const double z95 = stats::normal_two_sided_z(0.95);
  std::vector<EffectPoint> out;
  out.reserve(grid.size());
  for (double x : grid) {
    if (!(x >= lo && x <= hi)) {
      throw InvalidInputError("effect grid value outside the observed range");
    }
    const Eigen::VectorXd delta =
        covariate_contrast(fit.design, layout, x, reference);
    const double log_hr = delta.dot(fit.beta);
    const double se = std::sqrt(std::max(0.0, delta.dot(fit.covariance * delta)));
    out.push_back({x, log_hr, log_hr - z95 * se, log_hr + z95 * se});
  }
  return out;
}

}  // namespace qasurv
