#include "qasurv/cox.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qasurv/errors.hpp"

namespace qasurv {

namespace {

std::vector<int> order_by_time_descending(const std::vector<double>& times) {
  std::vector<int> order(times.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return times[a] > times[b];
  });
  return order;
}

void validate_survival_inputs(Eigen::Index n, const std::vector<double>& times,
                              const std::vector<bool>& events) {
  if (times.size() != static_cast<std::size_t>(n) ||
      events.size() != static_cast<std::size_t>(n)) {
    throw InvalidInputError("times/events length must match the design rows");
  }
  bool any_event = false;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || times[i] < 0.0) {
      throw InvalidInputError("event times must be finite and non-negative");
    }
    any_event |= events[i];
  }
  if (!any_event) {
    throw InvalidInputError("proportional-hazards fit requires at least one event");
  }
}

}  // namespace

CoxObjective cox_objective(const Eigen::MatrixXd& x,
                           const std::vector<double>& times,
                           const std::vector<bool>& events,
                           const Eigen::VectorXd& beta, TieMethod ties) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  validate_survival_inputs(n, times, events);
  if (beta.size() != p) {
    throw InvalidInputError("beta length must match the design columns");
  }

  const auto order = order_by_time_descending(times);
  const Eigen::VectorXd eta = x * beta;

  CoxObjective obj;
  obj.gradient = Eigen::VectorXd::Zero(p);
  obj.information = Eigen::MatrixXd::Zero(p, p);

  // Risk-set accumulators, extended as the sweep moves to earlier times.
  double risk_sum = 0.0;
  Eigen::VectorXd risk_xw = Eigen::VectorXd::Zero(p);
  Eigen::MatrixXd risk_xxw = Eigen::MatrixXd::Zero(p, p);

  Eigen::VectorXd tied_xw(p);
  Eigen::MatrixXd tied_xxw(p, p);
  Eigen::VectorXd z(p);

  std::size_t i = 0;
  while (i < order.size()) {
    const double t = times[order[i]];
    double tied_sum = 0.0;
    tied_xw.setZero();
    tied_xxw.setZero();
    long d = 0;
    std::size_t j = i;
    while (j < order.size() && times[order[j]] == t) {
      const int s = order[j];
      const double w = std::exp(eta[s]);
      const auto row = x.row(s).transpose();
      risk_sum += w;
      risk_xw.noalias() += w * row;
      risk_xxw.noalias() += w * row * row.transpose();
      if (events[s]) {
        ++d;
        obj.loglik += eta[s];
        obj.gradient += row;
        if (ties == TieMethod::kEfron) {
          tied_sum += w;
          tied_xw.noalias() += w * row;
          tied_xxw.noalias() += w * row * row.transpose();
        }
      }
      ++j;
    }
    for (long l = 0; l < d; ++l) {
      const double f = (ties == TieMethod::kEfron && d > 1)
                           ? static_cast<double>(l) / static_cast<double>(d)
                           : 0.0;
      const double phi = risk_sum - f * tied_sum;
      z = (risk_xw - f * tied_xw) / phi;
      obj.loglik -= std::log(phi);
      obj.gradient -= z;
      obj.information.noalias() += (risk_xxw - f * tied_xxw) / phi;
      obj.information.noalias() -= z * z.transpose();
    }
    i = j;
  }
  return obj;
}

CoxFit cox_fit(const DesignMatrix& design, const std::vector<double>& times,
               const std::vector<bool>& events, const CoxFitOptions& options) {
  const Eigen::Index n = design.values.rows();
  const Eigen::Index p = design.values.cols();
  validate_survival_inputs(n, times, events);
  if (n < p + 1) {
    throw InvalidInputError("need at least p + 1 observations to fit " +
                            std::to_string(p) + " coefficients");
  }

  CoxFit fit;
  fit.design = design.info;
  fit.beta = Eigen::VectorXd::Zero(p);

  CoxObjective obj =
      cox_objective(design.values, times, events, fit.beta, options.ties);
  fit.loglik_trace.push_back(obj.loglik);

  // Eigen's LDLT::rcond() estimates through solve(), which treats a zero
  // pivot like a pseudo-inverse and reports a healthy condition number for
  // exactly singular matrices. The pivot ratio catches rank deficiency.
  const auto check_identifiable = [](const Eigen::LDLT<Eigen::MatrixXd>& ldlt,
                                     const char* what) {
    const Eigen::VectorXd d = ldlt.vectorD();
    const double d_max = d.maxCoeff();
    if (ldlt.info() != Eigen::Success || !(d_max > 0.0) ||
        d.minCoeff() <= d_max * 1e-13) {
      throw NonIdentifiableError(what);
    }
  };

  const auto solve_step = [&](const CoxObjective& at) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(at.information);
    check_identifiable(ldlt,
                       "information matrix is singular; covariates are "
                       "collinear");
    Eigen::VectorXd delta = ldlt.solve(at.gradient);
    if (!delta.allFinite()) {
      throw NonIdentifiableError(
          "information matrix is singular; covariates are collinear");
    }
    return delta;
  };

  bool reached_tolerance = false;
  while (fit.iterations < options.max_iterations) {
    Eigen::VectorXd delta = solve_step(obj);

    double scale = 1.0;
    CoxObjective candidate;
    bool accepted = false;
    for (int h = 0; h <= options.max_step_halvings; ++h) {
      const Eigen::VectorXd trial = fit.beta + scale * delta;
      candidate =
          cox_objective(design.values, times, events, trial, options.ties);
      if (std::isfinite(candidate.loglik) && candidate.loglik >= obj.loglik) {
        fit.beta = trial;
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) {
      // No trial step improved the log likelihood even after halving. If the
      // quadratic model promises less gain than rounding noise we are at the
      // optimum to machine precision; anything larger is a genuine failure.
      const double promised = 0.5 * obj.gradient.dot(delta);
      if (promised <=
          options.tolerance * (std::abs(obj.loglik) + options.tolerance)) {
        reached_tolerance = true;
      }
      break;
    }

    ++fit.iterations;
    const double change = candidate.loglik - obj.loglik;
    obj = std::move(candidate);
    fit.loglik_trace.push_back(obj.loglik);
    if (change <= options.tolerance * (std::abs(obj.loglik) + options.tolerance)) {
      reached_tolerance = true;
      break;
    }
  }

  // One polishing step so the score at the reported optimum is ~0; keeps
  // Schoenfeld residual sums and derived contrasts at full precision.
  if (reached_tolerance) {
    Eigen::VectorXd delta = solve_step(obj);
    const Eigen::VectorXd trial = fit.beta + delta;
    CoxObjective polished =
        cox_objective(design.values, times, events, trial, options.ties);
    if (std::isfinite(polished.loglik) && polished.loglik >= obj.loglik) {
      fit.beta = trial;
      obj = std::move(polished);
      fit.loglik_trace.push_back(obj.loglik);
      ++fit.iterations;
    }
  }

  fit.converged = reached_tolerance;
  fit.log_partial_likelihood = obj.loglik;

  Eigen::LDLT<Eigen::MatrixXd> ldlt(obj.information);
  check_identifiable(ldlt, "information matrix is singular at the optimum");
  Eigen::MatrixXd cov = ldlt.solve(Eigen::MatrixXd::Identity(p, p));
  fit.covariance = 0.5 * (cov + cov.transpose());
  return fit;
}

std::vector<BaselineStep> baseline_cumulative_hazard(
    const Eigen::MatrixXd& x, const std::vector<double>& times,
    const std::vector<bool>& events, const Eigen::VectorXd& beta) {
  validate_survival_inputs(x.rows(), times, events);
  const Eigen::VectorXd eta = x * beta;
  const auto order = order_by_time_descending(times);

  // Hazard increments gathered newest-first, then reversed and accumulated.
  std::vector<BaselineStep> increments;
  double risk_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double t = times[order[i]];
    double tied_sum = 0.0;
    long d = 0;
    std::size_t j = i;
    while (j < order.size() && times[order[j]] == t) {
      const double w = std::exp(eta[order[j]]);
      risk_sum += w;
      if (events[order[j]]) {
        ++d;
        tied_sum += w;
      }
      ++j;
    }
    if (d > 0) {
      double increment = 0.0;
      for (long l = 0; l < d; ++l) {
        const double f =
            d > 1 ? static_cast<double>(l) / static_cast<double>(d) : 0.0;
        increment += 1.0 / (risk_sum - f * tied_sum);
      }
      increments.push_back({t, increment});
    }
    i = j;
  }

  std::reverse(increments.begin(), increments.end());
  double cumulative = 0.0;
  for (auto& step : increments) {
    cumulative += step.cumulative_hazard;
    step.cumulative_hazard = cumulative;
  }
  return increments;
}

}  // namespace qasurv
