#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qasurv/design.hpp"

namespace qasurv {

enum class TieMethod { kEfron, kBreslow };

struct CoxFitOptions {
  TieMethod ties = TieMethod::kEfron;
  double tolerance = 1e-9;  // relative change of the log partial likelihood
  int max_iterations = 50;
  int max_step_halvings = 20;
};

// One step of the cumulative baseline hazard (at the mean covariates of
// the centered design).
struct BaselineStep {
  double time = 0.0;
  double cumulative_hazard = 0.0;
};

struct CoxFit {
  Eigen::VectorXd beta;
  Eigen::MatrixXd covariance;  // inverse observed information
  double log_partial_likelihood = 0.0;
  std::vector<double> loglik_trace;  // per accepted Newton step, non-decreasing
  int iterations = 0;
  bool converged = false;
  DesignInfo design;  // column-to-covariate mapping of the fitted model
  std::vector<BaselineStep> baseline;  // empty until requested
};

// Log partial likelihood with analytic score and observed information.
struct CoxObjective {
  double loglik = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd information;
};

// Evaluates the (Efron or Breslow) log partial likelihood at beta.
// With no tied event times the two methods coincide.
CoxObjective cox_objective(const Eigen::MatrixXd& x,
                           const std::vector<double>& times,
                           const std::vector<bool>& events,
                           const Eigen::VectorXd& beta,
                           TieMethod ties = TieMethod::kEfron);

// Newton-Raphson maximization with step halving. Accepted steps never
// decrease the log partial likelihood. Throws NonIdentifiableError when
// the information matrix is singular, InvalidInputError when n < p + 1
// or there is no event. Non-convergence is reported via the flag.
CoxFit cox_fit(const DesignMatrix& design, const std::vector<double>& times,
               const std::vector<bool>& events, const CoxFitOptions& options = {});

// Efron-adjusted Breslow estimator of the cumulative baseline hazard.
std::vector<BaselineStep> baseline_cumulative_hazard(
    const Eigen::MatrixXd& x, const std::vector<double>& times,
    const std::vector<bool>& events, const Eigen::VectorXd& beta);

}  // namespace qasurv
