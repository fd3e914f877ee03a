#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pogit/constraints.hpp"
#include "pogit/dataset.hpp"
#include "pogit/model.hpp"

namespace pogit {

struct FitOptions {
  double tol = 1e-6;          // projected-gradient KKT tolerance
  int max_iter = 500;         // accepted Newton steps, across outer rounds
  double box_lo = -20.0;      // default coefficient bounds
  double box_hi = 20.0;
  double feas_tol = 1e-8;     // inequality feasibility slack
  std::optional<Eigen::VectorXd> init;
};

struct FitResult {
  ParameterVector theta_hat;
  double objective = 0.0;  // nll + prior penalties at theta_hat
  bool converged = false;
  int n_iterations = 0;
  double kkt_residual = 0.0;
  std::vector<int> active_constraints;  // inequality rows at their bound
  std::vector<int> active_bounds;       // coefficients pinned at a box bound
  Eigen::VectorXd multipliers;          // inequality multipliers (may be empty)
  std::vector<double> objective_trace;  // accepted objective values
  std::string message;
};

/// Raised when no point satisfies A theta <= b within the box; `row` is the
/// inequality with the largest residual at the least-infeasible point found.
struct InfeasibleError : std::runtime_error {
  int row;
  explicit InfeasibleError(int row_, const std::string& what)
      : std::runtime_error(what), row(row_) {}
};

/// Smooth objective callback: value/gradient/Hessian per the `what` mask.
/// A non-finite result makes the line search backtrack.
using Objective = std::function<EvalResult(const Eigen::VectorXd&, unsigned)>;

/// Projected-Newton minimization over box constraints. Objective values of
/// accepted iterates decrease monotonically; convergence is declared on the
/// sup-norm of the projected gradient.
FitResult minimize_box(const Objective& f, Eigen::VectorXd x0,
                       const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                       double tol, int max_iter);

/// Augmented-Lagrangian outer loop over minimize_box for A theta <= b.
/// Throws InfeasibleError when the feasibility phase cannot reach the region.
FitResult minimize_constrained(const Objective& f, const ConstraintSet& cons,
                               Eigen::VectorXd x0, const FitOptions& opts);

/// Constrained penalized maximum likelihood for a Pogit model. Deterministic
/// given (spec, data, options); non-convergence is reported, never silent.
FitResult fit(const PogitSpec& spec, const Dataset& data,
              const FitOptions& opts = {});

/// Same entry point for pre-materialized inputs (used by the simulation
/// drivers, which build their tiny designs directly).
FitResult fit(const PogitData& data, const ConstraintSet& cons,
              const std::vector<GaussianPrior>& priors, const FitOptions& opts);

/// Plain Poisson regression: p structurally one.
FitResult fit_poisson(const DesignBlock& design, const Dataset& data,
                      const std::string& count_column,
                      const FitOptions& opts = {},
                      const std::optional<std::string>& exposure_column = {});

/// Lowers a spec's shape constraints and priors against materialized designs.
ConstraintSet assemble_constraints(const PogitSpec& spec,
                                   const FitOptions& opts);
std::vector<GaussianPrior> assemble_priors(const PogitSpec& spec,
                                           const PogitData& data);

/// nll + sum of prior penalties as a solver objective.
Objective penalized_objective(const PogitData& data,
                              const std::vector<GaussianPrior>& priors);

}  // namespace pogit
