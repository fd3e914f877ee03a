#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "pogit/constraints.hpp"
#include "pogit/dataset.hpp"
#include "pogit/design.hpp"
#include "pogit/link.hpp"

namespace pogit {

/// Full model description: how the rate lambda and the reporting probability
/// p are built from covariates, which links apply, and which constraints and
/// priors shape the fit. An empty p block fixes p = 1 structurally, which
/// reduces the model to plain Poisson regression.
struct PogitSpec {
  DesignBlock lambda_design;
  DesignBlock p_design;
  LinkFunction lambda_link = LinkFunction::log_link();
  LinkFunction p_link = LinkFunction::logit();

  std::string count_column = "y";
  std::optional<std::string> exposure_column;    // multiplies lambda
  std::optional<std::string> true_count_column;  // validation only

  std::vector<ShapeConstraint> shape_constraints;
  struct PriorSpec {
    enum class Kind { Coefficients, LinearPredictor, MeanLinearPredictor };
    Kind kind = Kind::Coefficients;
    bool on_p_block = true;
    std::vector<std::string> coefficients;  // empty = whole block
    double target = 0.0;
    double weight = 1.0;
  };
  std::vector<PriorSpec> priors;

  int n_coef() const { return lambda_design.n_cols() + p_design.n_cols(); }
  void validate() const;

  /// Coefficient names qualified with their block: "lambda.x", "p.s".
  std::vector<std::string> coefficient_names() const;
};

/// Concatenated coefficients [theta_lambda; theta_p] with the block split.
struct ParameterVector {
  Eigen::VectorXd values;
  Eigen::Index n_lambda = 0;

  Eigen::Index size() const { return values.size(); }
  auto lambda_block() const { return values.head(n_lambda); }
  auto p_block() const { return values.tail(values.size() - n_lambda); }

  static ParameterVector zeros(Eigen::Index n_lambda, Eigen::Index n_p);
};

/// Model inputs materialized against one dataset: design matrices, counts,
/// optional log-exposure offset. Evaluation functions below are pure in
/// (data, theta).
struct PogitData {
  Eigen::MatrixXd x_lambda;
  Eigen::MatrixXd x_p;  // 0 columns = p fixed at 1
  Eigen::VectorXd y;
  Eigen::VectorXd offset;  // log exposure per row; empty = none
  LinkFunction p_link = LinkFunction::logit();
  double log_y_factorial = 0.0;  // sum of lgamma(y_i + 1), cached

  Eigen::Index n() const { return y.size(); }
  Eigen::Index n_coef() const { return x_lambda.cols() + x_p.cols(); }
};

/// Builds PogitData from a spec and dataset; checks counts are non-negative
/// integers and exposure is positive, and that y <= y_star where both exist.
PogitData materialize(const PogitSpec& spec, const Dataset& data);

constexpr unsigned kValue = 1u;
constexpr unsigned kGrad = 2u;
constexpr unsigned kHess = 4u;

struct EvalResult {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  bool finite = true;
  Eigen::Index bad_row = -1;
};

/// Negative log-likelihood sum_i [mu_i - y_i log mu_i + log(y_i!)] with
/// analytic gradient and Hessian. Rows are accumulated in fixed-size chunks
/// (OpenMP across chunks, serial fold in chunk order), so the result is
/// bit-identical for any thread count.
EvalResult pogit_eval(const PogitData& data, const Eigen::VectorXd& theta,
                      unsigned what);

/// Throwing wrapper: raises std::runtime_error naming the offending row when
/// mu overflows or degenerates.
double neg_log_likelihood(const PogitData& data, const Eigen::VectorXd& theta);

struct Prediction {
  double lambda = 0.0;
  double p = 1.0;
  double mu = 0.0;
};

/// Per-row prediction; mu is computed as lambda * p in exactly the same
/// floating-point order the likelihood uses.
std::vector<Prediction> predict(const PogitData& data,
                                const Eigen::VectorXd& theta);
std::vector<Prediction> predict(const PogitSpec& spec, const Dataset& data,
                                const ParameterVector& theta);

/// Gradient and Hessian contribution of a single observation, used by the
/// sandwich estimator.
void row_derivatives(const PogitData& data, const Eigen::VectorXd& theta,
                     Eigen::Index row, Eigen::VectorXd& grad,
                     Eigen::MatrixXd& hess);

namespace ref {
/// Straightforward single-pass serial evaluation, kept as the reference the
/// chunked kernel is tested and benchmarked against.
EvalResult pogit_eval(const PogitData& data, const Eigen::VectorXd& theta,
                      unsigned what);
}  // namespace ref

/// Plain Poisson regression data (p = 1): reuses PogitData with no p block.
PogitData poisson_data(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& offset = {});

}  // namespace pogit
