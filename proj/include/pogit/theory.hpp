#pragma once

#include <Eigen/Core>
#include <cstdint>

namespace pogit {

/// The analyzed setting: a single rate covariate x_lambda ~ N(mu_lambda,
/// sigma_lambda^2) and a single reporting covariate x_p ~ N(0, sigma_p^2),
/// independent, with no intercepts in either block.
struct TwoCovariateSetting {
  double theta_lambda = 1.0;
  double theta_p = 1.0;
  double mu_lambda = 0.0;
  double sigma_lambda = 1.0;
  double sigma_p = 1.0;
  long n = 50;

  void validate() const;

  /// E[lambda] = exp(mu_lambda * t + sigma_lambda^2 t^2 / 2), the lognormal
  /// mean of exp(x_lambda * theta_lambda).
  double mean_lambda() const;
  /// Exactly 1/2: x_p is symmetric about zero, so E[expit(x_p theta_p)] = 1/2.
  static constexpr double mean_p() { return 0.5; }
};

/// Closed-form lower bound on Cov([theta_lambda, theta_p]) for any unbiased
/// estimator in this setting:
///   diag( 1 / (E[p]((mu + s^2 t)^2 + s^2)),  2 theta_p^2 ) / (n E[lambda]).
Eigen::Matrix2d crlb(const TwoCovariateSetting& s);

struct FisherMcResult {
  Eigen::Matrix2d mean;  // Monte-Carlo estimate of the per-sample information
  Eigen::Matrix2d se;    // standard error per entry
  long n_samples = 0;
};

/// Monte-Carlo estimate of the per-observation Fisher information
/// E[-d^2 log l / d theta^2], averaging the analytic per-sample negative
/// Hessian over draws of (x_lambda, x_p, Y). Sampling is chunked into fixed
/// substreams so the result is bit-identical for any thread count.
FisherMcResult fisher_information_mc(const TwoCovariateSetting& s,
                                     long n_samples, std::uint64_t seed);

namespace ref {
/// Serial single-stream reference for the MC kernel (tests and benchmarks).
FisherMcResult fisher_information_mc(const TwoCovariateSetting& s,
                                     long n_samples, std::uint64_t seed);
}  // namespace ref

/// max over u of exp(u) u^2 / (1 + exp(u))^3, evaluated by a dense grid scan
/// on [-50, 50] plus golden-section refinement. The proof's bound says the
/// value is at most 1/2.
double constant_c_bound();

}  // namespace pogit
