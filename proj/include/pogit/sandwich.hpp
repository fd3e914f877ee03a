#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "pogit/model.hpp"

namespace pogit {

/// Robust covariance V = A^{-1} B A^{-1}: A is the summed observed Hessian of
/// the (unpenalized) negative log-likelihood at theta_hat, B the summed
/// outer product of per-observation gradients. Wider than A^{-1} under model
/// misspecification, which is the point.
struct SandwichCovariance {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
  Eigen::MatrixXd v;
};

/// Raised when A is numerically singular; `directions` hold near-null
/// eigenvectors, which typically spell out an unidentified reparameterization.
struct RankDeficiencyError : std::runtime_error {
  std::vector<Eigen::VectorXd> directions;
  RankDeficiencyError(std::string what, std::vector<Eigen::VectorXd> dirs)
      : std::runtime_error(std::move(what)), directions(std::move(dirs)) {}
};

SandwichCovariance sandwich(const PogitData& data, const Eigen::VectorXd& theta_hat);

struct Interval {
  double lo = 0.0, mid = 0.0, hi = 0.0;
};

struct RowIntervals {
  Interval lambda, p, mu;
};

/// Delta-method confidence intervals per row, formed on each linear-predictor
/// scale and mapped through the inverse links, so p stays in its link range
/// and lambda stays positive. The mu interval uses the delta method on
/// log mu = eta_lambda + log p.
std::vector<RowIntervals> intervals(const PogitData& data,
                                    const Eigen::VectorXd& theta_hat,
                                    const Eigen::MatrixXd& v, double level);

}  // namespace pogit
