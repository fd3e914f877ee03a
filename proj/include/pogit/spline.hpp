#pragma once

#include <Eigen/Core>
#include <vector>

namespace pogit {

/// B-spline description over a closed interval. Boundary knots are clamped
/// (repeated degree + 1 times), so the basis spans constants and satisfies
/// partition of unity on [lo, hi]. Degrees 0..3 are supported.
struct SplineSpec {
  int degree = 3;
  std::vector<double> interior_knots;
  double lo = 0.0;
  double hi = 1.0;

  /// Throws std::invalid_argument on a malformed spec (bad degree, knots not
  /// strictly ascending or outside the open domain, lo >= hi).
  void validate() const;

  int n_basis() const {
    return degree + 1 + static_cast<int>(interior_knots.size());
  }

  /// Full clamped knot vector: lo x(degree+1), interior, hi x(degree+1).
  std::vector<double> knot_vector() const;

  /// Evenly spaced interior knots: count knots strictly inside [lo, hi].
  static SplineSpec uniform(int degree, int count, double lo, double hi);
};

/// Basis evaluation matrix: rows index points, columns index basis functions.
/// Every entry is >= 0 and each row sums to 1. Points outside [lo, hi] raise
/// std::domain_error — the model never extrapolates a spline.
Eigen::MatrixXd build_basis(const std::vector<double>& points,
                            const SplineSpec& spec);

/// Linear map D with (D theta)_i = f'(x_i) for spline coefficients theta.
/// Requires degree >= 1.
Eigen::MatrixXd first_derivative_map(const SplineSpec& spec,
                                     const std::vector<double>& eval_points);

/// Linear map D with (D theta)_i = f''(x_i). Requires degree >= 2; used to
/// discretize convexity/concavity constraints.
Eigen::MatrixXd second_derivative_map(const SplineSpec& spec,
                                      const std::vector<double>& eval_points);

/// Shared implementation: derivative order 0, 1 or 2.
Eigen::MatrixXd spline_design(const std::vector<double>& points,
                              const SplineSpec& spec, int deriv);

/// count points evenly covering [lo, hi] inclusive (count >= 2).
std::vector<double> linspace(double lo, double hi, int count);

}  // namespace pogit
