#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace pogit {

struct DesignBlock;

/// Linear inequalities A theta <= b over the full coefficient vector, plus
/// per-coefficient box bounds. Feasibility of the region is established at
/// fit time by finding a feasible start.
struct ConstraintSet {
  Eigen::MatrixXd a;  // n_rows x n_coef (0 x 0 when empty)
  Eigen::VectorXd b;
  Eigen::VectorXd box_lo, box_hi;

  bool has_rows() const { return a.rows() > 0; }
  Eigen::Index n_rows() const { return a.rows(); }

  /// Appends rows; a must already have n_coef columns.
  void append(const Eigen::MatrixXd& rows, const Eigen::VectorXd& rhs);

  static ConstraintSet boxes_only(Eigen::Index n_coef, double lo, double hi);
};

/// Quadratic penalty (w/2) * ||C theta - m||^2 added to the objective — a
/// Gaussian prior on the linear functional C theta.
struct GaussianPrior {
  Eigen::MatrixXd c;
  Eigen::VectorXd m;
  double weight = 1.0;

  void validate(Eigen::Index n_coef) const;
};

/// Declarative shape constraints on a single block, lowered to rows of
/// A theta <= b using the spline derivative maps on a uniform grid.
struct ShapeConstraint {
  enum class Kind {
    NonNegative,   // single coefficient >= 0
    NonPositive,   // single coefficient <= 0
    Increasing,    // f' >= 0 on the grid
    Decreasing,    // f' <= 0 on the grid
    Convex,        // f'' >= 0 on the grid
    Concave,       // f'' <= 0 on the grid
  };

  Kind kind = Kind::NonNegative;
  bool on_p_block = true;       // false = lambda block
  std::string coefficient;      // for sign constraints: block column name
  std::string term_column;      // for shape constraints: spline term's column
  double interval_lo = 0.0, interval_hi = 0.0;  // ignored unless has_interval
  bool has_interval = false;
  int grid_points = 20;
};

/// Expands shape constraints into inequality rows over the concatenated
/// [theta_lambda; theta_p] coefficient vector.
void lower_shape_constraints(const std::vector<ShapeConstraint>& shapes,
                             const DesignBlock& lambda_design,
                             const DesignBlock& p_design, ConstraintSet& out);

}  // namespace pogit
