#include "pogit/constraints.hpp"

#include <stdexcept>

#include "pogit/design.hpp"

namespace pogit {

void ConstraintSet::append(const Eigen::MatrixXd& rows,
                           const Eigen::VectorXd& rhs) {
  if (rows.rows() != rhs.size()) {
    throw std::invalid_argument("constraint rows and rhs lengths differ");
  }
  if (a.rows() == 0) {
    a = rows;
    b = rhs;
    return;
  }
  if (rows.cols() != a.cols()) {
    throw std::invalid_argument("constraint row width mismatch");
  }
  const Eigen::Index old = a.rows();
  a.conservativeResize(old + rows.rows(), Eigen::NoChange);
  a.bottomRows(rows.rows()) = rows;
  b.conservativeResize(old + rhs.size());
  b.tail(rhs.size()) = rhs;
}

ConstraintSet ConstraintSet::boxes_only(Eigen::Index n_coef, double lo,
                                        double hi) {
  ConstraintSet cs;
  cs.box_lo = Eigen::VectorXd::Constant(n_coef, lo);
  cs.box_hi = Eigen::VectorXd::Constant(n_coef, hi);
  return cs;
}

void GaussianPrior::validate(Eigen::Index n_coef) const {
  if (!(weight > 0.0)) {
    throw std::invalid_argument("prior weight must be positive");
  }
  if (c.cols() != n_coef) {
    throw std::invalid_argument("prior functional has wrong coefficient count");
  }
  if (c.rows() != m.size()) {
    throw std::invalid_argument("prior target length must match functional rows");
  }
}

namespace {

int block_column_index(const DesignBlock& block, const std::string& name) {
  const auto names = block.column_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<int>(i);
  }
  throw std::invalid_argument("constraint references unknown coefficient '" +
                              name + "'");
}

}  // namespace

void lower_shape_constraints(const std::vector<ShapeConstraint>& shapes,
                             const DesignBlock& lambda_design,
                             const DesignBlock& p_design, ConstraintSet& out) {
  const int kl = lambda_design.n_cols();
  const int kp = p_design.n_cols();
  const int k = kl + kp;
  for (const auto& s : shapes) {
    const DesignBlock& block = s.on_p_block ? p_design : lambda_design;
    const int block_offset = s.on_p_block ? kl : 0;

    if (s.kind == ShapeConstraint::Kind::NonNegative ||
        s.kind == ShapeConstraint::Kind::NonPositive) {
      const int j = block_offset + block_column_index(block, s.coefficient);
      Eigen::MatrixXd row = Eigen::MatrixXd::Zero(1, k);
      row(0, j) = s.kind == ShapeConstraint::Kind::NonNegative ? -1.0 : 1.0;
      out.append(row, Eigen::VectorXd::Zero(1));
      continue;
    }

    const int t = block.find_term(s.term_column);
    if (t < 0 || block.terms[static_cast<std::size_t>(t)].kind !=
                     Term::Kind::Spline) {
      throw std::invalid_argument("shape constraint on '" + s.term_column +
                                  "' requires a spline term on that column");
    }
    const Term& term = block.terms[static_cast<std::size_t>(t)];
    const SplineSpec& sp = term.spline;
    double lo = s.has_interval ? s.interval_lo : sp.lo;
    double hi = s.has_interval ? s.interval_hi : sp.hi;
    if (!(lo >= sp.lo && hi <= sp.hi && lo < hi)) {
      throw std::invalid_argument(
          "shape constraint interval must lie inside the spline domain");
    }
    const std::vector<double> grid = linspace(lo, hi, s.grid_points);
    Eigen::MatrixXd map;
    double sign = 1.0;
    switch (s.kind) {
      case ShapeConstraint::Kind::Increasing:
        map = first_derivative_map(sp, grid);
        sign = -1.0;  // -f' <= 0
        break;
      case ShapeConstraint::Kind::Decreasing:
        map = first_derivative_map(sp, grid);
        sign = 1.0;  // f' <= 0
        break;
      case ShapeConstraint::Kind::Convex:
        map = second_derivative_map(sp, grid);
        sign = -1.0;  // -f'' <= 0
        break;
      case ShapeConstraint::Kind::Concave:
        map = second_derivative_map(sp, grid);
        sign = 1.0;
        break;
      default:
        break;
    }
    Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(map.rows(), k);
    rows.middleCols(block_offset + block.term_offset(static_cast<std::size_t>(t)),
                    map.cols()) = sign * map;
    out.append(rows, Eigen::VectorXd::Zero(map.rows()));
  }
}

}  // namespace pogit
