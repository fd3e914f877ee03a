#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "pogit/dataset.hpp"
#include "pogit/spline.hpp"

namespace pogit {

/// One additive piece of a linear predictor.
struct Term {
  enum class Kind { Intercept, Linear, Spline };

  Kind kind = Kind::Intercept;
  std::string column;  // unused for intercept
  SplineSpec spline;   // used when kind == Spline

  static Term intercept();
  static Term linear(std::string column);
  static Term spline_term(std::string column, SplineSpec spec);

  int n_cols() const;
  std::vector<std::string> column_names() const;
};

/// Ordered list of terms defining one block's design matrix. Coefficients of
/// term t occupy columns [offset(t), offset(t) + terms[t].n_cols()).
struct DesignBlock {
  std::vector<Term> terms;

  int n_cols() const;
  std::vector<std::string> column_names() const;
  int term_offset(std::size_t term_index) const;
  /// Index of the first term whose spline/linear column matches `column`
  /// (spline terms preferred); -1 if absent.
  int find_term(const std::string& column) const;

  /// Materializes the design matrix; throws on missing data columns or
  /// out-of-domain spline inputs.
  Eigen::MatrixXd build(const Dataset& data) const;
};

}  // namespace pogit
