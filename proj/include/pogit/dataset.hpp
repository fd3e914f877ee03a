#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace pogit {

/// Column-oriented table of named real columns. Counts, covariates, exposure
/// and (for validation-only workflows) true counts all live here; the model
/// spec decides which column plays which role.
class Dataset {
 public:
  Eigen::Index n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return names_.size(); }

  bool has(const std::string& name) const;
  /// Throws std::out_of_range with the column name if absent.
  const Eigen::VectorXd& col(const std::string& name) const;

  /// All columns must share one length; re-adding a name is an error.
  void add(const std::string& name, Eigen::VectorXd values);

  const std::vector<std::string>& names() const { return names_; }

  Dataset head(Eigen::Index n) const;

 private:
  std::vector<std::string> names_;
  std::vector<Eigen::VectorXd> columns_;
  Eigen::Index n_rows_ = 0;
};

/// Strict CSV reader for the dialect the tool emits: header row required,
/// comma separated, '.' decimal, no quoting. Every field must parse as a
/// double; errors carry 1-based row/column positions.
Dataset read_csv(const std::string& path);

/// Writes with 17 significant digits so a read round-trips bit-exactly.
/// header_lines are emitted first, each prefixed with "# ".
void write_csv(const std::string& path, const Dataset& data,
               const std::vector<std::string>& header_lines = {});

std::string format_double(double v);

}  // namespace pogit
