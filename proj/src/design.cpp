#include "pogit/design.hpp"

#include <stdexcept>

namespace pogit {

Term Term::intercept() { return Term{Kind::Intercept, "", {}}; }

Term Term::linear(std::string column) {
  return Term{Kind::Linear, std::move(column), {}};
}

Term Term::spline_term(std::string column, SplineSpec spec) {
  spec.validate();
  return Term{Kind::Spline, std::move(column), std::move(spec)};
}

int Term::n_cols() const {
  switch (kind) {
    case Kind::Intercept:
    case Kind::Linear:
      return 1;
    case Kind::Spline:
      return spline.n_basis();
  }
  return 0;
}

std::vector<std::string> Term::column_names() const {
  switch (kind) {
    case Kind::Intercept:
      return {"intercept"};
    case Kind::Linear:
      return {column};
    case Kind::Spline: {
      std::vector<std::string> names;
      for (int i = 0; i < spline.n_basis(); ++i) {
        names.push_back(column + "_s" + std::to_string(i));
      }
      return names;
    }
  }
  return {};
}

int DesignBlock::n_cols() const {
  int n = 0;
  for (const auto& t : terms) n += t.n_cols();
  return n;
}

std::vector<std::string> DesignBlock::column_names() const {
  std::vector<std::string> names;
  for (const auto& t : terms) {
    auto tn = t.column_names();
    names.insert(names.end(), tn.begin(), tn.end());
  }
  return names;
}

int DesignBlock::term_offset(std::size_t term_index) const {
  if (term_index >= terms.size()) {
    throw std::out_of_range("design block term index out of range");
  }
  int off = 0;
  for (std::size_t i = 0; i < term_index; ++i) off += terms[i].n_cols();
  return off;
}

int DesignBlock::find_term(const std::string& column) const {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].kind == Term::Kind::Spline && terms[i].column == column) {
      return static_cast<int>(i);
    }
  }
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].kind == Term::Kind::Linear && terms[i].column == column) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

Eigen::MatrixXd DesignBlock::build(const Dataset& data) const {
  const Eigen::Index n = data.n_rows();
  Eigen::MatrixXd x(n, n_cols());
  Eigen::Index col = 0;
  for (const auto& t : terms) {
    switch (t.kind) {
      case Term::Kind::Intercept:
        x.col(col++).setOnes();
        break;
      case Term::Kind::Linear:
        x.col(col++) = data.col(t.column);
        break;
      case Term::Kind::Spline: {
        const Eigen::VectorXd& v = data.col(t.column);
        std::vector<double> pts(v.data(), v.data() + v.size());
        const Eigen::MatrixXd basis = build_basis(pts, t.spline);
        x.middleCols(col, basis.cols()) = basis;
        col += basis.cols();
        break;
      }
    }
  }
  return x;
}

}  // namespace pogit
