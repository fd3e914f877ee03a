#include "pogit/spline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pogit {

void SplineSpec::validate() const {
  if (degree < 0 || degree > 3) {
    throw std::invalid_argument("SplineSpec: degree must be in 0..3");
  }
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("SplineSpec: domain must be a finite interval with lo < hi");
  }
  double prev = lo;
  for (double k : interior_knots) {
    if (!std::isfinite(k) || !(k > prev) || !(k < hi)) {
      throw std::invalid_argument(
          "SplineSpec: interior knots must be strictly ascending and strictly inside the domain");
    }
    prev = k;
  }
}

std::vector<double> SplineSpec::knot_vector() const {
  std::vector<double> t;
  t.reserve(2 * (degree + 1) + interior_knots.size());
  for (int i = 0; i <= degree; ++i) t.push_back(lo);
  t.insert(t.end(), interior_knots.begin(), interior_knots.end());
  for (int i = 0; i <= degree; ++i) t.push_back(hi);
  return t;
}

SplineSpec SplineSpec::uniform(int degree, int count, double lo, double hi) {
  SplineSpec s;
  s.degree = degree;
  s.lo = lo;
  s.hi = hi;
  for (int i = 1; i <= count; ++i) {
    s.interior_knots.push_back(lo + (hi - lo) * i / (count + 1));
  }
  s.validate();
  return s;
}

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 2) throw std::invalid_argument("linspace: count must be >= 2");
  std::vector<double> x(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    x[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
  }
  x.back() = hi;
  return x;
}

namespace {

// Index i with t[i] <= x < t[i+1] among the non-degenerate spans; x == hi
// falls in the last span so the right endpoint evaluates cleanly.
int find_span(double x, int degree, const std::vector<double>& t) {
  const int n_basis = static_cast<int>(t.size()) - degree - 1;
  if (x >= t[static_cast<std::size_t>(n_basis)]) return n_basis - 1;
  auto it = std::upper_bound(t.begin() + degree, t.begin() + n_basis, x);
  return static_cast<int>(it - t.begin()) - 1;
}

// Cox–de Boor with derivatives (the standard ndu/a-table recursion).
// ders is (n_ders+1) x (degree+1): values of the degree+1 basis functions
// with support on the span, and their derivatives.
void basis_ders(double x, int span, int degree, const std::vector<double>& t,
                int n_ders, Eigen::MatrixXd& ders) {
  const int k = degree + 1;
  Eigen::MatrixXd ndu(k, k);
  std::vector<double> left(static_cast<std::size_t>(k)),
      right(static_cast<std::size_t>(k));
  ndu(0, 0) = 1.0;
  for (int j = 1; j <= degree; ++j) {
    left[static_cast<std::size_t>(j)] = x - t[static_cast<std::size_t>(span + 1 - j)];
    right[static_cast<std::size_t>(j)] = t[static_cast<std::size_t>(span + j)] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu(j, r) = right[static_cast<std::size_t>(r + 1)] +
                  left[static_cast<std::size_t>(j - r)];
      const double temp = ndu(r, j - 1) / ndu(j, r);
      ndu(r, j) = saved + right[static_cast<std::size_t>(r + 1)] * temp;
      saved = left[static_cast<std::size_t>(j - r)] * temp;
    }
    ndu(j, j) = saved;
  }
  ders.setZero(n_ders + 1, k);
  for (int j = 0; j <= degree; ++j) ders(0, j) = ndu(j, degree);
  if (n_ders == 0) return;

  Eigen::MatrixXd a(2, k);
  for (int r = 0; r <= degree; ++r) {
    int s1 = 0, s2 = 1;
    a.setZero();
    a(0, 0) = 1.0;
    for (int d = 1; d <= n_ders; ++d) {
      double dv = 0.0;
      const int rk = r - d;
      const int pk = degree - d;
      if (r >= d) {
        const double den = ndu(pk + 1, rk);
        a(s2, 0) = den == 0.0 ? 0.0 : a(s1, 0) / den;
        dv = a(s2, 0) * ndu(rk, pk);
      }
      const int j1 = rk >= -1 ? 1 : -rk;
      const int j2 = r - 1 <= pk ? d - 1 : degree - r;
      for (int j = j1; j <= j2; ++j) {
        const double den = ndu(pk + 1, rk + j);
        a(s2, j) = den == 0.0 ? 0.0 : (a(s1, j) - a(s1, j - 1)) / den;
        dv += a(s2, j) * ndu(rk + j, pk);
      }
      if (r <= pk) {
        const double den = ndu(pk + 1, r);
        a(s2, d) = den == 0.0 ? 0.0 : -a(s1, d - 1) / den;
        dv += a(s2, d) * ndu(r, pk);
      }
      ders(d, r) = dv;
      std::swap(s1, s2);
    }
  }
  double factor = degree;
  for (int d = 1; d <= n_ders; ++d) {
    for (int j = 0; j <= degree; ++j) ders(d, j) *= factor;
    factor *= degree - d;
  }
}

}  // namespace

Eigen::MatrixXd spline_design(const std::vector<double>& points,
                              const SplineSpec& spec, int deriv) {
  spec.validate();
  if (deriv < 0 || deriv > 2) {
    throw std::invalid_argument("spline_design: derivative order must be 0, 1 or 2");
  }
  if (deriv > spec.degree) {
    std::ostringstream msg;
    msg << "spline_design: order-" << deriv
        << " derivative map needs degree >= " << deriv << ", got degree "
        << spec.degree;
    throw std::invalid_argument(msg.str());
  }
  const std::vector<double> t = spec.knot_vector();
  const int nb = spec.n_basis();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(points.size()), nb);
  Eigen::MatrixXd ders;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double x = points[i];
    if (!std::isfinite(x) || x < spec.lo || x > spec.hi) {
      std::ostringstream msg;
      msg << "spline evaluation point " << x << " outside domain [" << spec.lo
          << ", " << spec.hi << "]";
      throw std::domain_error(msg.str());
    }
    const int span = find_span(x, spec.degree, t);
    basis_ders(x, span, spec.degree, t, deriv, ders);
    for (int j = 0; j <= spec.degree; ++j) {
      out(static_cast<Eigen::Index>(i), span - spec.degree + j) = ders(deriv, j);
    }
  }
  return out;
}

Eigen::MatrixXd build_basis(const std::vector<double>& points,
                            const SplineSpec& spec) {
  return spline_design(points, spec, 0);
}

Eigen::MatrixXd first_derivative_map(const SplineSpec& spec,
                                     const std::vector<double>& eval_points) {
  if (spec.degree < 1) {
    throw std::invalid_argument("first_derivative_map: needs degree >= 1");
  }
  return spline_design(eval_points, spec, 1);
}

Eigen::MatrixXd second_derivative_map(const SplineSpec& spec,
                                      const std::vector<double>& eval_points) {
  if (spec.degree < 2) {
    throw std::invalid_argument("second_derivative_map: needs degree >= 2");
  }
  return spline_design(eval_points, spec, 2);
}

}  // namespace pogit
