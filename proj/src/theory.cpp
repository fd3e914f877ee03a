#include "pogit/theory.hpp"

#include <cmath>
#include <stdexcept>

#include "pogit/numeric.hpp"
#include "pogit/parallel.hpp"
#include "pogit/rng.hpp"

namespace pogit {

void TwoCovariateSetting::validate() const {
  if (!(sigma_lambda > 0.0) || !(sigma_p > 0.0)) {
    throw std::invalid_argument("covariate standard deviations must be positive");
  }
  if (n < 1) throw std::invalid_argument("n must be >= 1");
}

double TwoCovariateSetting::mean_lambda() const {
  return std::exp(mu_lambda * theta_lambda +
                  0.5 * sigma_lambda * sigma_lambda * theta_lambda * theta_lambda);
}

Eigen::Matrix2d crlb(const TwoCovariateSetting& s) {
  s.validate();
  const double el = s.mean_lambda();
  const double ep = TwoCovariateSetting::mean_p();
  const double s2 = s.sigma_lambda * s.sigma_lambda;
  const double shifted = s.mu_lambda + s2 * s.theta_lambda;
  Eigen::Matrix2d bound = Eigen::Matrix2d::Zero();
  bound(0, 0) = 1.0 / (ep * (shifted * shifted + s2));
  bound(1, 1) = 2.0 * s.theta_p * s.theta_p;
  bound /= static_cast<double>(s.n) * el;
  return bound;
}

namespace {

struct McPartial {
  // Running sums and sums of squares of the three distinct entries
  // (11, 12, 22), for the mean and its standard error.
  double s11 = 0, s12 = 0, s22 = 0;
  double q11 = 0, q12 = 0, q22 = 0;
};

// One sample of the per-observation negative Hessian at the true parameters:
//   H_ll = lambda p x_l^2
//   H_lp = lambda p (1 - p) x_l x_p
//   H_pp = lambda p (1-p)(1-2p) x_p^2 + Y p (1-p) x_p^2,  Y ~ Poi(lambda p).
void accumulate_samples(const TwoCovariateSetting& s, Rng& rng,
                        std::int64_t count, McPartial& part) {
  for (std::int64_t i = 0; i < count; ++i) {
    const double xl = s.mu_lambda + s.sigma_lambda * rng.normal();
    const double xp = s.sigma_p * rng.normal();
    const double lambda = std::exp(xl * s.theta_lambda);
    const double p = expit(xp * s.theta_p);
    const double y = static_cast<double>(rng.poisson(lambda * p));
    const double h11 = lambda * p * xl * xl;
    const double h12 = lambda * p * (1.0 - p) * xl * xp;
    const double h22 =
        (lambda * p * (1.0 - 2.0 * p) + y) * p * (1.0 - p) * xp * xp;
    part.s11 += h11;
    part.s12 += h12;
    part.s22 += h22;
    part.q11 += h11 * h11;
    part.q12 += h12 * h12;
    part.q22 += h22 * h22;
  }
}

FisherMcResult finalize(const McPartial& acc, long n_samples) {
  const double n = static_cast<double>(n_samples);
  FisherMcResult out;
  out.n_samples = n_samples;
  out.mean << acc.s11 / n, acc.s12 / n, acc.s12 / n, acc.s22 / n;
  auto se = [n](double sum, double sumsq) {
    const double mean = sum / n;
    const double var = std::max(0.0, sumsq / n - mean * mean);
    return std::sqrt(var / n);
  };
  const double se11 = se(acc.s11, acc.q11);
  const double se12 = se(acc.s12, acc.q12);
  const double se22 = se(acc.s22, acc.q22);
  out.se << se11, se12, se12, se22;
  return out;
}

constexpr std::int64_t kMcChunk = 1 << 16;

}  // namespace

FisherMcResult fisher_information_mc(const TwoCovariateSetting& s,
                                     long n_samples, std::uint64_t seed) {
  s.validate();
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  McPartial acc = chunked_reduce<McPartial>(
      n_samples, kMcChunk,
      [&](std::int64_t begin, std::int64_t end, std::size_t chunk) {
        Rng rng(seed, chunk);
        McPartial part;
        accumulate_samples(s, rng, end - begin, part);
        return part;
      },
      [](McPartial& a, McPartial&& p) {
        a.s11 += p.s11;
        a.s12 += p.s12;
        a.s22 += p.s22;
        a.q11 += p.q11;
        a.q12 += p.q12;
        a.q22 += p.q22;
      });
  return finalize(acc, n_samples);
}

namespace ref {

FisherMcResult fisher_information_mc(const TwoCovariateSetting& s,
                                     long n_samples, std::uint64_t seed) {
  s.validate();
  Rng rng(seed, 0);
  McPartial acc;
  accumulate_samples(s, rng, n_samples, acc);
  return finalize(acc, n_samples);
}

}  // namespace ref

namespace {

double c_objective(double u) {
  // exp(u) u^2 / (1 + exp(u))^3 without overflow on either tail.
  const double t = -std::fabs(u);
  const double e = std::exp(t);
  // For u <= 0: e^u u^2 / (1+e^u)^3. For u > 0 rewrite with e^{-u}:
  // e^{-2u} u^2 / (1+e^{-u})^3.
  const double denom = (1.0 + e) * (1.0 + e) * (1.0 + e);
  if (u <= 0.0) return e * u * u / denom;
  return e * e * u * u / denom;
}

}  // namespace

double constant_c_bound() {
  const int grid_n = 1000000;
  const double lo = -50.0, hi = 50.0;
  double best_u = lo, best = c_objective(lo);
  for (int i = 1; i <= grid_n; ++i) {
    const double u = lo + (hi - lo) * i / grid_n;
    const double v = c_objective(u);
    if (v > best) {
      best = v;
      best_u = u;
    }
  }
  // Golden-section refinement around the best grid point.
  const double step = (hi - lo) / grid_n;
  double a = best_u - step, b = best_u + step;
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = c_objective(c), fd = c_objective(d);
  for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = c_objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = c_objective(d);
    }
  }
  return std::max(best, std::max(fc, fd));
}

}  // namespace pogit
