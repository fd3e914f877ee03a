#include "pogit/sandwich.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "pogit/numeric.hpp"
#include "pogit/parallel.hpp"

namespace pogit {

namespace {

constexpr Eigen::Index kRowChunk = 2048;

struct AbPartial {
  Eigen::MatrixXd a, b;
  bool used = false;
};

}  // namespace

SandwichCovariance sandwich(const PogitData& data,
                            const Eigen::VectorXd& theta_hat) {
  const Eigen::Index k = data.n_coef();
  AbPartial acc = chunked_reduce<AbPartial>(
      data.n(), kRowChunk,
      [&](std::int64_t begin, std::int64_t end, std::size_t) {
        AbPartial part;
        part.used = true;
        part.a = Eigen::MatrixXd::Zero(k, k);
        part.b = Eigen::MatrixXd::Zero(k, k);
        Eigen::VectorXd g;
        Eigen::MatrixXd h;
        for (std::int64_t i = begin; i < end; ++i) {
          row_derivatives(data, theta_hat, i, g, h);
          part.a += h;
          part.b.noalias() += g * g.transpose();
        }
        return part;
      },
      [](AbPartial& a, AbPartial&& p) {
        if (!p.used) return;
        if (!a.used) {
          a = std::move(p);
          return;
        }
        a.a += p.a;
        a.b += p.b;
      });
  if (!acc.used) {
    acc.a = Eigen::MatrixXd::Zero(k, k);
    acc.b = Eigen::MatrixXd::Zero(k, k);
  }

  SandwichCovariance out;
  out.a = 0.5 * (acc.a + acc.a.transpose());
  out.b = 0.5 * (acc.b + acc.b.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.a);
  const Eigen::VectorXd evals = es.eigenvalues();
  const double scale = evals.cwiseAbs().maxCoeff();
  const double cutoff = std::max(1e-12 * scale, 1e-300);
  std::vector<Eigen::VectorXd> null_dirs;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (std::fabs(evals(i)) <= cutoff) {
      null_dirs.push_back(es.eigenvectors().col(i));
    }
  }
  if (!null_dirs.empty()) {
    std::ostringstream msg;
    msg << "Hessian at the estimate is rank deficient (" << null_dirs.size()
        << " near-null direction" << (null_dirs.size() > 1 ? "s" : "")
        << "); the model is not identified along them";
    throw RankDeficiencyError(msg.str(), std::move(null_dirs));
  }
  const Eigen::MatrixXd a_inv = es.eigenvectors() *
                                evals.cwiseInverse().asDiagonal() *
                                es.eigenvectors().transpose();
  out.v = a_inv * out.b * a_inv;
  out.v = 0.5 * (out.v + out.v.transpose());
  return out;
}

std::vector<RowIntervals> intervals(const PogitData& data,
                                    const Eigen::VectorXd& theta_hat,
                                    const Eigen::MatrixXd& v, double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("interval level must be in (0, 1)");
  }
  const double z = normal_critical(level);
  const Eigen::Index kl = data.x_lambda.cols();
  const Eigen::Index kp = data.x_p.cols();
  const auto tl = theta_hat.head(kl);
  const auto tp = theta_hat.tail(kp);
  const Eigen::MatrixXd v_ll = v.topLeftCorner(kl, kl);
  const Eigen::MatrixXd v_pp = v.bottomRightCorner(kp, kp);

  std::vector<RowIntervals> out(static_cast<std::size_t>(data.n()));
  Eigen::VectorXd g(kl + kp);
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    RowIntervals& ri = out[static_cast<std::size_t>(i)];
    const Eigen::VectorXd xl = data.x_lambda.row(i).transpose();
    double eta_l = xl.dot(tl);
    if (data.offset.size() > 0) eta_l += data.offset(i);
    const double se_l = std::sqrt(std::max(0.0, xl.dot(v_ll * xl)));
    ri.lambda = {std::exp(eta_l - z * se_l), std::exp(eta_l),
                 std::exp(eta_l + z * se_l)};

    if (kp > 0) {
      const Eigen::VectorXd xp = data.x_p.row(i).transpose();
      const double eta_p = xp.dot(tp);
      const double se_p = std::sqrt(std::max(0.0, xp.dot(v_pp * xp)));
      ri.p = {data.p_link.inverse(eta_p - z * se_p), data.p_link.inverse(eta_p),
              data.p_link.inverse(eta_p + z * se_p)};
      // log mu = eta_l + log p(eta_p); gradient [x_l, r1 * x_p].
      const double r1 = data.p_link.d1_over_value(eta_p);
      g.head(kl) = xl;
      g.tail(kp) = r1 * xp;
      const double var_logmu = std::max(0.0, g.dot(v * g));
      const double se_m = std::sqrt(var_logmu);
      const double log_mu = eta_l + data.p_link.log_inverse(eta_p);
      const double mu = std::exp(eta_l) * data.p_link.inverse(eta_p);
      ri.mu = {std::exp(log_mu - z * se_m), mu, std::exp(log_mu + z * se_m)};
    } else {
      ri.p = {1.0, 1.0, 1.0};
      ri.mu = ri.lambda;
    }
  }
  return out;
}

}  // namespace pogit
