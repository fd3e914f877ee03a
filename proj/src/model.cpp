#include "pogit/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pogit/numeric.hpp"
#include "pogit/parallel.hpp"

namespace pogit {

void PogitSpec::validate() const {
  if (lambda_link.kind != LinkKind::Log) {
    throw std::invalid_argument("lambda link must be log");
  }
  if (p_link.kind == LinkKind::Log) {
    throw std::invalid_argument("p link must be logit or bounded-logit");
  }
  if (lambda_design.n_cols() == 0) {
    throw std::invalid_argument("lambda design must have at least one column");
  }
  auto check_unique = [](const std::vector<std::string>& names,
                         const char* block) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      for (std::size_t j = i + 1; j < names.size(); ++j) {
        if (names[i] == names[j]) {
          throw std::invalid_argument(std::string("duplicate column '") +
                                      names[i] + "' in " + block + " design");
        }
      }
    }
  };
  check_unique(lambda_design.column_names(), "lambda");
  check_unique(p_design.column_names(), "p");
}

std::vector<std::string> PogitSpec::coefficient_names() const {
  std::vector<std::string> out;
  for (const auto& n : lambda_design.column_names()) out.push_back("lambda." + n);
  for (const auto& n : p_design.column_names()) out.push_back("p." + n);
  return out;
}

ParameterVector ParameterVector::zeros(Eigen::Index n_lambda, Eigen::Index n_p) {
  ParameterVector v;
  v.values = Eigen::VectorXd::Zero(n_lambda + n_p);
  v.n_lambda = n_lambda;
  return v;
}

PogitData materialize(const PogitSpec& spec, const Dataset& data) {
  spec.validate();
  PogitData out;
  out.x_lambda = spec.lambda_design.build(data);
  out.x_p = spec.p_design.terms.empty()
                ? Eigen::MatrixXd(data.n_rows(), 0)
                : spec.p_design.build(data);
  out.p_link = spec.p_link;
  if (!data.has(spec.count_column)) {
    throw std::out_of_range("dataset has no count column '" +
                            spec.count_column + "'");
  }
  out.y = data.col(spec.count_column);
  for (Eigen::Index i = 0; i < out.y.size(); ++i) {
    const double v = out.y(i);
    if (!(v >= 0.0) || v != std::floor(v)) {
      std::ostringstream msg;
      msg << "count column '" << spec.count_column << "' row " << i + 1
          << ": value " << v << " is not a non-negative integer";
      throw std::invalid_argument(msg.str());
    }
  }
  if (spec.exposure_column) {
    const Eigen::VectorXd& e = data.col(*spec.exposure_column);
    if ((e.array() <= 0.0).any()) {
      throw std::invalid_argument("exposure column '" + *spec.exposure_column +
                                  "' must be strictly positive");
    }
    out.offset = e.array().log();
  }
  if (spec.true_count_column && data.has(*spec.true_count_column)) {
    const Eigen::VectorXd& ys = data.col(*spec.true_count_column);
    for (Eigen::Index i = 0; i < out.y.size(); ++i) {
      if (out.y(i) > ys(i)) {
        std::ostringstream msg;
        msg << "row " << i + 1 << ": reported count " << out.y(i)
            << " exceeds true count " << ys(i);
        throw std::invalid_argument(msg.str());
      }
    }
  }
  out.log_y_factorial = 0.0;
  for (Eigen::Index i = 0; i < out.y.size(); ++i) {
    out.log_y_factorial += std::lgamma(out.y(i) + 1.0);
  }
  return out;
}

PogitData poisson_data(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& offset) {
  PogitData out;
  out.x_lambda = design;
  out.x_p = Eigen::MatrixXd(design.rows(), 0);
  out.y = y;
  out.offset = offset;
  out.log_y_factorial = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    out.log_y_factorial += std::lgamma(y(i) + 1.0);
  }
  return out;
}

namespace {

constexpr Eigen::Index kRowChunk = 2048;

struct EvalPartial {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  bool finite = true;
  Eigen::Index bad_row = -1;
  bool used = false;
};

// Accumulates [begin, end) into an EvalPartial. Shared by the chunked kernel
// and the serial reference.
EvalPartial eval_rows(const PogitData& data, const Eigen::VectorXd& theta,
                      unsigned what, Eigen::Index begin, Eigen::Index end) {
  const Eigen::Index kl = data.x_lambda.cols();
  const Eigen::Index kp = data.x_p.cols();
  const Eigen::Index k = kl + kp;
  EvalPartial part;
  part.used = true;
  if (what & kGrad) part.grad = Eigen::VectorXd::Zero(k);
  if (what & kHess) part.hess = Eigen::MatrixXd::Zero(k, k);

  const auto tl = theta.head(kl);
  const auto tp = theta.tail(kp);
  for (Eigen::Index i = begin; i < end; ++i) {
    double eta_l = data.x_lambda.row(i).dot(tl);
    if (data.offset.size() > 0) eta_l += data.offset(i);
    const double lambda = std::exp(eta_l);
    double p = 1.0, log_p = 0.0, r1 = 0.0, r2 = 0.0;
    double eta_p = 0.0;
    if (kp > 0) {
      eta_p = data.x_p.row(i).dot(tp);
      p = data.p_link.inverse(eta_p);
      log_p = data.p_link.log_inverse(eta_p);
      r1 = data.p_link.d1_over_value(eta_p);
      r2 = data.p_link.d2_over_value(eta_p);
    }
    const double mu = lambda * p;
    if (!std::isfinite(mu) || mu <= 0.0) {
      part.finite = false;
      part.bad_row = i;
      return part;
    }
    const double yi = data.y(i);
    if (what & kValue) {
      part.value += mu - yi * (eta_l + log_p);
    }
    const double resid = mu - yi;
    if (what & kGrad) {
      part.grad.head(kl).noalias() += resid * data.x_lambda.row(i).transpose();
      if (kp > 0) {
        part.grad.tail(kp).noalias() +=
            resid * r1 * data.x_p.row(i).transpose();
      }
    }
    if (what & kHess) {
      part.hess.topLeftCorner(kl, kl).noalias() +=
          mu * data.x_lambda.row(i).transpose() * data.x_lambda.row(i);
      if (kp > 0) {
        part.hess.topRightCorner(kl, kp).noalias() +=
            mu * r1 * data.x_lambda.row(i).transpose() * data.x_p.row(i);
        const double w_pp = mu * r2 - yi * (r2 - r1 * r1);
        part.hess.bottomRightCorner(kp, kp).noalias() +=
            w_pp * data.x_p.row(i).transpose() * data.x_p.row(i);
      }
    }
  }
  return part;
}

EvalResult finish_eval(const PogitData& data, unsigned what, EvalPartial acc) {
  EvalResult res;
  res.finite = acc.finite;
  res.bad_row = acc.bad_row;
  if (!acc.finite) return res;
  if (what & kValue) res.value = acc.value + data.log_y_factorial;
  if (what & kGrad) res.grad = std::move(acc.grad);
  if (what & kHess) {
    const Eigen::Index kl = data.x_lambda.cols();
    const Eigen::Index kp = data.x_p.cols();
    acc.hess.bottomLeftCorner(kp, kl) =
        acc.hess.topRightCorner(kl, kp).transpose();
    res.hess = std::move(acc.hess);
  }
  return res;
}

}  // namespace

EvalResult pogit_eval(const PogitData& data, const Eigen::VectorXd& theta,
                      unsigned what) {
  if (theta.size() != data.n_coef()) {
    throw std::invalid_argument("theta length does not match model");
  }
  EvalPartial acc = chunked_reduce<EvalPartial>(
      data.n(), kRowChunk,
      [&](std::int64_t b, std::int64_t e, std::size_t) {
        return eval_rows(data, theta, what, b, e);
      },
      [&](EvalPartial& a, EvalPartial&& p) {
        if (!p.used) return;
        if (!a.used) {
          a = std::move(p);
          return;
        }
        if (!p.finite) {
          if (a.finite) {
            a.finite = false;
            a.bad_row = p.bad_row;
          }
          return;
        }
        if (!a.finite) return;
        a.value += p.value;
        if (what & kGrad) a.grad += p.grad;
        if (what & kHess) a.hess += p.hess;
      });
  if (!acc.used) {
    acc = eval_rows(data, theta, what, 0, 0);  // empty data: zero result
  }
  return finish_eval(data, what, std::move(acc));
}

namespace ref {

EvalResult pogit_eval(const PogitData& data, const Eigen::VectorXd& theta,
                      unsigned what) {
  EvalPartial acc = eval_rows(data, theta, what, 0, data.n());
  return finish_eval(data, what, std::move(acc));
}

}  // namespace ref

double neg_log_likelihood(const PogitData& data, const Eigen::VectorXd& theta) {
  const EvalResult res = pogit_eval(data, theta, kValue);
  if (!res.finite) {
    std::ostringstream msg;
    msg << "mean overflowed or degenerated at row " << res.bad_row + 1
        << " — linear predictor out of numeric range";
    throw std::runtime_error(msg.str());
  }
  return res.value;
}

std::vector<Prediction> predict(const PogitData& data,
                                const Eigen::VectorXd& theta) {
  const Eigen::Index kl = data.x_lambda.cols();
  const Eigen::Index kp = data.x_p.cols();
  const auto tl = theta.head(kl);
  const auto tp = theta.tail(kp);
  std::vector<Prediction> out(static_cast<std::size_t>(data.n()));
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    double eta_l = data.x_lambda.row(i).dot(tl);
    if (data.offset.size() > 0) eta_l += data.offset(i);
    Prediction& pr = out[static_cast<std::size_t>(i)];
    pr.lambda = std::exp(eta_l);
    pr.p = kp > 0 ? data.p_link.inverse(data.x_p.row(i).dot(tp)) : 1.0;
    pr.mu = pr.lambda * pr.p;
  }
  return out;
}

std::vector<Prediction> predict(const PogitSpec& spec, const Dataset& data,
                                const ParameterVector& theta) {
  PogitData d;
  d.x_lambda = spec.lambda_design.build(data);
  d.x_p = spec.p_design.terms.empty() ? Eigen::MatrixXd(data.n_rows(), 0)
                                      : spec.p_design.build(data);
  d.p_link = spec.p_link;
  d.y = Eigen::VectorXd::Zero(data.n_rows());
  if (spec.exposure_column) {
    d.offset = data.col(*spec.exposure_column).array().log();
  }
  return predict(d, theta.values);
}

void row_derivatives(const PogitData& data, const Eigen::VectorXd& theta,
                     Eigen::Index row, Eigen::VectorXd& grad,
                     Eigen::MatrixXd& hess) {
  EvalPartial part = eval_rows(data, theta, kGrad | kHess, row, row + 1);
  if (!part.finite) {
    std::ostringstream msg;
    msg << "mean overflowed at row " << part.bad_row + 1;
    throw std::runtime_error(msg.str());
  }
  const Eigen::Index kl = data.x_lambda.cols();
  const Eigen::Index kp = data.x_p.cols();
  part.hess.bottomLeftCorner(kp, kl) =
      part.hess.topRightCorner(kl, kp).transpose();
  grad = std::move(part.grad);
  hess = std::move(part.hess);
}

}  // namespace pogit
