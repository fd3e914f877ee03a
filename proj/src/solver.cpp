#include "pogit/solver.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

namespace pogit {

namespace {

Eigen::VectorXd clamp(const Eigen::VectorXd& x, const Eigen::VectorXd& lo,
                      const Eigen::VectorXd& hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

// Newton direction on the free coordinates, with Levenberg damping when the
// reduced Hessian is not positive definite (or yields a non-descent step).
Eigen::VectorXd newton_direction(const Eigen::MatrixXd& hess,
                                 const Eigen::VectorXd& grad,
                                 const std::vector<Eigen::Index>& free_idx) {
  const Eigen::Index nf = static_cast<Eigen::Index>(free_idx.size());
  Eigen::MatrixXd hf(nf, nf);
  Eigen::VectorXd gf(nf);
  for (Eigen::Index a = 0; a < nf; ++a) {
    gf(a) = grad(free_idx[static_cast<std::size_t>(a)]);
    for (Eigen::Index c = 0; c < nf; ++c) {
      hf(a, c) = hess(free_idx[static_cast<std::size_t>(a)],
                      free_idx[static_cast<std::size_t>(c)]);
    }
  }
  const double scale = std::max(1.0, hf.diagonal().cwiseAbs().maxCoeff());
  double tau = 0.0;
  for (int attempt = 0; attempt < 40; ++attempt) {
    Eigen::MatrixXd hd = hf;
    if (tau > 0.0) hd.diagonal().array() += tau;
    Eigen::LLT<Eigen::MatrixXd> llt(hd);
    if (llt.info() == Eigen::Success) {
      Eigen::VectorXd d = llt.solve(-gf);
      if (d.dot(gf) < 0.0 && d.allFinite()) return d;
    }
    tau = tau == 0.0 ? 1e-8 * scale : tau * 100.0;
  }
  return -gf;  // steepest descent fallback
}

}  // namespace

FitResult minimize_box(const Objective& f, Eigen::VectorXd x0,
                       const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                       double tol, int max_iter) {
  const Eigen::Index k = x0.size();
  FitResult res;
  Eigen::VectorXd x = clamp(x0, lo, hi);
  EvalResult e = f(x, kValue | kGrad | kHess);
  if (!e.finite) {
    res.theta_hat.values = x;
    res.message = "objective not finite at the starting point";
    return res;
  }
  res.objective_trace.push_back(e.value);

  const double bound_eps = 1e-10;
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd pg = x - clamp(x - e.grad, lo, hi);
    res.kkt_residual = pg.size() ? pg.cwiseAbs().maxCoeff() : 0.0;
    if (res.kkt_residual <= tol) {
      res.converged = true;
      break;
    }
    std::vector<Eigen::Index> free_idx;
    free_idx.reserve(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < k; ++i) {
      const bool at_lo =
          x(i) - lo(i) <= bound_eps * (1.0 + std::fabs(lo(i))) && e.grad(i) > 0.0;
      const bool at_hi =
          hi(i) - x(i) <= bound_eps * (1.0 + std::fabs(hi(i))) && e.grad(i) < 0.0;
      if (!at_lo && !at_hi) free_idx.push_back(i);
    }
    if (free_idx.empty()) {
      res.converged = true;  // fully pinned and projected gradient vanishes
      break;
    }
    const Eigen::VectorXd df = newton_direction(e.hess, e.grad, free_idx);
    Eigen::VectorXd d = Eigen::VectorXd::Zero(k);
    for (std::size_t a = 0; a < free_idx.size(); ++a) {
      d(free_idx[a]) = df(static_cast<Eigen::Index>(a));
    }

    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Eigen::VectorXd x_new = clamp(x + alpha * d, lo, hi);
      const Eigen::VectorXd step = x_new - x;
      if (step.cwiseAbs().maxCoeff() == 0.0) break;
      const EvalResult trial = f(x_new, kValue);
      const double slope = e.grad.dot(step);
      if (trial.finite && trial.value <= e.value + 1e-4 * std::min(slope, 0.0)) {
        x = x_new;
        e = f(x, kValue | kGrad | kHess);
        if (!e.finite) {
          res.message = "objective lost finiteness after an accepted step";
          res.theta_hat.values = x;
          return res;
        }
        res.objective_trace.push_back(e.value);
        ++res.n_iterations;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      res.message = "line search could not make progress";
      break;
    }
  }
  if (!res.converged && res.message.empty()) {
    res.message = "iteration limit reached";
  }
  const Eigen::VectorXd pg = x - clamp(x - e.grad, lo, hi);
  res.kkt_residual = pg.size() ? pg.cwiseAbs().maxCoeff() : 0.0;
  if (res.kkt_residual <= tol) res.converged = true;
  res.theta_hat.values = x;
  res.objective = e.value;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (x(i) - lo(i) <= 1e-9 * (1.0 + std::fabs(lo(i))) ||
        hi(i) - x(i) <= 1e-9 * (1.0 + std::fabs(hi(i)))) {
      res.active_bounds.push_back(static_cast<int>(i));
    }
  }
  return res;
}

namespace {

// Least-squares projection onto {A x <= b} within the box: used both to find
// a feasible start and to certify infeasibility.
Eigen::VectorXd feasibility_phase(const ConstraintSet& cons, Eigen::VectorXd x,
                                  double feas_tol) {
  const Eigen::MatrixXd& a = cons.a;
  const Eigen::VectorXd& b = cons.b;
  Objective fs = [&](const Eigen::VectorXd& t, unsigned what) {
    EvalResult r;
    const Eigen::VectorXd viol = (a * t - b).cwiseMax(0.0);
    if (what & kValue) r.value = 0.5 * viol.squaredNorm();
    if (what & kGrad) r.grad = a.transpose() * viol;
    if (what & kHess) {
      r.hess = Eigen::MatrixXd::Zero(t.size(), t.size());
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        if (viol(i) > 0.0) r.hess += a.row(i).transpose() * a.row(i);
      }
      r.hess.diagonal().array() += 1e-12;
    }
    return r;
  };
  FitResult proj =
      minimize_box(fs, std::move(x), cons.box_lo, cons.box_hi, 1e-12, 300);
  (void)feas_tol;
  return proj.theta_hat.values;
}

}  // namespace

FitResult minimize_constrained(const Objective& f, const ConstraintSet& cons,
                               Eigen::VectorXd x0, const FitOptions& opts) {
  if (!cons.has_rows()) {
    FitResult res = minimize_box(f, std::move(x0), cons.box_lo, cons.box_hi,
                                 opts.tol, opts.max_iter);
    return res;
  }
  const Eigen::MatrixXd& a = cons.a;
  const Eigen::VectorXd& b = cons.b;
  const Eigen::Index m = a.rows();

  Eigen::VectorXd x = clamp(x0, cons.box_lo, cons.box_hi);
  {
    const double viol0 = ((a * x - b).cwiseMax(0.0)).lpNorm<Eigen::Infinity>();
    if (viol0 > opts.feas_tol) {
      x = feasibility_phase(cons, x, opts.feas_tol);
      Eigen::VectorXd viol = (a * x - b).cwiseMax(0.0);
      const double worst = viol.lpNorm<Eigen::Infinity>();
      if (worst > opts.feas_tol) {
        Eigen::Index row;
        viol.maxCoeff(&row);
        std::ostringstream msg;
        msg << "constraints are infeasible: row " << row
            << " violated by " << worst << " at the least-infeasible point";
        throw InfeasibleError(static_cast<int>(row), msg.str());
      }
    }
  }

  Eigen::VectorXd mult = Eigen::VectorXd::Zero(m);
  double rho = 10.0;
  double inner_tol = std::max(opts.tol, 1e-2);
  double viol_prev = std::numeric_limits<double>::infinity();

  FitResult res;
  int iters_left = opts.max_iter;
  EvalResult base;  // f at current x, for KKT checks
  bool have_base = false;
  for (int outer = 0; outer < 60 && iters_left > 0; ++outer) {
    Objective al = [&](const Eigen::VectorXd& t, unsigned what) {
      EvalResult r = f(t, what);
      if (!r.finite) return r;
      const Eigen::VectorXd c = a * t - b;
      const Eigen::VectorXd act = (mult + rho * c).cwiseMax(0.0);
      if (what & kValue) {
        r.value += (act.squaredNorm() - mult.squaredNorm()) / (2.0 * rho);
      }
      if (what & kGrad) r.grad += a.transpose() * act;
      if (what & kHess) {
        for (Eigen::Index i = 0; i < m; ++i) {
          if (act(i) > 0.0) r.hess += rho * a.row(i).transpose() * a.row(i);
        }
      }
      return r;
    };
    FitResult inner = minimize_box(al, x, cons.box_lo, cons.box_hi, inner_tol,
                                   iters_left);
    x = inner.theta_hat.values;
    iters_left -= inner.n_iterations;
    res.n_iterations += inner.n_iterations;
    for (double v : inner.objective_trace) res.objective_trace.push_back(v);

    const Eigen::VectorXd c = a * x - b;
    const double viol = c.cwiseMax(0.0).lpNorm<Eigen::Infinity>();
    mult = (mult + rho * c).cwiseMax(0.0);

    base = f(x, kValue | kGrad);
    have_base = true;
    const Eigen::VectorXd grad_l = base.grad + a.transpose() * mult;
    const double pgl = (x - clamp(x - grad_l, cons.box_lo, cons.box_hi))
                           .lpNorm<Eigen::Infinity>();
    res.kkt_residual = std::max(pgl, viol);
    if (viol <= opts.feas_tol && pgl <= opts.tol) {
      res.converged = true;
      break;
    }
    if (inner_tol > opts.tol) inner_tol = std::max(opts.tol, inner_tol * 0.2);
    if (viol > 0.25 * viol_prev && viol > opts.feas_tol) {
      rho = std::min(rho * 10.0, 1e12);
    }
    if (viol > 0.0) viol_prev = viol;
  }
  if (!res.converged) {
    res.message = iters_left <= 0 ? "iteration limit reached"
                                  : "augmented Lagrangian did not reach KKT";
  }
  res.theta_hat.values = x;
  if (!have_base || !base.finite) base = f(x, kValue);
  res.objective = base.value;
  res.multipliers = mult;
  const Eigen::VectorXd c = a * x - b;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (c(i) >= -1e-6 * (1.0 + std::fabs(b(i)))) {
      res.active_constraints.push_back(static_cast<int>(i));
    }
  }
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) - cons.box_lo(i) <= 1e-9 * (1.0 + std::fabs(cons.box_lo(i))) ||
        cons.box_hi(i) - x(i) <= 1e-9 * (1.0 + std::fabs(cons.box_hi(i)))) {
      res.active_bounds.push_back(static_cast<int>(i));
    }
  }
  return res;
}

ConstraintSet assemble_constraints(const PogitSpec& spec,
                                   const FitOptions& opts) {
  ConstraintSet cons = ConstraintSet::boxes_only(spec.n_coef(), opts.box_lo,
                                                 opts.box_hi);
  lower_shape_constraints(spec.shape_constraints, spec.lambda_design,
                          spec.p_design, cons);
  return cons;
}

std::vector<GaussianPrior> assemble_priors(const PogitSpec& spec,
                                           const PogitData& data) {
  using Kind = PogitSpec::PriorSpec::Kind;
  const Eigen::Index kl = data.x_lambda.cols();
  const Eigen::Index kp = data.x_p.cols();
  const Eigen::Index k = kl + kp;
  std::vector<GaussianPrior> out;
  for (const auto& ps : spec.priors) {
    const DesignBlock& block = ps.on_p_block ? spec.p_design : spec.lambda_design;
    const Eigen::Index off = ps.on_p_block ? kl : 0;
    const Eigen::Index width = ps.on_p_block ? kp : kl;
    const Eigen::MatrixXd& x = ps.on_p_block ? data.x_p : data.x_lambda;
    GaussianPrior prior;
    prior.weight = ps.weight;
    switch (ps.kind) {
      case Kind::Coefficients: {
        std::vector<Eigen::Index> idx;
        if (ps.coefficients.empty()) {
          for (Eigen::Index j = 0; j < width; ++j) idx.push_back(off + j);
        } else {
          const auto names = block.column_names();
          for (const auto& want : ps.coefficients) {
            bool found = false;
            for (std::size_t j = 0; j < names.size(); ++j) {
              if (names[j] == want) {
                idx.push_back(off + static_cast<Eigen::Index>(j));
                found = true;
                break;
              }
            }
            if (!found) {
              throw std::invalid_argument("prior references unknown coefficient '" +
                                          want + "'");
            }
          }
        }
        prior.c = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(idx.size()), k);
        for (std::size_t r = 0; r < idx.size(); ++r) {
          prior.c(static_cast<Eigen::Index>(r), idx[r]) = 1.0;
        }
        prior.m = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(idx.size()),
                                            ps.target);
        break;
      }
      case Kind::LinearPredictor: {
        prior.c = Eigen::MatrixXd::Zero(x.rows(), k);
        prior.c.middleCols(off, width) = x;
        prior.m = Eigen::VectorXd::Constant(x.rows(), ps.target);
        break;
      }
      case Kind::MeanLinearPredictor: {
        prior.c = Eigen::MatrixXd::Zero(1, k);
        prior.c.block(0, off, 1, width) = x.colwise().mean();
        prior.m = Eigen::VectorXd::Constant(1, ps.target);
        break;
      }
    }
    prior.validate(k);
    out.push_back(std::move(prior));
  }
  return out;
}

Objective penalized_objective(const PogitData& data,
                              const std::vector<GaussianPrior>& priors) {
  const Eigen::Index k = data.n_coef();
  // Precompute the quadratic pieces once; each prior contributes
  // (w/2)(theta' CtC theta - 2 Ctm' theta + mtm).
  struct Quad {
    Eigen::MatrixXd ctc;
    Eigen::VectorXd ctm;
    double mtm, w;
  };
  auto quads = std::make_shared<std::vector<Quad>>();
  for (const auto& p : priors) {
    p.validate(k);
    quads->push_back({p.c.transpose() * p.c, p.c.transpose() * p.m,
                      p.m.squaredNorm(), p.weight});
  }
  return [&data, quads](const Eigen::VectorXd& theta, unsigned what) {
    EvalResult r = pogit_eval(data, theta, what);
    if (!r.finite) return r;
    for (const auto& q : *quads) {
      if (what & kValue) {
        r.value += 0.5 * q.w *
                   (theta.dot(q.ctc * theta) - 2.0 * q.ctm.dot(theta) + q.mtm);
      }
      if (what & kGrad) r.grad += q.w * (q.ctc * theta - q.ctm);
      if (what & kHess) r.hess += q.w * q.ctc;
    }
    return r;
  };
}

FitResult fit(const PogitData& data, const ConstraintSet& cons,
              const std::vector<GaussianPrior>& priors,
              const FitOptions& opts) {
  const Eigen::Index k = data.n_coef();
  Eigen::VectorXd x0 = opts.init.value_or(Eigen::VectorXd::Zero(k));
  if (x0.size() != k) {
    throw std::invalid_argument("initial point has wrong length");
  }
  const Objective obj = penalized_objective(data, priors);
  FitResult res = minimize_constrained(obj, cons, std::move(x0), opts);
  res.theta_hat.n_lambda = data.x_lambda.cols();
  return res;
}

FitResult fit(const PogitSpec& spec, const Dataset& data,
              const FitOptions& opts) {
  if (data.n_rows() == 0) throw std::invalid_argument("dataset is empty");
  const PogitData d = materialize(spec, data);
  const ConstraintSet cons = assemble_constraints(spec, opts);
  const std::vector<GaussianPrior> priors = assemble_priors(spec, d);
  return fit(d, cons, priors, opts);
}

FitResult fit_poisson(const DesignBlock& design, const Dataset& data,
                      const std::string& count_column, const FitOptions& opts,
                      const std::optional<std::string>& exposure_column) {
  PogitSpec spec;
  spec.lambda_design = design;
  spec.count_column = count_column;
  spec.exposure_column = exposure_column;
  return fit(spec, data, opts);
}

}  // namespace pogit
