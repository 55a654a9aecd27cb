#include "resim/bicgstab.hpp"

#include <cmath>

namespace resim {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iterations: return "max_it";
    case SolveStatus::breakdown: return "breakdown";
  }
  return "?";
}

SolveResult bicgstab(const BlockMatrix& a, const Preconditioner& m, const Eigen::VectorXd& b,
                     double tol, int max_iterations, const Partition& part,
                     const Eigen::VectorXd* x0) {
  const int w = part.workers;
  const Index n = a.size();
  SolveResult out;
  out.x = x0 ? *x0 : Eigen::VectorXd::Zero(n);
  const double bnorm = norm2(b, w);
  if (bnorm == 0.0) {
    out.x.setZero();
    return out;
  }
  const double target = tol * bnorm;
  Eigen::VectorXd ax;
  auto true_residual = [&](Eigen::VectorXd& r) {
    a.multiply(out.x, ax, part);
    r = b - ax;
    return norm2(r, w);
  };

  Eigen::VectorXd r(n), r_hat(n), p(n), v(n), s(n), t(n), p_hat(n), s_hat(n);
  double rnorm = true_residual(r);
  out.relative_residual = rnorm / bnorm;
  if (rnorm <= target) return out;

  bool restart = true;
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  while (out.iterations < max_iterations) {
    if (restart) {
      r_hat = r;
      p.setZero();
      v.setZero();
      rho = alpha = omega = 1.0;
      restart = false;
    }
    ++out.iterations;
    const double rho_new = dot(r_hat, r, w);
    if (std::abs(rho_new) < 1e-30 * dot(r_hat, r_hat, w)) {
      out.status = SolveStatus::breakdown;
      break;
    }
    const double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    p = r + beta * (p - omega * v);
    m.apply(p, p_hat);
    a.multiply(p_hat, v, part);
    const double rv = dot(r_hat, v, w);
    if (std::abs(rv) < 1e-30 * norm2(r_hat, w) * norm2(v, w) || rv == 0.0) {
      out.status = SolveStatus::breakdown;
      break;
    }
    alpha = rho / rv;
    s = r - alpha * v;
    if (norm2(s, w) <= target) {
      out.x += alpha * p_hat;
      rnorm = true_residual(r);
      if (rnorm <= target) {
        out.status = SolveStatus::converged;
        out.relative_residual = rnorm / bnorm;
        return out;
      }
      restart = true;
      continue;
    }
    m.apply(s, s_hat);
    a.multiply(s_hat, t, part);
    const double tt = dot(t, t, w);
    if (tt == 0.0) {
      out.status = SolveStatus::breakdown;
      break;
    }
    omega = dot(t, s, w) / tt;
    out.x += alpha * p_hat + omega * s_hat;
    r = s - omega * t;
    if (std::abs(omega) < 1e-30) {
      out.status = SolveStatus::breakdown;
      break;
    }
    if (norm2(r, w) <= target) {
      rnorm = true_residual(r);
      if (rnorm <= target) {
        out.status = SolveStatus::converged;
        out.relative_residual = rnorm / bnorm;
        return out;
      }
      restart = true;
    }
  }
  rnorm = true_residual(r);
  out.relative_residual = rnorm / bnorm;
  if (rnorm <= target)
    out.status = SolveStatus::converged;
  else if (out.status != SolveStatus::breakdown)
    out.status = SolveStatus::max_iterations;
  return out;
}

}  // namespace resim
