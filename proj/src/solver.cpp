#include "h2demag/solver.hpp"

#include <cmath>
#include <optional>
#include <string>

namespace h2demag {

JacobiPreconditioner::JacobiPreconditioner(const CsrMatrix& a) {
  const Vector d = a.diagonal();
  inv_diag_.resize(d.size());
  for (Index i = 0; i < d.size(); ++i) {
    if (d[i] == 0.0) throw SolverError("Jacobi preconditioner: zero diagonal entry in row " + std::to_string(i));
    inv_diag_[i] = 1.0 / d[i];
  }
}

namespace {

int resolve_max_iter(const KrylovOptions& opts, Index n) {
  return opts.max_iter >= 0 ? opts.max_iter : static_cast<int>(10 * std::max<Index>(n, 1));
}

void remove_mean(Vector& v) {
  if (v.size() > 0) v.array() -= v.mean();
}

double true_residual(const CsrMatrix& a, const Vector& x, const Vector& b, double bnorm) {
  return (b - a * x).norm() / bnorm;
}

}  // namespace

SolveResult cg_solve(const CsrMatrix& a, const Vector& b_in, const KrylovOptions& opts,
                     bool deflate_constants) {
  const Index n = a.rows();
  if (b_in.size() != n) throw std::invalid_argument("cg: right-hand side has wrong length");
  Vector b = b_in;
  if (deflate_constants) {
    const double l1 = b.lpNorm<1>();
    if (std::abs(b.sum()) > 1e-10 * l1)
      throw std::invalid_argument("cg: right-hand side is not orthogonal to constants (incompatible Neumann data)");
    remove_mean(b);
  }

  SolveResult out;
  out.x = Vector::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    out.report = {0, 0.0, true};
    return out;
  }

  std::optional<JacobiPreconditioner> jacobi;
  if (opts.jacobi) jacobi.emplace(a);
  const auto precondition = [&](const Vector& r, Vector& z) {
    if (jacobi) jacobi->apply(r, z);
    else z = r;
    if (deflate_constants) remove_mean(z);
  };

  const int max_iter = resolve_max_iter(opts, n);
  int it = 0;
  // The recursive residual can drift from the true one; restart from the true
  // residual a few times before giving up on the tolerance.
  for (int restart = 0; restart < 4 && it < max_iter; ++restart) {
    Vector r = b - a * out.x, z, p, ap;
    if (r.norm() / bnorm <= opts.tol) break;
    precondition(r, z);
    p = z;
    double rz = r.dot(z);
    while (it < max_iter) {
      a.multiply(p, ap);
      const double curvature = p.dot(ap);
      if (curvature < 0.0) throw SolverError("cg: negative curvature, matrix is not positive semidefinite");
      if (curvature == 0.0) break;
      const double alpha = rz / curvature;
      out.x += alpha * p;
      r -= alpha * ap;
      ++it;
      if (r.norm() / bnorm <= opts.tol) break;
      precondition(r, z);
      const double rz_next = r.dot(z);
      p = z + (rz_next / rz) * p;
      rz = rz_next;
    }
    if (deflate_constants) remove_mean(out.x);
  }
  out.report.iterations = it;
  out.report.residual = true_residual(a, out.x, b, bnorm);
  out.report.converged = out.report.residual <= opts.tol;
  return out;
}

SolveResult bicgstab_solve(const CsrMatrix& a, const Vector& b, const KrylovOptions& opts) {
  const Index n = a.rows();
  if (b.size() != n) throw std::invalid_argument("bicgstab: right-hand side has wrong length");
  SolveResult out;
  out.x = Vector::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    out.report = {0, 0.0, true};
    return out;
  }
  std::optional<JacobiPreconditioner> jacobi;
  if (opts.jacobi) jacobi.emplace(a);
  const auto precondition = [&](const Vector& r, Vector& z) {
    if (jacobi) jacobi->apply(r, z);
    else z = r;
  };

  const int max_iter = resolve_max_iter(opts, n);
  const double breakdown = 1e-300;
  Vector r = b, r_hat = b, p = Vector::Zero(n), v = Vector::Zero(n), s, t, y, zz;
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  bool restarted = false;
  int it = 0;
  while (it < max_iter) {
    const double rho_next = r_hat.dot(r);
    if (std::abs(rho_next) < breakdown * bnorm * bnorm) {
      if (restarted) throw SolverError("bicgstab: breakdown (rho ~ 0) after restart");
      restarted = true;
      r = b - a * out.x;
      r_hat = r;
      p.setZero();
      v.setZero();
      rho = alpha = omega = 1.0;
      continue;
    }
    const double beta = (rho_next / rho) * (alpha / omega);
    rho = rho_next;
    p = r + beta * (p - omega * v);
    precondition(p, y);
    a.multiply(y, v);
    const double rv = r_hat.dot(v);
    if (rv == 0.0) throw SolverError("bicgstab: breakdown (r_hat . v = 0)");
    alpha = rho / rv;
    s = r - alpha * v;
    ++it;
    if (s.norm() / bnorm <= opts.tol) {
      out.x += alpha * y;
      break;
    }
    precondition(s, zz);
    a.multiply(zz, t);
    const double tt = t.dot(t);
    omega = tt > 0.0 ? t.dot(s) / tt : 0.0;
    out.x += alpha * y + omega * zz;
    r = s - omega * t;
    if (r.norm() / bnorm <= opts.tol) break;
    if (omega == 0.0) throw SolverError("bicgstab: breakdown (omega = 0)");
  }
  out.report.iterations = it;
  out.report.residual = true_residual(a, out.x, b, bnorm);
  out.report.converged = out.report.residual <= opts.tol;
  return out;
}

}  // namespace h2demag
