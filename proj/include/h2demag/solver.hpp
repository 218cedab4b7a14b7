#pragma once

#include "h2demag/sparse.hpp"

#include <stdexcept>

namespace h2demag {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolveReport {
  int iterations = 0;
  double residual = 0.0;  // final relative residual ||b - A x|| / ||b||
  bool converged = false;
};

struct SolveResult {
  Vector x;
  SolveReport report;
};

/// Diagonal scaling by 1/diag(A).
class JacobiPreconditioner {
 public:
  explicit JacobiPreconditioner(const CsrMatrix& a);
  void apply(const Vector& r, Vector& z) const { z = inv_diag_.cwiseProduct(r); }
  const Vector& inverse_diagonal() const { return inv_diag_; }

 private:
  Vector inv_diag_;
};

struct KrylovOptions {
  double tol = 1e-10;
  int max_iter = -1;  // -1: 10 * n
  bool jacobi = true;
};

/// Preconditioned conjugate gradients for symmetric positive (semi-)definite A.
/// With `deflate_constants` the constant vector is projected out of the
/// right-hand side and every iterate, which solves the singular pure-Neumann
/// system and returns the zero-mean solution.
SolveResult cg_solve(const CsrMatrix& a, const Vector& b, const KrylovOptions& opts = {},
                     bool deflate_constants = false);

/// Jacobi-preconditioned BiCGStab for general nonsingular A.
SolveResult bicgstab_solve(const CsrMatrix& a, const Vector& b, const KrylovOptions& opts = {});

}  // namespace h2demag
