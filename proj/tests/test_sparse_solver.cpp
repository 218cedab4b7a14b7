#include "h2demag/solver.hpp"
#include "test_util.hpp"

#include <doctest.h>

using namespace h2demag;

namespace {

// 1D Laplacian with Dirichlet ends (SPD) plus an optional convection term.
CsrMatrix tridiagonal(Index n, double convection = 0.0) {
  std::vector<CsrMatrix::Triplet> t;
  for (Index i = 0; i < n; ++i) {
    t.push_back({i, i, 2.0});
    if (i > 0) t.push_back({i, i - 1, -1.0 - convection});
    if (i + 1 < n) t.push_back({i, i + 1, -1.0 + convection});
  }
  return CsrMatrix::from_triplets(n, t);
}

// Pure Neumann 1D Laplacian: singular, constants in the kernel.
CsrMatrix neumann(Index n) {
  std::vector<CsrMatrix::Triplet> t;
  for (Index i = 0; i + 1 < n; ++i) {
    t.push_back({i, i, 1.0});
    t.push_back({i + 1, i + 1, 1.0});
    t.push_back({i, i + 1, -1.0});
    t.push_back({i + 1, i, -1.0});
  }
  return CsrMatrix::from_triplets(n, t);
}

}  // namespace

TEST_CASE("csr assembly sums duplicates") {
  const CsrMatrix a = CsrMatrix::from_triplets(3, {{0, 0, 1.0}, {0, 0, 2.0}, {2, 1, -1.0}, {1, 2, -1.0}});
  CHECK(a.coeff(0, 0) == 3.0);
  CHECK(a.coeff(1, 1) == 0.0);
  CHECK(a.nnz() == 3);
  CHECK(a.is_symmetric(0.0));
  const Vector y = a * Vector::Ones(3);
  CHECK(y[0] == 3.0);
  CHECK(y[1] == -1.0);
  const CsrMatrix s = a.submatrix({1, 2});
  CHECK(s.rows() == 2);
  CHECK(s.coeff(0, 1) == -1.0);
}

TEST_CASE("cg solves an SPD system") {
  const CsrMatrix a = tridiagonal(200);
  const Vector x = testutil::random_vector(200, 1);
  const SolveResult r = cg_solve(a, a * x);
  CHECK(r.report.converged);
  CHECK(testutil::rel_diff(r.x, x) < 1e-7);
}

TEST_CASE("deflated cg on a singular Neumann system") {
  const Index n = 100;
  const CsrMatrix a = neumann(n);
  Vector x = testutil::random_vector(n, 2);
  x.array() -= x.mean();
  const SolveResult r = cg_solve(a, a * x, {}, true);
  CHECK(r.report.converged);
  CHECK(std::abs(r.x.mean()) < 1e-12);
  CHECK(testutil::rel_diff(r.x, x) < 1e-7);

  Vector bad = Vector::Zero(n);
  bad[0] = 1.0;
  CHECK_THROWS_AS(cg_solve(a, bad, {}, true), std::invalid_argument);
}

TEST_CASE("cg reports non-convergence") {
  KrylovOptions opts;
  opts.max_iter = 3;
  const SolveResult r = cg_solve(tridiagonal(500), Vector::Ones(500), opts);
  CHECK_FALSE(r.report.converged);
  CHECK(r.report.residual > opts.tol);
}

TEST_CASE("bicgstab on a nonsymmetric system") {
  const CsrMatrix a = tridiagonal(150, 0.3);
  CHECK_FALSE(a.is_symmetric(1e-12));
  const Vector x = testutil::random_vector(150, 3);
  const SolveResult r = bicgstab_solve(a, a * x);
  CHECK(r.report.converged);
  CHECK(testutil::rel_diff(r.x, x) < 1e-7);
}

TEST_CASE("jacobi rejects a zero diagonal") {
  const CsrMatrix a = CsrMatrix::from_triplets(2, {{0, 1, 1.0}, {1, 0, 1.0}});
  CHECK_THROWS_AS(JacobiPreconditioner{a}, SolverError);
}
