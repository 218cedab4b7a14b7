#include "h2demag/lowrank.hpp"

#include <cmath>
#include <stdexcept>

namespace h2demag {

AcaResult aca(const BlockEvaluator& block, double eps, Index max_rank) {
  if (!(eps > 0.0)) throw std::invalid_argument("aca: epsilon must be positive");
  const Index m = block.rows();
  const Index n = block.cols();
  const Index kmax = std::min({max_rank, m, n});

  std::vector<Eigen::VectorXd> us, vs;
  std::vector<char> row_used(m, 0);
  Eigen::VectorXd r(n), c(m);
  double norm2 = 0.0;
  Index pivot_row = 0;
  Index rows_tried = 0;
  bool converged = false;

  while (static_cast<Index>(us.size()) < kmax) {
    row_used[pivot_row] = 1;
    ++rows_tried;
    block.row(pivot_row, r);
    for (std::size_t l = 0; l < us.size(); ++l) r -= us[l][pivot_row] * vs[l];
    Index pivot_col;
    const double pivot = r.cwiseAbs().maxCoeff(&pivot_col);

    if (pivot == 0.0 || pivot <= 1e-15 * std::sqrt(norm2)) {
      // Zero residual row: try the next unused row. An exhausted row set means
      // the approximation is exact.
      if (rows_tried >= m) {
        converged = true;
        break;
      }
      pivot_row = 0;
      while (row_used[pivot_row]) ++pivot_row;
      continue;
    }
    Eigen::VectorXd v = r / r[pivot_col];
    block.col(pivot_col, c);
    for (std::size_t l = 0; l < us.size(); ++l) c -= vs[l][pivot_col] * us[l];
    Eigen::VectorXd u = c;

    const double uu = u.squaredNorm(), vv = v.squaredNorm();
    double cross = 0.0;
    for (std::size_t l = 0; l < us.size(); ++l) cross += us[l].dot(u) * vs[l].dot(v);
    norm2 += 2.0 * cross + uu * vv;
    us.push_back(std::move(u));
    vs.push_back(std::move(v));

    if (std::sqrt(uu * vv) <= eps * std::sqrt(std::abs(norm2))) {
      converged = true;
      break;
    }
    // Next pivot row: largest entry of the new column among unused rows.
    double best = -1.0;
    pivot_row = -1;
    for (Index i = 0; i < m; ++i)
      if (!row_used[i] && std::abs(us.back()[i]) > best) {
        best = std::abs(us.back()[i]);
        pivot_row = i;
      }
    if (pivot_row < 0) {
      converged = true;
      break;
    }
  }
  if (static_cast<Index>(us.size()) == std::min(m, n)) converged = true;

  AcaResult res;
  res.converged = converged;
  const Index k = static_cast<Index>(us.size());
  res.block.a.resize(m, k);
  res.block.b.resize(n, k);
  for (Index l = 0; l < k; ++l) {
    res.block.a.col(l) = us[l];
    res.block.b.col(l) = vs[l];
  }
  return res;
}

CrossPivots aca_full_pivot(const Matrix& m, double eps, Index max_rank) {
  Matrix r = m;
  CrossPivots piv;
  const Index kmax = std::min({max_rank, m.rows(), m.cols()});
  double first = 0.0;
  while (static_cast<Index>(piv.rows.size()) < kmax) {
    Index i, j;
    const double p = r.cwiseAbs().maxCoeff(&i, &j);
    if (piv.rows.empty()) first = p;
    if (p == 0.0 || p <= eps * first) break;
    piv.rows.push_back(i);
    piv.cols.push_back(j);
    const Eigen::VectorXd col = r.col(j);
    const Eigen::RowVectorXd row = r.row(i) / r(i, j);
    r.noalias() -= col * row;
  }
  return piv;
}

LowRankBlock truncate(const LowRankBlock& block, double eps) {
  const Index k = block.rank();
  if (k == 0) return block;
  Eigen::HouseholderQR<Matrix> qa(block.a), qb(block.b);
  const Index ka = std::min(block.a.rows(), k), kb = std::min(block.b.rows(), k);
  const Matrix ra = qa.matrixQR().topRows(ka).triangularView<Eigen::Upper>();
  const Matrix rb = qb.matrixQR().topRows(kb).triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<Matrix> svd(ra * rb.transpose(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  Index rank = 0;
  if (s.size() > 0 && s[0] > 0.0)
    while (rank < s.size() && s[rank] > eps * s[0]) ++rank;

  LowRankBlock out;
  const Matrix qa_thin = qa.householderQ() * Matrix::Identity(block.a.rows(), ka);
  const Matrix qb_thin = qb.householderQ() * Matrix::Identity(block.b.rows(), kb);
  out.a = qa_thin * (svd.matrixU().leftCols(rank) * s.head(rank).asDiagonal());
  out.b = qb_thin * svd.matrixV().leftCols(rank);
  return out;
}

}  // namespace h2demag
