#include "h2demag/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace h2demag {

CsrMatrix CsrMatrix::from_triplets(Index n, std::vector<Triplet> triplets) {
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  CsrMatrix m;
  m.n_ = n;
  m.offsets_.assign(n + 1, 0);
  m.cols_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  for (std::size_t k = 0; k < triplets.size();) {
    const Triplet& t = triplets[k];
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n)
      throw std::out_of_range("sparse triplet index out of range");
    double sum = 0.0;
    std::size_t j = k;
    for (; j < triplets.size() && triplets[j].row == t.row && triplets[j].col == t.col; ++j)
      sum += triplets[j].value;
    m.cols_.push_back(t.col);
    m.values_.push_back(sum);
    ++m.offsets_[t.row + 1];
    k = j;
  }
  for (Index i = 0; i < n; ++i) m.offsets_[i + 1] += m.offsets_[i];
  return m;
}

double CsrMatrix::coeff(Index i, Index j) const {
  const auto begin = cols_.begin() + offsets_[i];
  const auto end = cols_.begin() + offsets_[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  return (it != end && *it == j) ? values_[it - cols_.begin()] : 0.0;
}

Vector CsrMatrix::diagonal() const {
  Vector d(n_);
  for (Index i = 0; i < n_; ++i) d[i] = coeff(i, i);
  return d;
}

void CsrMatrix::multiply(const Vector& x, Vector& y) const {
  if (x.size() != n_) throw std::invalid_argument("sparse matvec: dimension mismatch");
  y.resize(n_);
  for (Index i = 0; i < n_; ++i) {
    double s = 0.0;
    for (Index k = offsets_[i]; k < offsets_[i + 1]; ++k) s += values_[k] * x[cols_[k]];
    y[i] = s;
  }
}

Vector CsrMatrix::operator*(const Vector& x) const {
  Vector y;
  multiply(x, y);
  return y;
}

CsrMatrix CsrMatrix::submatrix(const std::vector<Index>& keep) const {
  std::vector<Index> map(n_, -1);
  for (std::size_t k = 0; k < keep.size(); ++k) map[keep[k]] = static_cast<Index>(k);
  CsrMatrix m;
  m.n_ = static_cast<Index>(keep.size());
  m.offsets_.assign(m.n_ + 1, 0);
  for (Index r = 0; r < m.n_; ++r) {
    const Index i = keep[r];
    for (Index k = offsets_[i]; k < offsets_[i + 1]; ++k) {
      const Index c = map[cols_[k]];
      if (c < 0) continue;
      m.cols_.push_back(c);
      m.values_.push_back(values_[k]);
    }
    m.offsets_[r + 1] = static_cast<Index>(m.cols_.size());
  }
  return m;
}

bool CsrMatrix::is_symmetric(double tol) const {
  for (Index i = 0; i < n_; ++i)
    for (Index k = offsets_[i]; k < offsets_[i + 1]; ++k)
      if (std::abs(values_[k] - coeff(cols_[k], i)) > tol) return false;
  return true;
}

}  // namespace h2demag
