#include "h2demag/operator.hpp"

#include <algorithm>
#include <cctype>

namespace h2demag {

std::string to_string(Backend b) {
  switch (b) {
    case Backend::dense: return "dense";
    case Backend::h: return "h";
    case Backend::h2: return "h2";
  }
  return "unknown";
}

Backend parse_backend(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "dense") return Backend::dense;
  if (s == "h") return Backend::h;
  if (s == "h2") return Backend::h2;
  throw std::invalid_argument("unknown backend '" + name + "' (expected dense, h or h2)");
}

BoundaryOperator::BoundaryOperator(Matrix dense) : op_(std::move(dense)) {}
BoundaryOperator::BoundaryOperator(HMatrix h) : op_(std::move(h)) {}
BoundaryOperator::BoundaryOperator(H2Matrix h2) : op_(std::move(h2)) {}

BoundaryOperator BoundaryOperator::assemble(const BoundaryKernel& kernel, Backend backend,
                                            const CompressionConfig& config, Index dense_cap) {
  switch (backend) {
    case Backend::dense: return BoundaryOperator(assemble_dense(kernel, dense_cap));
    case Backend::h: return BoundaryOperator(assemble_h(kernel, config));
    case Backend::h2: return BoundaryOperator(recompress_h2(assemble_h(kernel, config), config.eps_rec));
  }
  throw std::invalid_argument("unknown backend");
}

Backend BoundaryOperator::backend() const {
  if (dense()) return Backend::dense;
  if (hmatrix()) return Backend::h;
  return Backend::h2;
}

Index BoundaryOperator::size() const {
  return std::visit([](const auto& m) -> Index {
    if constexpr (std::is_same_v<std::decay_t<decltype(m)>, Matrix>) return m.rows();
    else return m.size();
  }, op_);
}

Eigen::VectorXd BoundaryOperator::apply(const Eigen::VectorXd& x) const {
  if (const Matrix* m = dense()) {
    if (x.size() != m->cols()) throw std::invalid_argument("dense apply: dimension mismatch");
    return *m * x;
  }
  if (const HMatrix* h = hmatrix()) return h->matvec(x);
  return h2matrix()->matvec(x);
}

std::size_t BoundaryOperator::storage_bytes() const {
  if (const Matrix* m = dense()) return 8 * static_cast<std::size_t>(m->size());
  if (const HMatrix* h = hmatrix()) return h->storage_bytes();
  return h2matrix()->storage_bytes();
}

double compression_ratio(std::size_t bytes, Index n) {
  if (n <= 0) throw std::invalid_argument("compression ratio needs N > 0");
  return 1.0 - static_cast<double>(bytes) / (8.0 * static_cast<double>(n) * static_cast<double>(n));
}

}  // namespace h2demag
