#include "h2demag/h2matrix.hpp"

#include <boost/crc.hpp>

#include <bit>
#include <cstring>
#include <fstream>
#include <functional>
#include <sstream>

namespace h2demag {

std::size_t ClusterBasis::storage_reals() const {
  std::size_t total = 0;
  for (const Matrix& m : leaf) total += static_cast<std::size_t>(m.size());
  for (const Matrix& m : transfer) total += static_cast<std::size_t>(m.size());
  return total;
}

Matrix ClusterBasis::expand(const ClusterTree& tree, Index t) const {
  const ClusterNode& node = tree.node(t);
  if (node.is_leaf()) return leaf[t];
  Matrix v(node.size(), rank[t]);
  Index row = 0;
  for (Index c : node.children) {
    const Matrix vc = expand(tree, c) * transfer[c];
    v.middleRows(row, vc.rows()) = vc;
    row += vc.rows();
  }
  return v;
}

namespace {

// Column-space generator of a block A B^T: A R^T with B = Q R, so that
// (A R^T)(A R^T)^T = (A B^T)(A B^T)^T.
Matrix column_generator(const Matrix& a, const Matrix& b) {
  if (a.cols() == 0) return Matrix(a.rows(), 0);
  Eigen::HouseholderQR<Matrix> qr(b);
  const Index k = std::min(b.rows(), b.cols());
  const Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  return a * r.transpose();
}

// Bottom-up construction of a nested orthonormal basis for the column spaces of
// the generators attached to each cluster and all of its ancestors.
class BasisBuilder {
 public:
  BasisBuilder(const ClusterTree& tree, const std::vector<std::vector<Matrix>>& own, double eps)
      : tree_(tree), own_(own), eps_(eps) {
    basis_.rank.assign(tree.size(), 0);
    basis_.leaf.assign(tree.size(), Matrix());
    basis_.transfer.assign(tree.size(), Matrix());
  }

  ClusterBasis run() {
    build(0, Matrix(tree_.node(0).size(), 0));
    return std::move(basis_);
  }

 private:
  // Returns V_t^T * inherited.
  Matrix build(Index t, const Matrix& inherited) {
    const ClusterNode& node = tree_.node(t);
    const Index c_in = inherited.cols();
    Index c_own = 0;
    for (const Matrix& g : own_[t]) c_own += g.cols();
    Matrix x(node.size(), c_own + c_in);
    Index col = 0;
    for (const Matrix& g : own_[t]) {
      x.middleCols(col, g.cols()) = g;
      col += g.cols();
    }
    x.rightCols(c_in) = inherited;

    // Lossless column compression: x = xc * q^T with orthonormal q.
    Matrix q;
    bool compressed = false;
    if (x.cols() > x.rows()) {
      Eigen::HouseholderQR<Matrix> qr(x.transpose());
      const Index m = x.rows();
      q = qr.householderQ() * Matrix::Identity(x.cols(), m);
      x = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>().transpose();
      compressed = true;
    }

    Matrix z;  // coefficients of x in the basis below t
    Matrix below;
    if (node.is_leaf()) {
      below = Matrix::Identity(node.size(), node.size());
      z = x;
    } else {
      std::vector<Matrix> zc;
      Index rows = 0;
      for (Index c : node.children) {
        const ClusterNode& cn = tree_.node(c);
        zc.push_back(build(c, x.middleRows(cn.begin - node.begin, cn.size())));
        rows += zc.back().rows();
      }
      z.resize(rows, x.cols());
      Index r = 0;
      for (const Matrix& m : zc) {
        z.middleRows(r, m.rows()) = m;
        r += m.rows();
      }
    }

    Matrix u;
    if (z.cols() > 0 && z.rows() > 0) {
      Eigen::BDCSVD<Matrix> svd(z, Eigen::ComputeThinU);
      const auto& s = svd.singularValues();
      Index k = 0;
      while (k < s.size() && s[k] > eps_ * s[0]) ++k;
      u = svd.matrixU().leftCols(k);
    } else {
      u.resize(z.rows(), 0);
    }
    basis_.rank[t] = u.cols();
    if (node.is_leaf()) {
      basis_.leaf[t] = u;
    } else {
      Index r = 0;
      for (Index c : node.children) {
        basis_.transfer[c] = u.middleRows(r, basis_.rank[c]);
        r += basis_.rank[c];
      }
    }

    const Matrix coeff = u.transpose() * z;  // V_t^T x
    if (c_in == 0) return Matrix(u.cols(), 0);
    if (compressed) return coeff * q.bottomRows(c_in).transpose();
    return coeff.rightCols(c_in);
  }

  const ClusterTree& tree_;
  const std::vector<std::vector<Matrix>>& own_;
  double eps_;
  ClusterBasis basis_;
};

// V_t^T m for a matrix m living on the rows of cluster t.
Matrix project(const ClusterTree& tree, const ClusterBasis& basis, Index t, const Matrix& m) {
  const ClusterNode& node = tree.node(t);
  if (node.is_leaf()) return basis.leaf[t].transpose() * m;
  Matrix out = Matrix::Zero(basis.rank[t], m.cols());
  for (Index c : node.children) {
    const ClusterNode& cn = tree.node(c);
    out.noalias() += basis.transfer[c].transpose() *
                     project(tree, basis, c, m.middleRows(cn.begin - node.begin, cn.size()));
  }
  return out;
}

}  // namespace

H2Matrix recompress_h2(const HMatrix& h, double eps_rec) {
  if (!(eps_rec >= 0.0)) throw std::invalid_argument("recompression tolerance must be non-negative");
  const ClusterTree& tree = h.tree();
  std::vector<std::vector<Matrix>> row_gen(tree.size()), col_gen(tree.size());
  for (const HLeaf& leaf : h.leaves()) {
    if (!leaf.is_lowrank() || leaf.lowrank.rank() == 0) continue;
    Matrix ga = column_generator(leaf.lowrank.a, leaf.lowrank.b);
    Matrix gb = column_generator(leaf.lowrank.b, leaf.lowrank.a);
    const double norm = ga.norm();
    if (norm == 0.0) continue;
    row_gen[leaf.row].push_back(ga / norm);
    col_gen[leaf.col].push_back(gb / gb.norm());
  }
  ClusterBasis row_basis = BasisBuilder(tree, row_gen, eps_rec).run();
  ClusterBasis col_basis = BasisBuilder(tree, col_gen, eps_rec).run();

  std::vector<H2Block> blocks;
  blocks.reserve(h.leaves().size());
  for (const HLeaf& leaf : h.leaves()) {
    H2Block b;
    b.row = leaf.row;
    b.col = leaf.col;
    if (leaf.is_lowrank()) {
      b.admissible = true;
      if (leaf.lowrank.rank() == 0) {
        b.data = Matrix::Zero(row_basis.rank[leaf.row], col_basis.rank[leaf.col]);
      } else {
        const Matrix pa = project(tree, row_basis, leaf.row, leaf.lowrank.a);
        const Matrix pb = project(tree, col_basis, leaf.col, leaf.lowrank.b);
        b.data = pa * pb.transpose();
      }
    } else {
      b.data = leaf.dense;
    }
    blocks.push_back(std::move(b));
  }
  return H2Matrix(tree, tree, std::move(row_basis), std::move(col_basis), std::move(blocks));
}

H2Matrix::H2Matrix(ClusterTree row_tree, ClusterTree col_tree, ClusterBasis row_basis, ClusterBasis col_basis,
                   std::vector<H2Block> blocks)
    : row_tree_(std::move(row_tree)),
      col_tree_(std::move(col_tree)),
      row_basis_(std::move(row_basis)),
      col_basis_(std::move(col_basis)),
      blocks_(std::move(blocks)) {}

Eigen::VectorXd H2Matrix::matvec(const Eigen::VectorXd& x) const {
  const Index n = size();
  if (x.size() != n || col_tree_.num_points() != n) throw std::invalid_argument("H2 matvec: dimension mismatch");
  const auto& cperm = col_tree_.permutation();
  const auto& rperm = row_tree_.permutation();
  Eigen::VectorXd xt(n), yt = Eigen::VectorXd::Zero(n);
  for (Index k = 0; k < n; ++k) xt[k] = x[cperm[k]];

  // Forward transform, leaves to root (children have larger preorder ids).
  std::vector<Eigen::VectorXd> xh(col_tree_.size());
  for (Index t = col_tree_.size() - 1; t >= 0; --t) {
    const ClusterNode& node = col_tree_.node(t);
    if (node.is_leaf()) {
      xh[t] = col_basis_.leaf[t].transpose() * xt.segment(node.begin, node.size());
    } else {
      xh[t] = Eigen::VectorXd::Zero(col_basis_.rank[t]);
      for (Index c : node.children) xh[t].noalias() += col_basis_.transfer[c].transpose() * xh[c];
    }
  }

  std::vector<Eigen::VectorXd> yh(row_tree_.size());
  for (Index t = 0; t < row_tree_.size(); ++t) yh[t] = Eigen::VectorXd::Zero(row_basis_.rank[t]);
  for (const H2Block& b : blocks_) {
    if (b.admissible) {
      yh[b.row].noalias() += b.data * xh[b.col];
    } else {
      const ClusterNode& r = row_tree_.node(b.row);
      const ClusterNode& c = col_tree_.node(b.col);
      yt.segment(r.begin, r.size()).noalias() += b.data * xt.segment(c.begin, c.size());
    }
  }

  // Backward transform, root to leaves.
  for (Index t = 0; t < row_tree_.size(); ++t) {
    const ClusterNode& node = row_tree_.node(t);
    if (node.is_leaf()) {
      yt.segment(node.begin, node.size()).noalias() += row_basis_.leaf[t] * yh[t];
    } else {
      for (Index c : node.children) yh[c].noalias() += row_basis_.transfer[c] * yh[t];
    }
  }

  Eigen::VectorXd y(n);
  for (Index k = 0; k < n; ++k) y[rperm[k]] = yt[k];
  return y;
}

Matrix H2Matrix::to_dense() const {
  const Index n = size();
  Matrix m(n, n);
  for (Index j = 0; j < n; ++j) m.col(j) = matvec(Eigen::VectorXd::Unit(n, j));
  return m;
}

std::size_t H2Matrix::storage_reals() const {
  std::size_t total = row_basis_.storage_reals() + col_basis_.storage_reals();
  for (const H2Block& b : blocks_) total += static_cast<std::size_t>(b.data.size());
  return total;
}

Index H2Matrix::max_rank() const {
  Index k = 0;
  for (Index r : row_basis_.rank) k = std::max(k, r);
  for (Index r : col_basis_.rank) k = std::max(k, r);
  return k;
}

// ---------------------------------------------------------------------------
// Persistence

std::uint64_t crc64(const void* data, std::size_t size) {
  boost::crc_optimal<64, 0x42F0E1EBA9EA3693ULL, ~0ULL, ~0ULL, true, true> crc;
  crc.process_bytes(data, size);
  return crc.checksum();
}

namespace {

static_assert(std::endian::native == std::endian::little, "the H2 file format assumes a little-endian host");

constexpr char kMagic[4] = {'H', '2', 'M', 'S'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  template <class T>
  void put(T v) {
    const char* p = reinterpret_cast<const char*>(&v);
    buf_.insert(buf_.end(), p, p + sizeof(T));
  }
  void put_u64(Index v) { put<std::uint64_t>(static_cast<std::uint64_t>(v)); }
  void put_matrix(const Matrix& m) {
    const char* p = reinterpret_cast<const char*>(m.data());
    buf_.insert(buf_.end(), p, p + sizeof(double) * m.size());
  }
  void put_tree(const ClusterTree& tree) {
    for (const ClusterNode& n : tree.nodes()) {
      put_u64(n.begin);
      put_u64(n.end);
      for (int d = 0; d < 3; ++d) put<double>(n.box.lo[d]);
      for (int d = 0; d < 3; ++d) put<double>(n.box.hi[d]);
      put<std::uint8_t>(n.is_leaf() ? 1 : 0);
    }
    for (Index p : tree.permutation()) put_u64(p);
  }
  void put_basis(const ClusterTree& tree, const ClusterBasis& basis) {
    for (Index t = 0; t < tree.size(); ++t) {
      put_u64(basis.rank[t]);
      if (t > 0) put_matrix(basis.transfer[t]);
      if (tree.node(t).is_leaf()) put_matrix(basis.leaf[t]);
    }
  }
  std::vector<char>& buffer() { return buf_; }

 private:
  std::vector<char> buf_;
};

class Reader {
 public:
  Reader(const char* data, std::size_t size) : data_(data), size_(size) {}

  template <class T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, data_ + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  Index get_index(Index limit, const char* what) {
    const auto v = get<std::uint64_t>();
    if (v > static_cast<std::uint64_t>(limit)) throw H2FormatError(std::string("H2 file: ") + what + " out of range");
    return static_cast<Index>(v);
  }
  Matrix get_matrix(Index rows, Index cols) {
    Matrix m(rows, cols);
    const std::size_t bytes = sizeof(double) * static_cast<std::size_t>(m.size());
    need(bytes);
    if (bytes) std::memcpy(m.data(), data_ + pos_, bytes);
    pos_ += bytes;
    return m;
  }
  ClusterTree get_tree(Index n) {
    std::vector<ClusterNode> nodes;
    std::function<void()> read_node = [&]() {
      if (static_cast<Index>(nodes.size()) > 2 * n) throw H2FormatError("H2 file: cluster tree too large");
      ClusterNode node;
      node.begin = get_index(n, "cluster range");
      node.end = get_index(n, "cluster range");
      if (node.end <= node.begin) throw H2FormatError("H2 file: empty cluster");
      Point3 lo, hi;
      for (int d = 0; d < 3; ++d) lo[d] = get<double>();
      for (int d = 0; d < 3; ++d) hi[d] = get<double>();
      node.box.lo = lo;
      node.box.hi = hi;
      const auto leaf = get<std::uint8_t>();
      if (leaf > 1) throw H2FormatError("H2 file: bad leaf flag");
      if (!leaf) node.children[0] = 0;
      nodes.push_back(node);
      if (!leaf) {
        read_node();
        read_node();
      }
    };
    read_node();
    std::vector<Index> perm(n);
    for (Index& p : perm) p = get_index(n - 1, "permutation entry");
    try {
      return ClusterTree::from_preorder(std::move(nodes), std::move(perm));
    } catch (const std::invalid_argument& e) {
      throw H2FormatError(std::string("H2 file: ") + e.what());
    }
  }
  ClusterBasis get_basis(const ClusterTree& tree) {
    ClusterBasis b;
    b.rank.assign(tree.size(), 0);
    b.leaf.assign(tree.size(), Matrix());
    b.transfer.assign(tree.size(), Matrix());
    for (Index t = 0; t < tree.size(); ++t) {
      const ClusterNode& node = tree.node(t);
      // Nested ranks never exceed the cluster size.
      b.rank[t] = get_index(node.size(), "basis rank");
      if (t > 0) b.transfer[t] = get_matrix(b.rank[t], b.rank[node.parent]);
      if (node.is_leaf()) b.leaf[t] = get_matrix(node.size(), b.rank[t]);
    }
    return b;
  }
  std::size_t position() const { return pos_; }

 private:
  void need(std::size_t bytes) const {
    if (bytes > size_ - pos_) throw H2FormatError("H2 file: truncated");
  }
  const char* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<char> serialize_h2(const H2Matrix& op) {
  Writer w;
  for (char c : kMagic) w.put<char>(c);
  w.put<std::uint32_t>(kVersion);
  w.put_u64(op.size());
  w.put_tree(op.row_tree());
  w.put_tree(op.col_tree());
  w.put_basis(op.row_tree(), op.row_basis());
  w.put_basis(op.col_tree(), op.col_basis());
  w.put_u64(static_cast<Index>(op.blocks().size()));
  for (const H2Block& b : op.blocks()) {
    w.put_u64(b.row);
    w.put_u64(b.col);
    w.put<std::uint8_t>(b.admissible ? 1 : 0);
    w.put_u64(b.data.rows());
    w.put_u64(b.data.cols());
    w.put_matrix(b.data);
  }
  std::vector<char>& buf = w.buffer();
  const std::uint64_t crc = crc64(buf.data(), buf.size());
  w.put<std::uint64_t>(crc);
  return std::move(buf);
}

H2Matrix deserialize_h2(const std::vector<char>& bytes, std::optional<Index> expected_size) {
  if (bytes.size() < sizeof(kMagic) + 8 || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
    throw H2FormatError("H2 file: bad magic");
  const std::size_t body = bytes.size() - sizeof(std::uint64_t);
  std::uint64_t stored;
  std::memcpy(&stored, bytes.data() + body, sizeof(stored));
  if (crc64(bytes.data(), body) != stored) throw H2FormatError("H2 file: checksum mismatch");

  Reader r(bytes.data(), body);
  for (std::size_t i = 0; i < sizeof(kMagic); ++i) r.get<char>();
  const auto version = r.get<std::uint32_t>();
  if (version != kVersion) throw H2FormatError("H2 file: unsupported version " + std::to_string(version));
  const auto n64 = r.get<std::uint64_t>();
  if (n64 == 0 || n64 > (std::uint64_t{1} << 40)) throw H2FormatError("H2 file: bad operator size");
  const Index n = static_cast<Index>(n64);
  if (expected_size && *expected_size != n) {
    std::ostringstream msg;
    msg << "H2 file: operator size " << n << " does not match expected " << *expected_size;
    throw H2FormatError(msg.str());
  }
  ClusterTree rows = r.get_tree(n);
  ClusterTree cols = r.get_tree(n);
  ClusterBasis rb = r.get_basis(rows);
  ClusterBasis cb = r.get_basis(cols);
  const Index nblocks = r.get_index(static_cast<Index>(body), "block count");
  std::vector<H2Block> blocks;
  for (Index i = 0; i < nblocks; ++i) {
    H2Block b;
    b.row = r.get_index(rows.size() - 1, "block row cluster");
    b.col = r.get_index(cols.size() - 1, "block column cluster");
    const auto adm = r.get<std::uint8_t>();
    if (adm > 1) throw H2FormatError("H2 file: bad admissible flag");
    b.admissible = adm == 1;
    const Index nr = r.get_index(n, "block rows");
    const Index nc = r.get_index(n, "block columns");
    const Index want_r = b.admissible ? rb.rank[b.row] : rows.node(b.row).size();
    const Index want_c = b.admissible ? cb.rank[b.col] : cols.node(b.col).size();
    if (nr != want_r || nc != want_c) throw H2FormatError("H2 file: block dimensions inconsistent with clusters");
    b.data = r.get_matrix(nr, nc);
    blocks.push_back(std::move(b));
  }
  if (r.position() != body) throw H2FormatError("H2 file: trailing bytes");
  return H2Matrix(std::move(rows), std::move(cols), std::move(rb), std::move(cb), std::move(blocks));
}

void save_h2(const H2Matrix& op, const std::filesystem::path& path) {
  const std::vector<char> bytes = serialize_h2(op);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

H2Matrix load_h2(const std::filesystem::path& path, std::optional<Index> expected_size) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_h2(bytes, expected_size);
}

}  // namespace h2demag
