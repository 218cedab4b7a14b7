#include "h2demag/bem.hpp"
#include "h2demag/h2matrix.hpp"
#include "h2demag/hmatrix.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cstring>
#include <fstream>

using namespace h2demag;

namespace {

const H2Matrix& sample() {
  static const H2Matrix op = [] {
    const BoundaryKernel kernel(generate_sphere_mesh(1.0, 2));
    return recompress_h2(assemble_h(kernel), 1e-5);
  }();
  return op;
}

void reseal(std::vector<char>& bytes) {
  const std::size_t body = bytes.size() - 8;
  const std::uint64_t crc = crc64(bytes.data(), body);
  std::memcpy(bytes.data() + body, &crc, 8);
}

}  // namespace

TEST_CASE("crc64 check value") {
  const char* text = "123456789";
  CHECK(crc64(text, 9) == 0x995DC9BBDF1939FAull);
  CHECK(crc64(text, 0) == 0);
}

TEST_CASE("round trip is bit exact") {
  const H2Matrix& op = sample();
  const auto dir = testutil::temp_dir("persist");
  const auto path = dir / "op.h2";
  save_h2(op, path);
  CHECK_FALSE(std::filesystem::exists(dir / "op.h2.tmp"));
  const H2Matrix back = load_h2(path, op.size());
  CHECK(serialize_h2(back) == serialize_h2(op));
  const Eigen::VectorXd x = testutil::random_vector(op.size(), 9);
  const Eigen::VectorXd a = op.matvec(x), b = back.matvec(x);
  CHECK(std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0);
  CHECK(back.row_tree().permutation() == op.row_tree().permutation());
  CHECK(back.storage_bytes() == op.storage_bytes());
}

TEST_CASE("corruption is detected") {
  const std::vector<char> good = serialize_h2(sample());
  const Index n = sample().size();

  std::vector<char> flipped = good;
  flipped[good.size() / 2] ^= 0x10;
  CHECK_THROWS_WITH_AS(deserialize_h2(flipped), "H2 file: checksum mismatch", H2FormatError);

  std::vector<char> truncated(good.begin(), good.end() - 100);
  CHECK_THROWS_AS(deserialize_h2(truncated), H2FormatError);
  CHECK_THROWS_AS(deserialize_h2(std::vector<char>(good.begin(), good.begin() + 6)), H2FormatError);

  std::vector<char> magic = good;
  magic[0] = 'X';
  CHECK_THROWS_WITH_AS(deserialize_h2(magic), "H2 file: bad magic", H2FormatError);

  std::vector<char> version = good;
  version[4] = 2;
  reseal(version);
  CHECK_THROWS_WITH_AS(deserialize_h2(version), "H2 file: unsupported version 2", H2FormatError);

  CHECK_THROWS_AS(deserialize_h2(good, n + 1), H2FormatError);
  CHECK(deserialize_h2(good, n).size() == n);

  // A resealed body with trailing garbage still fails on structure.
  std::vector<char> extra = good;
  extra.insert(extra.end() - 8, 8, '\0');
  reseal(extra);
  CHECK_THROWS_WITH_AS(deserialize_h2(extra), "H2 file: trailing bytes", H2FormatError);
}

TEST_CASE("missing file") {
  CHECK_THROWS(load_h2(testutil::temp_dir("persist_missing") / "none.h2"));
}
