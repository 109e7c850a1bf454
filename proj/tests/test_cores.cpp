#include <random>

#include "doctest.h"
#include "linflow/cores.hpp"
#include "linflow/error.hpp"
#include "linflow/special.hpp"
#include "linflow/spectral.hpp"
#include "linflow/witness.hpp"
#include "support.hpp"

using namespace linflow;
namespace ts = testing_support;

namespace {
const Tolerance kTol{};
}

TEST_SUITE("cores") {

TEST_CASE("binary digits") {
  const BinaryIndex b = BinaryIndex::of(6);
  CHECK(b.digit(0) == 0);
  CHECK(b.digit(1) == 1);
  CHECK(b.digit(2) == 1);
  CHECK(b.digit(7) == 0);
  CHECK(BinaryIndex::of(0).digit(0) == 0);
}

TEST_CASE("core and zero-core of single blocks") {
  CHECK(core(nilpotent_block(5), kTol).dim() == 3);
  CHECK(zero_core(nilpotent_block(5), kTol).dim() == 2);
  CHECK(core(nilpotent_block(4), kTol).dim() == 2);
  CHECK(zero_core(nilpotent_block(4), kTol).dim() == 2);
  CHECK(core(Mat::real({{1, 0}, {0, -2}}), kTol).dim() == 0);
  const Mat pair3 = real_jordan_block(Scalar(0, 1), 3);
  CHECK(core(pair3, kTol).dim() == 4);
  CHECK(zero_core(pair3, kTol).dim() == 2);
}

TEST_CASE("zero-core and bounded subspace lie inside the core") {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 20; ++k) {
    const ts::Planted p = ts::random_structure(rng, 8);
    const Mat a = ts::similar(p.form, ts::random_conditioned(rng, p.dim(), 10.0));
    CHECK(contained_in(zero_core(a, kTol), core(a, kTol), kTol));
    CHECK(contained_in(bounded_subspace(a, kTol), core(a, kTol), kTol));
  }
}

TEST_CASE("bounded subspace") {
  CHECK(bounded_subspace(nilpotent_block(3), kTol).dim() == 1);
  CHECK(bounded_subspace(Mat::real({{0, -1}, {1, 0}}), kTol).dim() == 2);
  CHECK(bounded_subspace(Mat::real({{1, 0}, {0, -1}}), kTol).dim() == 0);
  // Its basis vectors have bounded orbits; a complementary direction of a
  // nilpotent block does not.
  const Mat a = block_diag({nilpotent_block(2), real_jordan_block(Scalar(0, 2), 1), Mat(1, 1)});
  const Subspace b = bounded_subspace(a, kTol);
  REQUIRE(b.dim() == 4);
  for (std::size_t j = 0; j < b.dim(); ++j) CHECK(orbit_bounded(a, b.basis.col(j), 1e3, 401));
  Mat e2(5, 1);
  e2(1, 0) = 1.0;
  CHECK(!orbit_bounded(a, e2, 1e3, 401));
  // With a hyperbolic block, rounding-level components of the basis grow
  // like e^{|t|}, so the horizon is kept where e^{t}·eps stays small.
  const Mat h = block_diag({nilpotent_block(2), real_jordan_block(Scalar(0, 2), 1), Mat::real({{-1}})});
  const Subspace bh = bounded_subspace(h, kTol);
  REQUIRE(bh.dim() == 3);
  for (std::size_t j = 0; j < bh.dim(); ++j) CHECK(orbit_bounded(h, bh.basis.col(j), 20.0, 401));
  CHECK(!orbit_bounded(h, e2, 1e3, 401));
}

TEST_CASE("iterated core") {
  CHECK(iterated_core(nilpotent_block(4), 2, kTol).dim() == 1);
  CHECK(iterated_core(nilpotent_block(4), 4, kTol).dim() == 0);
  const Mat a = block_diag({nilpotent_block(3), nilpotent_block(1), real_jordan_block(Scalar(0, 2), 2)});
  CHECK(iterated_core(a, 1, kTol).dim() == 3);
  const JordanStructure s = jordan_structure(a, kTol);
  CHECK(iterated_core_dim(s, 1) == 3);
  for (std::uint64_t n = 0; n <= 8; ++n) CHECK(iterated_core(a, n, kTol).dim() == iterated_core_dim(s, n));
}

TEST_CASE("core profile") {
  const CoreProfile p = core_profile(block_diag({nilpotent_block(3), nilpotent_block(1)}), kTol);
  const std::size_t z = p.find(0.0, 1e-9);
  REQUIRE(z != CoreProfile::npos);
  for (std::size_t n = 1; n <= 4; ++n) CHECK(p.d[z][n] == (n == 1 || n == 3 ? 1u : 0u));

  const CoreProfile r = core_profile(real_jordan_block(Scalar(0, 5), 1), kTol);
  const std::size_t f = r.find(5.0, 1e-9);
  REQUIRE(f != CoreProfile::npos);
  CHECK(r.d[f][1] == 2);

  const CoreProfile h = core_profile(Mat::real({{1, 0}, {0, -1}}), kTol);
  for (const auto& row : h.d)
    for (std::size_t v : row) CHECK(v == 0);

  const CoreProfile j4 = core_profile(nilpotent_block(4), kTol);
  const std::size_t k = j4.find(0.0, 1e-9);
  REQUIRE(k != CoreProfile::npos);
  CHECK(j4.c[k] == std::vector<std::size_t>{1, 1, 1, 1, 0});
}

}
