#include <random>
#include <set>

#include "doctest.h"
#include "linflow/canonical.hpp"
#include "linflow/special.hpp"
#include "linflow/spectral.hpp"
#include "support.hpp"

using namespace linflow;
namespace ts = testing_support;

namespace {
const Tolerance kTol{};
}

TEST_SUITE("canonical") {

TEST_CASE("descriptors of small examples") {
  ClassDescriptor d = descriptor(Mat::real({{3, 0}, {0, -3}}), Relation::topological, kTol);
  CHECK(d.dim_s == 1);
  CHECK(d.dim_u == 1);
  CHECK(d.central.blocks.empty());

  d = descriptor(Mat::real({{0, -5}, {5, 0}}), Relation::smooth, kTol);
  REQUIRE(d.full.blocks.size() == 1);
  CHECK(std::abs(d.full.blocks[0].eigenvalue - Scalar(0, 1)) < 1e-12);
  CHECK(d.full.blocks[0].sizes == std::vector<std::size_t>{1});

  d = descriptor(Mat(3, 3), Relation::topological, kTol);
  CHECK(d.dim_s == 0);
  REQUIRE(d.central.blocks.size() == 1);
  CHECK(d.central.blocks[0].sizes == std::vector<std::size_t>{1, 1, 1});
}

TEST_CASE("representatives") {
  ClassDescriptor d;
  d.dimension = 2;
  d.dim_s = 1;
  d.dim_u = 1;
  const Mat r = representative(d);
  CHECK(same_class(descriptor(r, Relation::topological, kTol), d));
  CHECK(topological_verdict(r, Mat::real({{1, 0}, {0, -1}}), kTol).equivalent);

  const Mat rot = representative(descriptor(Mat::real({{0, -7}, {7, 0}}), Relation::topological, kTol));
  CHECK(topological_verdict(rot, Mat::real({{0, -1}, {1, 0}}), kTol).equivalent);
  CHECK(representative(descriptor(Mat(2, 2), Relation::topological, kTol)).is_zero());
}

TEST_CASE("descriptor equality tracks the verdicts") {
  std::mt19937_64 rng(51);
  for (int k = 0; k < 40; ++k) {
    const std::size_t n = 1 + k % 5;
    const Mat a = ts::random_structure(rng, n).form;
    const Mat b = k % 2 ? ts::similar(a, ts::random_conditioned(rng, a.rows(), 10.0)) * Scalar(2.5)
                        : ts::random_structure(rng, a.rows()).form;
    if (a.rows() != b.rows()) continue;
    for (Relation rel : {Relation::topological, Relation::smooth}) {
      const bool same = same_class(descriptor(a, rel, kTol), descriptor(b, rel, kTol));
      CHECK(same == verdict(rel, a, b, kTol).equivalent);
      // The representative is a fixed point of descriptor.
      const ClassDescriptor d = descriptor(a, rel, kTol);
      CHECK(same_class(descriptor(representative(d), rel, kTol), d));
    }
  }
}

TEST_CASE("2x2 catalogs") {
  const auto topo = catalog_2x2(Relation::topological);
  CHECK(topo.size() == 13);
  std::set<std::size_t> ids;
  for (const auto& e : topo) ids.insert(e.class_id);
  CHECK(ids.size() == 8);
  // diag(1,1) and diag(1,2) share a topological class, not a smooth one.
  CHECK(topological_verdict(Mat::real({{1, 0}, {0, 1}}), Mat::real({{1, 0}, {0, 2}}), kTol).equivalent);
  CHECK(!smooth_verdict(Mat::real({{1, 0}, {0, 1}}), Mat::real({{1, 0}, {0, 2}}), kTol).equivalent);
  // The zero matrix is alone under both relations.
  for (Relation rel : {Relation::topological, Relation::smooth})
    for (const auto& e : catalog_2x2(rel))
      if (!e.matrix.is_zero()) CHECK(!verdict(rel, Mat(2, 2), e.matrix, kTol).equivalent);

  const auto smooth = catalog_2x2(Relation::smooth);
  CHECK(smooth.size() == 12);
  std::size_t families = 0;
  for (const auto& e : smooth)
    if (e.parameter) {
      ++families;
      CHECK(e.member(e.sample) == e.matrix);
    }
  CHECK(families == 5);
}

}
