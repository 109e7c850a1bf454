#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <random>

#include "doctest.h"
#include "linflow/error.hpp"
#include "linflow/linalg.hpp"
#include "support.hpp"

using namespace linflow;
namespace ts = testing_support;

namespace {

Eigen::MatrixXcd to_eigen(const Mat& a) {
  Eigen::MatrixXcd e(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) e(i, j) = a(i, j);
  return e;
}

double rel_to_eigen(const Mat& a, const Eigen::MatrixXcd& e) {
  return (to_eigen(a) - e).norm() / std::max(1.0, e.norm());
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("products and stacking") {
  const Mat a = Mat::real({{1, 2}, {3, 4}});
  const Mat i = Mat::identity(2);
  CHECK(a * i == a);
  const Mat p = a * a;
  CHECK(p(0, 0) == Scalar(7.0));
  CHECK(p(1, 1) == Scalar(22.0));
  const Mat h = hstack({a, i});
  CHECK(h.cols() == 4);
  CHECK(h(1, 3) == Scalar(1.0));
  const Mat d = block_diag({a, Mat::real({{5}})});
  CHECK(d.rows() == 3);
  CHECK(d(2, 2) == Scalar(5.0));
  CHECK(d(0, 2) == Scalar(0.0));
  CHECK_THROWS_AS(a * Mat(3, 3), DimensionError);
}

TEST_CASE("pivoted QR reconstructs and is orthonormal") {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 20; ++k) {
    const Mat a = ts::gaussian(rng, 5, 4, k % 2 ? Field::complex : Field::real);
    const PivotedQr f = pivoted_qr(a);
    Mat ap(a.rows(), a.cols(), a.field());
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t i = 0; i < a.rows(); ++i) ap(i, j) = a(i, f.perm[j]);
    CHECK(rel_diff(f.q * f.r, ap) < 1e-13);
    CHECK(rel_diff(f.q.adjoint() * f.q, Mat::identity(f.q.cols(), a.field())) < 1e-13);
  }
}

TEST_CASE("rank and kernel of planted-rank matrices") {
  std::mt19937_64 rng(2);
  for (std::size_t r = 0; r <= 5; ++r) {
    const Mat a = r ? ts::gaussian(rng, 6, r) * ts::gaussian(rng, r, 6) : Mat(6, 6);
    CHECK(rank(a, Tolerance{}) == r);
    const Mat k = kernel_basis(a, Tolerance{});
    CHECK(k.cols() == 6 - r);
    if (k.cols()) CHECK((a * k).norm_fro() <= 1e-10 * std::max(1.0, a.norm_fro()));
  }
}

TEST_CASE("solve and inverse") {
  std::mt19937_64 rng(3);
  const Mat a = ts::random_conditioned(rng, 6, 1e3);
  const Mat x = ts::gaussian(rng, 6, 2);
  CHECK(rel_diff(solve(a, a * x, Tolerance{}), x) < 1e-11);
  CHECK(rel_diff(inverse(a, Tolerance{}) * a, Mat::identity(6)) < 1e-11);
  CHECK_THROWS_AS(inverse(Mat::real({{1, 2}, {2, 4}}), Tolerance{}), SingularMatrix);
  CHECK(condition_1(Mat::real({{1, 0}, {0, 1e3}}), Tolerance{}) == doctest::Approx(1e3));
}

TEST_CASE("matexp agrees with Eigen's matrix exponential") {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 30; ++k) {
    const std::size_t n = 1 + k % 7;
    const Mat a = ts::gaussian(rng, n, n, k % 3 == 0 ? Field::complex : Field::real) * Scalar(0.5 + k % 4);
    const Eigen::MatrixXcd e = to_eigen(a).exp();
    CHECK(rel_to_eigen(matexp(a), e) < 1e-11);
  }
}

TEST_CASE("matexp closed forms") {
  // Rotation: e^{tA} = [[cos t, -sin t], [sin t, cos t]].
  const Mat rot = Mat::real({{0, -1}, {1, 0}});
  for (double t : {0.1, 1.0, 100.0, 1000.0}) {
    const Mat e = matexp(rot, t);
    CHECK(std::abs(e(0, 0) - std::cos(t)) < 1e-12 * std::max(1.0, t));
    CHECK(std::abs(e(1, 0) - std::sin(t)) < 1e-12 * std::max(1.0, t));
  }
  // Nilpotent block: terminating series.
  Mat j(4, 4);
  for (int i = 0; i < 3; ++i) j(i, i + 1) = 1.0;
  const Mat e = matexp(j, 2.0);
  CHECK(e(0, 3).real() == doctest::Approx(8.0 / 6.0).epsilon(1e-14));
  CHECK(e(0, 2).real() == doctest::Approx(2.0).epsilon(1e-14));
  // Diagonal with large spread.
  const Mat d = Mat::real({{-3, 0}, {0, 2}});
  const Mat ed = matexp(d, 50.0);
  CHECK(ed(1, 1).real() == doctest::Approx(std::exp(100.0)).epsilon(1e-12));
  CHECK(ed(0, 0).real() == doctest::Approx(std::exp(-150.0)).epsilon(1e-12));
  CHECK(matexp(Mat(3, 3), 7.0) == Mat::identity(3));
}

TEST_CASE("matexp group property") {
  std::mt19937_64 rng(5);
  const Mat a = ts::gaussian(rng, 5, 5);
  CHECK(rel_diff(matexp(a, 1.3) * matexp(a, -1.3), Mat::identity(5)) < 1e-12);
  CHECK(rel_diff(matexp(a, 0.7) * matexp(a, 0.6), matexp(a, 1.3)) < 1e-12);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(matexp(Mat(2, 3)), DimensionError);
  Mat bad = Mat::identity(2);
  bad(0, 1) = std::nan("");
  CHECK_THROWS_AS(matexp(bad), NonFiniteInput);
  CHECK_THROWS_AS(matexp(Mat::identity(2), INFINITY), NonFiniteInput);
  Tolerance t;
  t.rank_rel = -1.0;
  CHECK_THROWS_AS(t.validate(), InvalidArgument);
  t.rank_rel = 2.0;
  CHECK_THROWS_AS(t.validate(), InvalidArgument);
  CHECK_NOTHROW(Tolerance{}.validate());
}

}
