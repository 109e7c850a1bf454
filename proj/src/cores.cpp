#include "linflow/cores.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "linflow/equiv.hpp"

namespace linflow {

BinaryIndex BinaryIndex::of(std::uint64_t n) {
  BinaryIndex b;
  b.n = n;
  for (std::uint64_t v = n; v != 0; v >>= 1) b.digits.push_back(static_cast<int>(v & 1U));
  return b;
}

std::size_t CoreProfile::find(double s, double abs_tol) const {
  for (std::size_t i = 0; i < frequencies.size(); ++i)
    if (std::abs(frequencies[i] - s) <= abs_tol) return i;
  return npos;
}

namespace {

enum class CoreKind { core, zero_core, bounded };

std::size_t kept(CoreKind kind, std::size_t m) {
  switch (kind) {
    case CoreKind::core: return (m + 1) / 2;
    case CoreKind::zero_core: return m / 2;
    case CoreKind::bounded: return 1;
  }
  return 0;
}

Mat orthonormal_columns(const std::vector<Mat>& cols, std::size_t n) {
  if (cols.empty()) return Mat(n, 0);
  const auto qr = pivoted_qr(hstack(cols));
  return qr.q.block(0, 0, n, cols.size());
}

// Orthonormal basis of the core-type subspace of a real matrix, thresholds
// taken relative to `scale`.
Mat core_basis(const Mat& a, CoreKind kind, const Tolerance& tol, double scale) {
  const std::size_t n = a.rows();
  if (n == 0) return Mat(0, 0);
  const JordanDecomposition jd = jordan_decomposition(a, tol, scale);
  std::vector<Mat> cols;
  for (const auto& b : jd.blocks) {
    if (b.eigenvalue.real() != 0.0) continue;
    const std::size_t k = kept(kind, b.size);
    for (std::size_t j = 0; j < k; ++j) {
      cols.push_back(jd.basis.col(b.offset + j));
      if (b.real_pair) cols.push_back(jd.basis.col(b.offset + b.size + j));
    }
  }
  return orthonormal_columns(cols, n);
}

Mat real_input(const Mat& a) {
  require_square(a, "core input");
  check_finite(a, "core input");
  return a.field() == Field::complex ? realify(a) : a;
}

Subspace wrap(Mat basis, std::size_t n) { return {std::move(basis), n}; }

Mat iterate(const Mat& a, std::uint64_t n, const Tolerance& tol, double scale) {
  const std::size_t dim = a.rows();
  const BinaryIndex idx = BinaryIndex::of(n);
  Mat q = Mat::identity(dim);
  const std::size_t cap = idx.digits.size() + dim + 2;
  for (std::size_t k = 0; q.cols() > 0; ++k) {
    const CoreKind kind = idx.digit(k) == 1 ? CoreKind::zero_core : CoreKind::core;
    const Mat s = core_basis(restrict_to(a, q), kind, tol, scale);
    if (k >= idx.digits.size() && s.cols() == q.cols()) break;
    q = s.cols() ? q * s : Mat(dim, 0);
    if (k > cap) throw InternalConsistencyError("iterated core did not stabilize");
  }
  return q;
}

}  // namespace

Subspace core(const Mat& a, const Tolerance& tol) {
  const Mat r = real_input(a);
  return wrap(core_basis(r, CoreKind::core, tol, default_scale(r)), r.rows());
}

Subspace zero_core(const Mat& a, const Tolerance& tol) {
  const Mat r = real_input(a);
  return wrap(core_basis(r, CoreKind::zero_core, tol, default_scale(r)), r.rows());
}

Subspace bounded_subspace(const Mat& a, const Tolerance& tol) {
  const Mat r = real_input(a);
  return wrap(core_basis(r, CoreKind::bounded, tol, default_scale(r)), r.rows());
}

std::size_t iterated_core_dim(const JordanStructure& s, std::uint64_t n) {
  std::size_t d = 0;
  for (const auto& g : s.blocks) {
    if (g.eigenvalue.real() != 0.0) continue;
    const bool pair = g.eigenvalue.imag() != 0.0;
    for (std::size_t m : g.sizes)
      if (m > n) d += pair ? 2 : 1;
  }
  return d;
}

namespace {

Subspace iterated_checked(const Mat& r, std::uint64_t n, const Tolerance& tol, double scale) {
  Mat q = iterate(r, n, tol, scale);
  const std::size_t closed = iterated_core_dim(jordan_structure(r, tol, scale), n);
  if (q.cols() != closed) {
    std::ostringstream os;
    os << "iterated core for n=" << n << ": recursive dimension " << q.cols()
       << " differs from block count " << closed;
    throw InternalConsistencyError(os.str());
  }
  return wrap(std::move(q), r.rows());
}

}  // namespace

Subspace iterated_core(const Mat& a, std::uint64_t n, const Tolerance& tol) {
  const Mat r = real_input(a);
  return iterated_checked(r, n, tol, default_scale(r));
}

CoreProfile core_profile(const Mat& a, const Tolerance& tol) {
  const Mat r = real_input(a);
  const double scale = default_scale(r);
  const std::size_t dim = r.rows();
  CoreProfile p;
  p.ambient_dim = dim;
  const JordanDecomposition jd = jordan_decomposition(r, tol, scale);
  std::vector<Scalar> central;
  for (const auto& g : jd.structure.blocks)
    if (g.eigenvalue.real() == 0.0) central.push_back(g.eigenvalue);
  std::sort(central.begin(), central.end(),
            [](Scalar x, Scalar y) { return x.imag() < y.imag(); });
  for (Scalar s : central) {
    std::vector<Mat> cols;
    for (const auto& b : jd.blocks)
      if (b.eigenvalue == s)
        for (std::size_t j = 0; j < b.width(); ++j) cols.push_back(jd.basis.col(b.offset + j));
    const Mat k = orthonormal_columns(cols, dim);
    const Mat rr = restrict_to(r, k);
    std::vector<std::size_t> cs(dim + 1, 0), ds(dim + 1, 0);
    for (std::size_t n = 0; n <= dim; ++n)
      cs[n] = k.cols() ? iterated_checked(rr, n, tol, scale).dim() : 0;
    for (std::size_t n = 1; n <= dim; ++n) ds[n] = cs[n - 1] - cs[n];
    p.frequencies.push_back(s.imag());
    p.c.push_back(std::move(cs));
    p.d.push_back(std::move(ds));
  }
  return p;
}

bool contained_in(const Subspace& x, const Subspace& y, const Tolerance& tol) {
  if (x.dim() == 0) return true;
  if (y.dim() == 0) return false;
  return rank(hstack({y.basis, x.basis}), tol, 1.0) == y.dim();
}

}  // namespace linflow
