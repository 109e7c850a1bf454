#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "linflow/spectral.hpp"

namespace linflow {

/// n together with its base-2 digits in ascending order (no trailing zeros).
struct BinaryIndex {
  std::uint64_t n = 0;
  std::vector<int> digits;

  static BinaryIndex of(std::uint64_t n);
  /// Digit k, with the infinite tail of zeros.
  int digit(std::size_t k) const { return k < digits.size() ? digits[k] : 0; }
};

/// Invariant subspace given by orthonormal columns.
struct Subspace {
  Mat basis;
  std::size_t ambient_dim = 0;
  std::size_t dim() const { return basis.cols(); }
};

/// c_n(s) = dim(X_s ∩ C^{ε(n)}) and d_n(s) = c_{n−1}(s) − c_n(s) for the
/// central frequencies s ≥ 0 (s = 0 is the zero eigenvalue, s > 0 the pair
/// ±is), n = 0..ambient_dim.
struct CoreProfile {
  std::size_t ambient_dim = 0;
  std::vector<double> frequencies;        // ascending
  std::vector<std::vector<std::size_t>> c;  // c[f][n], n = 0..ambient_dim
  std::vector<std::vector<std::size_t>> d;  // d[f][n], n = 0..ambient_dim, d[f][0] = 0

  /// Index of `s` in `frequencies` within `abs_tol`, or npos.
  std::size_t find(double s, double abs_tol) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

// Cores are computed from the real Jordan basis: on a zero block J_m the
// core is spanned by the first ⌈m/2⌉ chain vectors and the zero-core by the
// first ⌊m/2⌋; on an imaginary pair block the same counts apply to the
// real/imaginary chain pairs; blocks off the imaginary axis contribute
// nothing. Complex input is realified first.
Subspace core(const Mat& a, const Tolerance& tol);
Subspace zero_core(const Mat& a, const Tolerance& tol);

/// Span of the eigenvectors for purely imaginary eigenvalues (Bnd Φ).
Subspace bounded_subspace(const Mat& a, const Tolerance& tol);

/// C^{ε(n)}: core for digit 0 and zero-core for digit 1, applied to the
/// successive restrictions until the space stops shrinking. Cross-checked
/// against the per-block count (zero blocks of size > n count 1, imaginary
/// pairs with m > n count 2); a mismatch throws InternalConsistencyError.
Subspace iterated_core(const Mat& a, std::uint64_t n, const Tolerance& tol);

/// Dimension of C^{ε(n)} from the Jordan structure alone.
std::size_t iterated_core_dim(const JordanStructure& s, std::uint64_t n);

CoreProfile core_profile(const Mat& a, const Tolerance& tol);

/// True when span(x) ⊆ span(y) to the rank tolerance.
bool contained_in(const Subspace& x, const Subspace& y, const Tolerance& tol);

}  // namespace linflow
