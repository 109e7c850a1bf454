#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "linflow/error.hpp"

namespace linflow {

using Scalar = std::complex<double>;

enum class Field { real, complex };

inline const char* to_string(Field f) { return f == Field::real ? "real" : "complex"; }

/// Numerical thresholds shared by every rank, clustering and verification
/// decision. All three are relative or absolute bounds and must be > 0.
struct Tolerance {
  double rank_rel = 1e-10;
  double eig_cluster_rel = 1e-8;
  double residual_abs = 1e-8;

  void validate() const;
};

/// Dense row-major matrix over R or C. Entries are always stored as
/// complex numbers; a real-field matrix keeps every imaginary part at 0.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, Field field = Field::real);

  static Mat identity(std::size_t n, Field field = Field::real);
  static Mat zeros(std::size_t rows, std::size_t cols, Field field = Field::real) {
    return Mat(rows, cols, field);
  }
  static Mat real(std::initializer_list<std::initializer_list<double>> rows);
  static Mat complex(std::initializer_list<std::initializer_list<Scalar>> rows);
  static Mat from_rows(const std::vector<std::vector<Scalar>>& rows, Field field);
  static Mat column(std::span<const Scalar> v, Field field);
  static Mat diagonal(std::span<const Scalar> d, Field field);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Field field() const noexcept { return field_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Scalar> data() noexcept { return data_; }
  std::span<const Scalar> data() const noexcept { return data_; }

  Mat block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Mat& b);
  Mat col(std::size_t c) const { return block(0, c, rows_, 1); }
  std::vector<Scalar> col_vector(std::size_t c) const;

  Mat adjoint() const;
  Mat transpose() const;
  Mat conj() const;
  Mat real_part() const;
  Mat imag_part() const;

  /// Reinterpret as complex field (no data change).
  Mat as_complex() const;
  /// Drop to real field; throws if any imaginary part exceeds `tol`.
  Mat as_real(double tol = 0.0) const;

  double norm_fro() const;
  double norm_1() const;
  double norm_inf() const;
  double norm_max() const;
  bool is_finite() const;
  bool is_zero() const;

  Mat& operator+=(const Mat& b);
  Mat& operator-=(const Mat& b);
  Mat& operator*=(Scalar s);

  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator-(Mat a) { return a *= Scalar(-1.0); }
  friend Mat operator*(Mat a, Scalar s) { return a *= s; }
  friend Mat operator*(Scalar s, Mat a) { return a *= s; }
  friend Mat operator*(const Mat& a, const Mat& b);

  friend bool operator==(const Mat& a, const Mat& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Field field_ = Field::real;
  std::vector<Scalar> data_;
};

Field join(Field a, Field b);

/// Throws NonFiniteInput on NaN/Inf, InvalidArgument if a real-field
/// matrix carries a nonzero imaginary part.
void check_finite(const Mat& a, const char* what = "matrix");
void require_square(const Mat& a, const char* what = "matrix");

Mat hstack(const std::vector<Mat>& blocks);
Mat block_diag(const std::vector<Mat>& blocks);

/// Householder QR with column pivoting, A·P = Q·R. Q is the full square
/// unitary factor; `pivots[k]` is |R(k,k)| which is non-increasing.
struct PivotedQr {
  Mat q;
  Mat r;
  std::vector<std::size_t> perm;
  std::vector<double> pivots;
};
PivotedQr pivoted_qr(const Mat& a);

/// Numerical rank: number of pivots of the column-pivoted factorization of
/// aᴴ above tol.rank_rel · (first pivot).
std::size_t rank(const Mat& a, const Tolerance& tol);

/// As `rank`, with threshold tol.rank_rel · max(first pivot, scale). Used
/// when the matrix is derived from a larger generator (shifted or
/// restricted) and its own pivots are no reference for the noise level.
std::size_t rank(const Mat& a, const Tolerance& tol, double scale);

/// Orthonormal basis of the numerical nullspace; cols = a.cols − rank(a).
Mat kernel_basis(const Mat& a, const Tolerance& tol);
Mat kernel_basis(const Mat& a, const Tolerance& tol, double scale);

/// Orthonormal basis of the column space (numerical range).
Mat range_basis(const Mat& a, const Tolerance& tol, double scale = 0.0);

/// e^{tA} by scaling and squaring with the degree-13 Padé approximant.
Mat matexp(const Mat& a, double t = 1.0);

/// Solves a·x = b with partial-pivoted LU plus one refinement step.
/// Throws SingularMatrix carrying the rank when a is numerically singular.
Mat solve(const Mat& a, const Mat& b, const Tolerance& tol);
Mat inverse(const Mat& a, const Tolerance& tol);

/// 1-norm condition estimate ‖a‖₁‖a⁻¹‖₁ (exact inverse, fine for the
/// dimensions targeted here); +inf when singular.
double condition_1(const Mat& a, const Tolerance& tol);

/// ‖a − b‖_F / max(1, ‖b‖_F).
double rel_diff(const Mat& a, const Mat& b);

}  // namespace linflow
