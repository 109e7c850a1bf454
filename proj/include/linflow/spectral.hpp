#pragma once

#include <cstddef>
#include <vector>

#include "linflow/linalg.hpp"

namespace linflow {

/// Eigenvalues as returned by the QR iteration, before any clustering.
/// For real input `conj_of[i]` is the index of the conjugate partner of
/// value i (i itself for real eigenvalues); for complex input it is i.
struct RawSpectrum {
  std::vector<Scalar> values;
  std::vector<std::size_t> conj_of;
  std::size_t iterations = 0;
};

/// Real input: balancing, Householder Hessenberg reduction and the
/// Francis double-shift QR iteration, so conjugate pairs are exact.
/// Complex input: Hessenberg reduction and single-shift QR with Wilkinson
/// shifts. Throws ConvergenceError.
RawSpectrum raw_eigenvalues(const Mat& a);

/// One clustered eigenvalue. `weyr[k-1]` = dim ker(A−λ)^k − dim ker(A−λ)^{k−1}.
struct EigCluster {
  Scalar value;
  std::size_t alg_mult = 0;
  std::vector<std::size_t> weyr;
};

/// Clusters the spectrum and computes the Weyr characteristic at each
/// cluster representative.
///
/// Clusters start from single linkage at radius tol.eig_cluster_rel·scale
/// (scale defaults to ‖a‖_F). A cluster whose generalized eigenspace at the
/// representative is larger than its multiplicity is a fragment of a
/// split defective eigenvalue and is merged with its nearest neighbour
/// (together with its mirror image for real input) until every cluster is
/// consistent. For real input clusters are closed under conjugation.
std::vector<EigCluster> eigen_clusters(const Mat& a, const Tolerance& tol);
std::vector<EigCluster> eigen_clusters(const Mat& a, const Tolerance& tol, double scale);

/// Blocks at one eigenvalue; sizes sorted descending.
struct JordanBlocks {
  Scalar eigenvalue;
  std::vector<std::size_t> sizes;
};

/// Complete similarity invariant. With field=real each non-real conjugate
/// pair is stored once, with positive imaginary part, and a block of size
/// m stands for a real block of dimension 2m.
struct JordanStructure {
  Field field = Field::real;
  std::vector<JordanBlocks> blocks;

  std::size_t dimension() const;
  bool is_nilpotent() const;
  /// Real dimension contributed by `b` (2·Σsizes for a real-field pair).
  std::size_t width(const JordanBlocks& b) const;
};

/// Block counts from a Weyr sequence: #blocks of size n = w_n − w_{n+1}.
std::vector<std::size_t> block_sizes_from_weyr(const std::vector<std::size_t>& weyr);
std::vector<std::size_t> weyr_from_block_sizes(std::vector<std::size_t> sizes);

JordanStructure jordan_structure(const Mat& a, const Tolerance& tol);
JordanStructure jordan_structure(const Mat& a, const Tolerance& tol, double scale);

/// Structures equal up to eigenvalue distance `abs_tol` (order-free).
bool same_structure(const JordanStructure& x, const JordanStructure& y, double abs_tol);

/// Layout of one Jordan block inside a Jordan basis.
struct BlockSpan {
  Scalar eigenvalue;
  std::size_t size = 0;    // Jordan block size m
  std::size_t offset = 0;  // first basis column
  bool real_pair = false;  // real 2m-block for a ± pair (field=real only)
  std::size_t width() const { return real_pair ? 2 * size : size; }
};

/// Real Jordan block aI + J_m for real λ, or the 2m×2m block
/// aI + [[J_m, −bI],[bI, J_m]] for λ = a+ib, b>0 (first m coordinates are
/// the real parts of the chain, the last m the negated imaginary parts).
Mat real_jordan_block(Scalar eigenvalue, std::size_t m);
/// Complex Jordan block λI + J_m.
Mat complex_jordan_block(Scalar eigenvalue, std::size_t m);

/// Block-diagonal Jordan matrix for a structure, blocks in stored order
/// (eigenvalue groups in order, sizes descending).
Mat jordan_form(const JordanStructure& s);

/// P with P⁻¹AP = form, form built as `jordan_form(structure)`. Columns
/// inside each block are chain vectors: A p₁ = λp₁, A p_j = λp_j + p_{j−1}.
struct JordanDecomposition {
  Mat basis;
  Mat form;
  JordanStructure structure;
  std::vector<BlockSpan> blocks;
  double condition = 1.0;
};

/// Jordan basis over the field of `a`. Throws IllConditioned when the
/// chain basis is too close to singular for the rank tolerance.
JordanDecomposition jordan_decomposition(const Mat& a, const Tolerance& tol);
JordanDecomposition jordan_decomposition(const Mat& a, const Tolerance& tol, double scale);

/// Real Jordan basis; `a` must be real.
JordanDecomposition real_jordan_basis(const Mat& a, const Tolerance& tol);

/// Stable / central / unstable splitting by the sign of Re λ relative to
/// threshold tol.eig_cluster_rel·scale.
struct ScuSplit {
  std::size_t dim_s = 0, dim_c = 0, dim_u = 0;
  Mat basis_s, basis_c, basis_u;  // orthonormal columns
  Mat proj_s, proj_c, proj_u;     // spectral projections (oblique)
};

ScuSplit scu_split(const Mat& a, const Tolerance& tol);
ScuSplit scu_split(const Mat& a, const Tolerance& tol, double scale);

enum class SpectralRegion { stable, central, unstable };

/// Classification radius used throughout: tol.eig_cluster_rel · scale.
double spectral_threshold(const Tolerance& tol, double scale);
SpectralRegion region_of(Scalar lambda, double threshold);
double default_scale(const Mat& a);

/// Matrix of A restricted to the invariant subspace spanned by the
/// orthonormal columns of q: qᴴ A q.
Mat restrict_to(const Mat& a, const Mat& q);

}  // namespace linflow
