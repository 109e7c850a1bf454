#pragma once

#include <cstddef>

#include "linflow/linalg.hpp"

namespace linflow {

/// Shape and parameter of Δ_{m,n}^{[ω]}.
struct DeltaSpec {
  std::size_t m = 1;
  std::size_t n = 1;
  Scalar omega{};
};

/// D_m(ω) = diag(1, ω, …, ω^{m−1}). Complex field iff ω is non-real.
Mat diag_powers(std::size_t m, Scalar omega);

/// J_m: ones on the superdiagonal.
Mat nilpotent_block(std::size_t m);

/// 1/Γ(z). Lanczos (g = 7) on Re z ≥ 1/2, reflection elsewhere; exactly 0
/// at z = 0, −1, −2, … (detected within 1e-12).
Scalar recip_gamma(Scalar z);

/// Entry (r, c), 1-based, is 1/Γ(ω + c − r + 1). Zero-sized shapes are
/// allowed internally; DeltaSpec with m or n = 0 throws InvalidArgument.
Mat delta_matrix(const DeltaSpec& spec);

/// e^{tJ_m} assembled blockwise from D and Δ matrices, rows split [j, m−j]
/// and columns split [m−j, j]. Requires 1 ≤ j ≤ m and t ≠ 0.
Mat exp_block_partition(std::size_t m, std::size_t j, double t);

/// Grid estimate of the best ν with ‖e^{tJ_m}x‖ ≥ ν‖x‖ / √(1 + t^{2m−2}).
/// t runs over ±10^k log-spaced in [1e-3, 1e3] plus t = 0; x over a fixed
/// sample of unit vectors. `refine` multiplies both grid sizes. This is a
/// numerical estimate, not a proof of the bound.
double lower_bound_nu(std::size_t m, std::size_t refine = 1);
double lower_bound_nu_serial(std::size_t m, std::size_t refine = 1);
double lower_bound_nu_parallel(std::size_t m, std::size_t refine = 1);

}  // namespace linflow
