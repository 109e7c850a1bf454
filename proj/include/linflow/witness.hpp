#pragma once

#include <string>
#include <vector>

#include "linflow/linalg.hpp"

namespace linflow {

struct ResidualReport {
  double max_residual = 0.0;
  double bound = 0.0;
  std::vector<double> times;
  std::string grid;
  bool pass = false;
};

/// max over t ∈ {±0.1, ±1, ±5, ±20} of
///   ‖h e^{tA} − e^{αtB} h‖ / ((1 + ‖h‖) · max(1, ‖e^{tA}‖, ‖e^{αtB}‖)),
/// Frobenius norms; pass iff ≤ 100 · tol.residual_abs. Dividing by the
/// flow norms keeps the check meaningful for exponentially growing flows.
/// Throws SingularMatrix when h is not invertible.
ResidualReport verify_conjugacy(const Mat& a, const Mat& b, const Mat& h, double alpha,
                                const Tolerance& tol);

/// A point x_t near the core and its image Φ_t x_t.
struct WitnessPair {
  Mat x;
  Mat image;
};

/// Witness sequence for the nilpotent block J_m. With v of length ⌊m/2⌋,
/// x_t → [v; 0] and Φ_t x_t → 0 (zero-core). For odd m, v of length
/// ⌈m/2⌉ gives the core witness: x_t → [v; 0] with Φ_t x_t bounded. The
/// image is evaluated in closed form, which stays accurate for large |t|.
WitnessPair core_witness(std::size_t m, const Mat& v, double t);

/// The same for the real block of ±i·freq with chain length m (real size
/// 2m). v has length 2k, k ∈ {⌊m/2⌋, ⌈m/2⌉}: the first k entries act on the
/// real-part chain, the last k on the imaginary-part chain.
WitnessPair core_witness_pair(std::size_t m, double freq, const Mat& v, double t);

/// Empirical check that the orbit of x stays below growth · (1 + ‖x‖) for
/// `samples` equally spaced t in [−horizon, horizon]. A numerical proxy,
/// not a proof of boundedness.
bool orbit_bounded(const Mat& a, const Mat& x, double horizon, std::size_t samples,
                   double growth = 1e2);

}  // namespace linflow
