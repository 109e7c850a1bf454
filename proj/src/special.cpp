#include "linflow/special.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "linflow/kernels.hpp"

namespace linflow {

Mat diag_powers(std::size_t m, Scalar omega) {
  if (m == 0) throw InvalidArgument("diag_powers: m must be at least 1");
  Mat d(m, m, omega.imag() != 0.0 ? Field::complex : Field::real);
  Scalar p = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    d(i, i) = p;
    p *= omega;
  }
  return d;
}

Mat nilpotent_block(std::size_t m) {
  if (m == 0) throw InvalidArgument("nilpotent_block: m must be at least 1");
  Mat j(m, m);
  for (std::size_t i = 0; i + 1 < m; ++i) j(i, i + 1) = 1.0;
  return j;
}

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// 1/Γ(z) for Re z ≥ 1/2, evaluated through logarithms to avoid overflow.
Scalar recip_gamma_right(Scalar z) {
  z -= 1.0;
  Scalar x = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  const Scalar t = z + kLanczosG + 0.5;
  const Scalar log_gamma =
      0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(x);
  Scalar r = std::exp(-log_gamma);
  if (z.imag() == 0.0) r = r.real();
  return r;
}

}  // namespace

Scalar recip_gamma(Scalar z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw NonFiniteInput("recip_gamma: argument is not finite");
  if (std::abs(z.imag()) <= 1e-12 && z.real() <= 0.5) {
    const double k = std::round(z.real());
    if (k <= 0.0 && std::abs(z.real() - k) <= 1e-12) return 0.0;
  }
  // positive integers: exact factorial while it is representable
  if (z.imag() == 0.0 && z.real() >= 1.0 && z.real() <= 23.0 && z.real() == std::floor(z.real())) {
    double f = 1.0;
    for (double k = 2.0; k < z.real(); k += 1.0) f *= k;
    return 1.0 / f;
  }
  if (z.real() >= 0.5) return recip_gamma_right(z);
  // 1/Γ(z) = sin(πz) Γ(1−z) / π
  const Scalar s = z.imag() == 0.0 ? Scalar(std::sin(std::numbers::pi * z.real()))
                                   : std::sin(std::numbers::pi * z);
  return s / (std::numbers::pi * recip_gamma_right(1.0 - z));
}

namespace {

Mat delta_raw(std::size_t m, std::size_t n, Scalar omega) {
  Mat d(m, n, omega.imag() != 0.0 ? Field::complex : Field::real);
  for (std::size_t r = 1; r <= m; ++r)
    for (std::size_t c = 1; c <= n; ++c)
      d(r - 1, c - 1) = recip_gamma(omega + static_cast<double>(c) - static_cast<double>(r) + 1.0);
  return d;
}

Mat diag_raw(std::size_t m, double t) {
  Mat d(m, m);
  double p = 1.0;
  for (std::size_t i = 0; i < m; ++i, p *= t) d(i, i) = p;
  return d;
}

}  // namespace

Mat delta_matrix(const DeltaSpec& spec) {
  if (spec.m == 0 || spec.n == 0) throw InvalidArgument("delta_matrix: m and n must be at least 1");
  if (!std::isfinite(spec.omega.real()) || !std::isfinite(spec.omega.imag()))
    throw NonFiniteInput("delta_matrix: omega is not finite");
  return delta_raw(spec.m, spec.n, spec.omega);
}

Mat exp_block_partition(std::size_t m, std::size_t j, double t) {
  if (j < 1 || j > m) throw InvalidArgument("exp_block_partition: need 1 <= j <= m");
  if (t == 0.0) throw InvalidArgument("exp_block_partition: t must be nonzero");
  if (!std::isfinite(t)) throw NonFiniteInput("exp_block_partition: t is not finite");
  const std::size_t k = m - j;
  const double s = static_cast<double>(k);
  const double jj = static_cast<double>(j);
  const Mat dj = diag_raw(j, t), dji = diag_raw(j, 1.0 / t);
  const Mat dk = diag_raw(k, t), dki = diag_raw(k, 1.0 / t);
  Mat out(m, m);
  out.set_block(0, 0, dji * delta_raw(j, k, 0.0) * dk);
  out.set_block(0, k, std::pow(t, s) * (dji * delta_raw(j, j, s) * dj));
  out.set_block(j, 0, std::pow(t, -jj) * (dki * delta_raw(k, k, -jj) * dk));
  out.set_block(j, k, std::pow(t, s - jj) * (dki * delta_raw(k, j, s - jj) * dj));
  return out;
}

namespace {

struct NuGrid {
  std::vector<double> ts;
  std::vector<Mat> xs;
};

NuGrid nu_grid(std::size_t m, std::size_t refine) {
  if (m == 0) throw InvalidArgument("lower_bound_nu: m must be at least 1");
  if (refine == 0) refine = 1;
  NuGrid g;
  const std::size_t per_decade = 20 * refine;
  g.ts.push_back(0.0);
  for (std::size_t i = 0; i <= 6 * per_decade; ++i) {
    const double mag = std::pow(10.0, -3.0 + static_cast<double>(i) / static_cast<double>(per_decade));
    g.ts.push_back(mag);
    g.ts.push_back(-mag);
  }
  for (std::size_t i = 0; i < m; ++i) {
    Mat e(m, 1);
    e(i, 0) = 1.0;
    g.xs.push_back(e);
  }
  std::mt19937_64 rng(0x5eed + m);
  std::normal_distribution<double> nd;
  while (g.xs.size() < 200 * refine) {
    Mat x(m, 1);
    for (std::size_t i = 0; i < m; ++i) x(i, 0) = nd(rng);
    const double n = x.norm_fro();
    if (n == 0.0) continue;
    x *= Scalar(1.0 / n);
    g.xs.push_back(x);
  }
  return g;
}

// e^{tJ_m} from its finite series.
Mat exp_nilpotent(std::size_t m, double t) {
  Mat e(m, m);
  for (std::size_t r = 0; r < m; ++r) {
    double term = 1.0;
    for (std::size_t c = r; c < m; ++c) {
      e(r, c) = term;
      term *= t / static_cast<double>(c - r + 1);
    }
  }
  return e;
}

double nu_at(const NuGrid& g, std::size_t m, std::size_t i) {
  const double t = g.ts[i];
  const Mat e = exp_nilpotent(m, t);
  const double w = std::sqrt(1.0 + std::pow(t, 2.0 * static_cast<double>(m) - 2.0));
  double best = std::numeric_limits<double>::infinity();
  for (const auto& x : g.xs) best = std::min(best, (e * x).norm_fro() * w);
  return best;
}

}  // namespace

double lower_bound_nu_serial(std::size_t m, std::size_t refine) {
  const NuGrid g = nu_grid(m, refine);
  return kernels::min_over_serial(g.ts.size(), [&](std::size_t i) { return nu_at(g, m, i); });
}

double lower_bound_nu_parallel(std::size_t m, std::size_t refine) {
  const NuGrid g = nu_grid(m, refine);
  return kernels::min_over_parallel(g.ts.size(), [&](std::size_t i) { return nu_at(g, m, i); });
}

double lower_bound_nu(std::size_t m, std::size_t refine) {
  return kernels::max_threads() > 1 ? lower_bound_nu_parallel(m, refine)
                                    : lower_bound_nu_serial(m, refine);
}

}  // namespace linflow
