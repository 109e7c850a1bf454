#include "linflow/ratclass.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "linflow/equiv.hpp"
#include "linflow/spectral.hpp"

namespace linflow {

BestRational best_rational(double x, std::int64_t qmax) {
  if (!std::isfinite(x)) throw NonFiniteInput("best_rational: x is not finite");
  if (qmax < 1) throw InvalidArgument("best_rational: qmax must be at least 1");
  const double limit = 9.2e18;
  // convergents h/k with h_{-1}/k_{-1} = 1/0, h_{-2}/k_{-2} = 0/1
  long double hm2 = 0, km2 = 1, hm1 = 1, km1 = 0;
  long double rem = x;
  BestRational best{{0, 1}, std::abs(x)};
  auto consider = [&](long double h, long double k) {
    if (k < 1 || k > qmax || std::abs(h) > limit) return;
    const double err = std::abs(x - static_cast<double>(h / k));
    if (err < best.error || (err == best.error && k < best.ratio.q)) {
      best.ratio = {static_cast<std::int64_t>(h), static_cast<std::int64_t>(k)};
      best.error = err;
    }
  };
  for (int iter = 0; iter < 64; ++iter) {
    const long double a = std::floor(rem);
    const long double h = a * hm1 + hm2, k = a * km1 + km2;
    if (std::abs(h) > limit) throw OverflowError("best_rational: numerator exceeds 2^63");
    if (k > qmax) {
      // semiconvergent (hm2 + j hm1)/(km2 + j km1) with the largest j allowed
      const long double j = std::floor((qmax - km2) / km1);
      if (j >= 1) consider(hm2 + j * hm1, km2 + j * km1);
      break;
    }
    consider(h, k);
    hm2 = hm1;
    km2 = km1;
    hm1 = h;
    km1 = k;
    const long double frac = rem - a;
    if (frac == 0.0L || best.error == 0.0) break;
    rem = 1.0L / frac;
  }
  const std::int64_t g = std::gcd(best.ratio.p, best.ratio.q);
  if (g > 1) best.ratio = {best.ratio.p / g, best.ratio.q / g};
  return best;
}

double class_period(const RationalClass& cls) {
  if (!(cls.generator > 0.0)) throw InvalidArgument("class_period: generator must be positive");
  std::int64_t l = 1;
  for (const auto& r : cls.ratios) {
    const std::int64_t g = std::gcd(l, r.q);
    __int128 next = static_cast<__int128>(l / g) * r.q;
    if (next > static_cast<__int128>(std::numeric_limits<std::int64_t>::max()))
      throw OverflowError("class_period: lcm of denominators exceeds 2^63");
    l = static_cast<std::int64_t>(next);
  }
  return 2.0 * std::numbers::pi / cls.generator * static_cast<double>(l);
}

namespace {

struct BoundedSpectrum {
  std::size_t fixed_dim = 0;
  std::vector<double> freqs;  // ascending positive frequencies
  std::vector<std::size_t> dims;
};

BoundedSpectrum bounded_spectrum(const Mat& r, const Tolerance& tol, double scale = -1.0) {
  BoundedSpectrum out;
  for (const auto& c : eigen_clusters(r, tol, scale < 0.0 ? default_scale(r) : scale)) {
    if (c.value.real() != 0.0) {
      std::ostringstream os;
      os << "generator is not bounded: eigenvalue " << c.value.real() << (c.value.imag() < 0 ? "" : "+")
         << c.value.imag() << "i is off the imaginary axis";
      throw NotBounded(os.str());
    }
    if (c.weyr.size() > 1) {
      std::ostringstream os;
      os << "generator is not bounded: eigenvalue " << c.value.imag()
         << "i has a Jordan block of size " << c.weyr.size();
      throw NotBounded(os.str());
    }
    if (c.value.imag() == 0.0) {
      out.fixed_dim += c.alg_mult;
    } else if (c.value.imag() > 0.0) {
      out.freqs.push_back(c.value.imag());
      out.dims.push_back(c.alg_mult);
    }
  }
  std::vector<std::size_t> order(out.freqs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return out.freqs[i] < out.freqs[j]; });
  BoundedSpectrum sorted{out.fixed_dim, {}, {}};
  for (auto i : order) {
    sorted.freqs.push_back(out.freqs[i]);
    sorted.dims.push_back(out.dims[i]);
  }
  return sorted;
}

Mat real_input(const Mat& a) {
  require_square(a, "generator");
  check_finite(a, "generator");
  return a.field() == Field::complex ? realify(a) : a;
}

}  // namespace

RationalPartition rational_partition(const Mat& a, const Tolerance& tol, std::int64_t qmax) {
  return rational_partition(a, tol, qmax, -1.0);
}

RationalPartition rational_partition(const Mat& a, const Tolerance& tol, std::int64_t qmax,
                                     double scale) {
  tol.validate();
  const Mat r = real_input(a);
  const BoundedSpectrum bs = bounded_spectrum(r, tol, scale);
  RationalPartition part;
  part.fixed_dim = bs.fixed_dim;
  for (std::size_t i = 0; i < bs.freqs.size(); ++i) {
    const double s = bs.freqs[i];
    bool placed = false;
    for (auto& cls : part.classes) {
      const double ratio = s / cls.generator;
      const BestRational br = best_rational(ratio, qmax);
      const double rel = br.error / ratio;
      if (rel <= tol.eig_cluster_rel) {
        cls.members.push_back(s);
        cls.ratios.push_back(br.ratio);
        cls.member_dims.push_back(bs.dims[i]);
        cls.margin = std::max(cls.margin, rel);
        placed = true;
        break;
      }
    }
    if (!placed) {
      RationalClass cls;
      cls.members = {s};
      cls.generator = s;
      cls.ratios = {{1, 1}};
      cls.member_dims = {bs.dims[i]};
      part.classes.push_back(std::move(cls));
    }
  }
  for (auto& cls : part.classes) cls.period = class_period(cls);
  std::sort(part.classes.begin(), part.classes.end(), [](const auto& x, const auto& y) {
    return x.members.back() > y.members.back();
  });
  return part;
}

std::size_t periodic_dim(const Mat& a, double t, const Tolerance& tol) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("periodic_dim: t must be positive");
  const Mat r = real_input(a);
  const BoundedSpectrum bs = bounded_spectrum(r, tol);
  std::size_t d = bs.fixed_dim;
  for (std::size_t i = 0; i < bs.freqs.size(); ++i) {
    const double k = t * bs.freqs[i] / (2.0 * std::numbers::pi);
    if (std::abs(k - std::round(k)) <= tol.eig_cluster_rel * std::max(1.0, k) && std::round(k) >= 1.0)
      d += 2 * bs.dims[i];
  }
  return d;
}

Mat class_subspace(const Mat& a, const RationalClass& cls, const Tolerance& tol) {
  const Mat r = real_input(a);
  const double scale = default_scale(r);
  const JordanDecomposition jd = jordan_decomposition(r, tol, scale);
  const double match = spectral_threshold(tol, scale);
  std::vector<Mat> cols;
  for (const auto& b : jd.blocks) {
    if (b.eigenvalue.real() != 0.0 || b.eigenvalue.imag() <= 0.0) continue;
    const bool member = std::any_of(cls.members.begin(), cls.members.end(), [&](double s) {
      return std::abs(s - b.eigenvalue.imag()) <= match;
    });
    if (!member) continue;
    for (std::size_t j = 0; j < b.width(); ++j) cols.push_back(jd.basis.col(b.offset + j));
  }
  if (cols.empty()) return Mat(r.rows(), 0);
  return pivoted_qr(hstack(cols)).q.block(0, 0, r.rows(), cols.size());
}

}  // namespace linflow
