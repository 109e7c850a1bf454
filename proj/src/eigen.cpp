// QR-iteration eigenvalue solvers behind raw_eigenvalues().

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "linflow/spectral.hpp"

namespace linflow {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Parlett–Reinsch diagonal balancing with powers of two (exact in floating
// point). Permutations are skipped; eigenvalues are unchanged either way.
void balance(Mat& h) {
  const std::size_t n = h.rows();
  constexpr double radix = 2.0;
  bool done = false;
  int sweeps = 0;
  while (!done && sweeps++ < 100) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(h(j, i));
        r += std::abs(h(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix, f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        for (std::size_t j = 0; j < n; ++j) h(i, j) /= f;
        for (std::size_t j = 0; j < n; ++j) h(j, i) *= f;
      }
    }
  }
}

// Householder reduction to upper Hessenberg form, in place.
void hessenberg(Mat& h) {
  const std::size_t n = h.rows();
  if (n < 3) return;
  std::vector<Scalar> v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double normx2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) normx2 += std::norm(h(i, k));
    const double normx = std::sqrt(normx2);
    if (normx == 0.0) continue;
    const Scalar x0 = h(k + 1, k);
    const Scalar phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Scalar(1.0);
    const Scalar alpha = -phase * normx;
    double vn2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      v[i] = h(i, k);
      if (i == k + 1) v[i] -= alpha;
      vn2 += std::norm(v[i]);
    }
    const double vn = std::sqrt(vn2);
    if (vn == 0.0) continue;
    for (std::size_t i = k + 1; i < n; ++i) v[i] /= vn;
    // H ← (I − 2vvᴴ) H
    for (std::size_t j = 0; j < n; ++j) {
      Scalar dot{};
      for (std::size_t i = k + 1; i < n; ++i) dot += std::conj(v[i]) * h(i, j);
      for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= 2.0 * v[i] * dot;
    }
    // H ← H (I − 2vvᴴ)
    for (std::size_t i = 0; i < n; ++i) {
      Scalar dot{};
      for (std::size_t j = k + 1; j < n; ++j) dot += h(i, j) * v[j];
      for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= 2.0 * dot * std::conj(v[j]);
    }
    h(k + 1, k) = alpha;
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

// Eigenvalues of a real upper Hessenberg matrix by the Francis double-shift
// QR iteration (the eigenvalue-only part of EISPACK hqr).
std::size_t hqr(std::vector<double>& hv, int nn, std::vector<double>& wr, std::vector<double>& wi) {
  auto H = [&](int i, int j) -> double& { return hv[static_cast<std::size_t>(i * nn + j)]; };
  int n = nn - 1;
  const int low = 0;
  double exshift = 0.0;
  double p = 0, q = 0, r = 0, s = 0, z = 0, t, w, x, y;

  double norm = 0.0;
  for (int i = 0; i < nn; ++i)
    for (int j = std::max(i - 1, 0); j < nn; ++j) norm += std::abs(H(i, j));

  int iter = 0;
  std::size_t total = 0;
  const std::size_t max_total = 60 * static_cast<std::size_t>(std::max(nn, 1));
  while (n >= low) {
    int l = n;
    while (l > low) {
      s = std::abs(H(l - 1, l - 1)) + std::abs(H(l, l));
      if (s == 0.0) s = norm;
      // Normwise backstop: nearly normal inputs can have a vanishing local
      // diagonal next to a rounding-level subdiagonal.
      if (std::abs(H(l, l - 1)) < kEps * s || std::abs(H(l, l - 1)) <= kEps * norm) break;
      --l;
    }
    if (l == n) {
      wr[n] = H(n, n) + exshift;
      wi[n] = 0.0;
      --n;
      iter = 0;
    } else if (l == n - 1) {
      w = H(n, n - 1) * H(n - 1, n);
      p = (H(n - 1, n - 1) - H(n, n)) / 2.0;
      q = p * p + w;
      z = std::sqrt(std::abs(q));
      x = H(n, n) + exshift;
      if (q >= 0) {
        z = p >= 0 ? p + z : p - z;
        wr[n - 1] = x + z;
        wr[n] = wr[n - 1];
        if (z != 0.0) wr[n] = x - w / z;
        wi[n - 1] = 0.0;
        wi[n] = 0.0;
      } else {
        wr[n - 1] = x + p;
        wr[n] = x + p;
        wi[n - 1] = z;
        wi[n] = -z;
      }
      n -= 2;
      iter = 0;
    } else {
      x = H(n, n);
      y = 0.0;
      w = 0.0;
      if (l < n) {
        y = H(n - 1, n - 1);
        w = H(n, n - 1) * H(n - 1, n);
      }
      // Exceptional shifts every 10 sweeps without deflation, alternating
      // between the bottom and the top of the active window. Nearly normal
      // inputs (orthogonal restrictions of rotation blocks) otherwise cycle.
      if (iter > 0 && iter % 10 == 0) {
        exshift += x;
        for (int i = low; i <= n; ++i) H(i, i) -= x;
        s = (iter / 10) % 2 ? std::abs(H(n, n - 1)) + std::abs(H(n - 1, n - 2))
                            : std::abs(H(l + 1, l)) + std::abs(H(l + 2, l + 1));
        if (s == 0.0) s = norm;
        x = y = 0.75 * s;
        w = -0.4375 * s * s;
      }
      ++iter;
      if (++total > max_total) throw ConvergenceError("real QR iteration did not converge", total);

      int m = n - 2;
      while (m >= l) {
        z = H(m, m);
        r = x - z;
        s = y - z;
        p = (r * s - w) / H(m + 1, m) + H(m, m + 1);
        q = H(m + 1, m + 1) - z - r - s;
        r = H(m + 2, m + 1);
        s = std::abs(p) + std::abs(q) + std::abs(r);
        p /= s;
        q /= s;
        r /= s;
        if (m == l) break;
        if (std::abs(H(m, m - 1)) * (std::abs(q) + std::abs(r)) <
            kEps * (std::abs(p) * (std::abs(H(m - 1, m - 1)) + std::abs(z) + std::abs(H(m + 1, m + 1)))))
          break;
        --m;
      }
      for (int i = m + 2; i <= n; ++i) {
        H(i, i - 2) = 0.0;
        if (i > m + 2) H(i, i - 3) = 0.0;
      }
      for (int k = m; k <= n - 1; ++k) {
        const bool notlast = (k != n - 1);
        if (k != m) {
          p = H(k, k - 1);
          q = H(k + 1, k - 1);
          r = notlast ? H(k + 2, k - 1) : 0.0;
          x = std::abs(p) + std::abs(q) + std::abs(r);
          if (x != 0.0) {
            p /= x;
            q /= x;
            r /= x;
          }
        }
        if (x == 0.0) break;
        s = std::sqrt(p * p + q * q + r * r);
        if (p < 0) s = -s;
        if (s != 0) {
          if (k != m)
            H(k, k - 1) = -s * x;
          else if (l != m)
            H(k, k - 1) = -H(k, k - 1);
          p += s;
          x = p / s;
          y = q / s;
          z = r / s;
          q /= p;
          r /= p;
          for (int j = k; j < nn; ++j) {
            p = H(k, j) + q * H(k + 1, j);
            if (notlast) {
              p += r * H(k + 2, j);
              H(k + 2, j) -= p * z;
            }
            H(k, j) -= p * x;
            H(k + 1, j) -= p * y;
          }
          for (int i = 0; i <= std::min(n, k + 3); ++i) {
            p = x * H(i, k) + y * H(i, k + 1);
            if (notlast) {
              p += z * H(i, k + 2);
              H(i, k + 2) -= p * r;
            }
            H(i, k) -= p;
            H(i, k + 1) -= p * q;
          }
        }
      }
    }
  }
  (void)t;
  return total;
}

// Single-shift complex QR on an upper Hessenberg matrix, eigenvalues only.
std::size_t complex_qr(Mat& h, std::vector<Scalar>& out) {
  const std::size_t n = h.rows();
  out.assign(n, Scalar{});
  if (n == 0) return 0;
  double norm = 0.0;
  for (const auto& v : h.data()) norm += std::abs(v);
  std::size_t total = 0;
  const std::size_t max_total = 60 * n;
  std::size_t iter = 0;
  std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(n) - 1;
  std::vector<Scalar> cs(n), sn(n);
  while (hi >= 0) {
    std::ptrdiff_t l = hi;
    while (l > 0) {
      double s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
      if (s == 0.0) s = norm;
      if (std::abs(h(l, l - 1)) < kEps * s || std::abs(h(l, l - 1)) <= kEps * norm) {
        h(l, l - 1) = 0.0;
        break;
      }
      --l;
    }
    if (l == hi) {
      out[static_cast<std::size_t>(hi)] = h(hi, hi);
      --hi;
      iter = 0;
      continue;
    }
    if (++total > max_total) throw ConvergenceError("complex QR iteration did not converge", total);
    ++iter;

    Scalar mu;
    if (iter % 10 == 0) {
      mu = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1));
    } else {
      const Scalar a = h(hi - 1, hi - 1), b = h(hi - 1, hi), c = h(hi, hi - 1), d = h(hi, hi);
      const Scalar half = 0.5 * (a - d);
      const Scalar disc = std::sqrt(half * half + b * c);
      const Scalar m1 = 0.5 * (a + d) + disc, m2 = 0.5 * (a + d) - disc;
      mu = std::abs(m1 - d) < std::abs(m2 - d) ? m1 : m2;
    }
    const auto ul = static_cast<std::size_t>(l), uh = static_cast<std::size_t>(hi);
    for (std::size_t i = ul; i <= uh; ++i) h(i, i) -= mu;
    for (std::size_t k = ul; k < uh; ++k) {
      const Scalar x = h(k, k), y = h(k + 1, k);
      const double r = std::hypot(std::abs(x), std::abs(y));
      if (r == 0.0) {
        cs[k] = 1.0;
        sn[k] = 0.0;
        continue;
      }
      cs[k] = x / r;
      sn[k] = y / r;
      for (std::size_t j = k; j <= uh; ++j) {
        const Scalar hk = h(k, j), hk1 = h(k + 1, j);
        h(k, j) = std::conj(cs[k]) * hk + std::conj(sn[k]) * hk1;
        h(k + 1, j) = -sn[k] * hk + cs[k] * hk1;
      }
    }
    for (std::size_t k = ul; k < uh; ++k) {
      const std::size_t last = std::min(k + 2, uh);
      for (std::size_t i = ul; i <= last; ++i) {
        const Scalar hk = h(i, k), hk1 = h(i, k + 1);
        h(i, k) = cs[k] * hk + sn[k] * hk1;
        h(i, k + 1) = -std::conj(sn[k]) * hk + std::conj(cs[k]) * hk1;
      }
    }
    for (std::size_t i = ul; i <= uh; ++i) h(i, i) += mu;
  }
  return total;
}

}  // namespace

// Pairs each upper-half value with its nearest unused lower-half conjugate
// and writes them as exact conjugates, pair members adjacent. Values that
// find no partner are treated as real.
static void pair_conjugates(const std::vector<Scalar>& v, std::vector<double>& wr,
                     std::vector<double>& wi) {
  const std::size_t n = v.size();
  double scale = 0.0;
  for (const auto& z : v) scale = std::max(scale, std::abs(z));
  const double tol = 1e-8 * std::max(scale, 1.0);
  std::vector<char> used(n, 0);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (used[i] || v[i].imag() <= tol) continue;
    std::size_t best = n;
    double bd = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j] || j == i || v[j].imag() >= -tol) continue;
      const double d = std::abs(v[j] - std::conj(v[i]));
      if (best == n || d < bd) { best = j; bd = d; }
    }
    if (best == n) continue;
    used[i] = used[best] = 1;
    const double re = 0.5 * (v[i].real() + v[best].real());
    const double im = 0.5 * (v[i].imag() - v[best].imag());
    wr[k] = re; wi[k] = im; ++k;
    wr[k] = re; wi[k] = -im; ++k;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (used[i]) continue;
    wr[k] = v[i].real(); wi[k] = 0.0; ++k;
  }
}

RawSpectrum raw_eigenvalues(const Mat& a) {
  check_finite(a, "eigenvalue input");
  require_square(a, "eigenvalue input");
  const std::size_t n = a.rows();
  RawSpectrum out;
  out.values.resize(n);
  out.conj_of.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.conj_of[i] = i;
  if (n == 0) return out;

  Mat h = a;
  balance(h);
  hessenberg(h);
  if (a.field() == Field::real) {
    std::vector<double> hv(n * n), wr(n), wi(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) hv[i * n + j] = h(i, j).real();
    try {
      out.iterations = hqr(hv, static_cast<int>(n), wr, wi);
    } catch (const ConvergenceError&) {
      // double shift can stall on repeated conjugate pairs; single shifts
      // break the symmetry, then the pairs are rebuilt
      Mat hc = h.as_complex();
      std::vector<Scalar> v;
      out.iterations = complex_qr(hc, v);
      pair_conjugates(v, wr, wi);
    }
    for (std::size_t i = 0; i < n; ++i) out.values[i] = Scalar(wr[i], wi[i]);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (wi[i] > 0.0 && wi[i + 1] == -wi[i] && wr[i] == wr[i + 1]) {
        out.conj_of[i] = i + 1;
        out.conj_of[i + 1] = i;
        ++i;
      }
    }
  } else {
    out.iterations = complex_qr(h, out.values);
  }
  return out;
}

}  // namespace linflow
