#include "linflow/witness.hpp"

#include <cmath>
#include <sstream>

#include "linflow/special.hpp"

namespace linflow {

ResidualReport verify_conjugacy(const Mat& a, const Mat& b, const Mat& h, double alpha,
                                const Tolerance& tol) {
  tol.validate();
  require_square(a, "first generator");
  require_square(b, "second generator");
  if (h.rows() != b.rows() || h.cols() != a.rows())
    throw DimensionError("verify_conjugacy: conjugator shape does not fit the generators");
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw InvalidArgument("verify_conjugacy: alpha must be positive");
  if (h.rows() != h.cols()) throw DimensionError("verify_conjugacy: conjugator must be square");
  if (h.rows() > 0 && !std::isfinite(condition_1(h, tol)))
    throw SingularMatrix("verify_conjugacy: conjugator is singular", rank(h, tol));
  ResidualReport r;
  r.times = {-20.0, -5.0, -1.0, -0.1, 0.1, 1.0, 5.0, 20.0};
  r.grid = "t in {+-0.1, +-1, +-5, +-20}";
  r.bound = 1e2 * tol.residual_abs;
  const double hn = h.norm_fro();
  for (double t : r.times) {
    const Mat ea = matexp(a, t), eb = matexp(b, alpha * t);
    const double flow = std::max({1.0, ea.norm_fro(), eb.norm_fro()});
    const double res = (h * ea - eb * h).norm_fro() / ((1.0 + hn) * flow);
    if (!(res <= r.max_residual)) r.max_residual = std::isnan(res) ? INFINITY : std::max(res, r.max_residual);
  }
  r.pass = r.max_residual <= r.bound;
  return r;
}

namespace {

Mat dpow(std::size_t m, double t) { return diag_powers(m, t); }
Mat dinv(std::size_t m, double t) { return diag_powers(m, 1.0 / t); }
Mat delta(std::size_t m, std::size_t n, double w) { return delta_matrix({m, n, w}); }

Mat stack(const Mat& top, const Mat& bottom) {
  Mat out(top.rows() + bottom.rows(), 1, join(top.field(), bottom.field()));
  out.set_block(0, 0, top);
  out.set_block(top.rows(), 0, bottom);
  return out;
}

void check_vector(const Mat& v, std::size_t len, const char* what) {
  if (v.cols() != 1 || v.rows() != len) {
    std::ostringstream os;
    os << what << ": expected a column vector of length " << len;
    throw DimensionError(os.str());
  }
}

}  // namespace

WitnessPair core_witness(std::size_t m, const Mat& v, double t) {
  if (m == 0) throw InvalidArgument("core_witness: m must be at least 1");
  if (t == 0.0 || !std::isfinite(t)) throw InvalidArgument("core_witness: t must be finite and nonzero");
  check_finite(v, "core_witness vector");
  const std::size_t d = m / 2;
  const Tolerance tol;
  if (m == 1) {
    // J_1 = 0: the flow is the identity; only the core witness exists.
    check_vector(v, 1, "core_witness");
    return {v, v};
  }
  try {
    if (m % 2 == 0) {
      check_vector(v, d, "core_witness");
      const Mat d0 = delta(d, d, 0.0), dd = delta(d, d, static_cast<double>(d));
      const Mat u = solve(dd, d0 * (dpow(d, t) * v), tol);
      const Mat bottom = -std::pow(t, -static_cast<double>(d)) * (dinv(d, t) * u);
      const Mat img = -std::pow(t, -static_cast<double>(d)) * (dinv(d, t) * (d0 * u));
      return {stack(v, bottom), stack(Mat(d, 1, v.field()), img)};
    }
    if (v.rows() == d) {
      check_vector(v, d, "core_witness");
      const Mat u = solve(delta(d + 1, d + 1, static_cast<double>(d)),
                          delta(d + 1, d, 0.0) * (dpow(d, t) * v), tol);
      const Mat bottom = -std::pow(t, -static_cast<double>(d)) * (dinv(d + 1, t) * u);
      const Mat img =
          -std::pow(t, -static_cast<double>(d + 1)) * (dinv(d, t) * (delta(d, d + 1, -1.0) * u));
      return {stack(v, bottom), stack(Mat(d + 1, 1, v.field()), img)};
    }
    check_vector(v, d + 1, "core_witness");
    const Mat dw = dpow(d + 1, t) * v;
    const Mat u = solve(delta(d, d, static_cast<double>(d + 1)), delta(d, d + 1, 0.0) * dw, tol);
    const Mat bottom = -std::pow(t, -static_cast<double>(d + 1)) * (dinv(d, t) * u);
    const Mat inner = delta(d + 1, d + 1, -static_cast<double>(d)) * dw - delta(d + 1, d, 1.0) * u;
    const Mat img = std::pow(t, -static_cast<double>(d)) * (dinv(d + 1, t) * inner);
    return {stack(v, bottom), stack(Mat(d, 1, v.field()), img)};
  } catch (const SingularMatrix& e) {
    throw InternalConsistencyError(std::string("core_witness: ") + e.what());
  }
}

WitnessPair core_witness_pair(std::size_t m, double freq, const Mat& v, double t) {
  if (v.cols() != 1 || v.rows() % 2 != 0)
    throw DimensionError("core_witness_pair: vector length must be even");
  if (!std::isfinite(freq)) throw NonFiniteInput("core_witness_pair: frequency is not finite");
  const std::size_t k = v.rows() / 2;
  const WitnessPair re = core_witness(m, v.block(0, 0, k, 1), t);
  const WitnessPair im = core_witness(m, v.block(k, 0, k, 1), t);
  // e^{tA} = R(freq·t) ⊗ e^{tJ_m} for the real block [[J, −b],[b, J]]
  const double c = std::cos(freq * t), s = std::sin(freq * t);
  const Mat img_re = c * re.image - s * im.image;
  const Mat img_im = s * re.image + c * im.image;
  return {stack(re.x, im.x), stack(img_re, img_im)};
}

bool orbit_bounded(const Mat& a, const Mat& x, double horizon, std::size_t samples, double growth) {
  require_square(a, "generator");
  check_finite(a, "generator");
  check_finite(x, "initial point");
  if (x.rows() != a.rows() || x.cols() != 1)
    throw DimensionError("orbit_bounded: point must be a column vector matching the generator");
  if (samples < 2) samples = 2;
  const double limit = growth * (1.0 + x.norm_fro());
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = -horizon + 2.0 * horizon * static_cast<double>(i) / static_cast<double>(samples - 1);
    const double n = (matexp(a, t) * x).norm_fro();
    if (!(n <= limit)) return false;
  }
  return true;
}

}  // namespace linflow
