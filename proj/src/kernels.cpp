#include "linflow/kernels.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace linflow::kernels {

namespace {

inline void matmul_row(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> c,
                       std::size_t i, std::size_t k, std::size_t n) {
  cplx* ci = c.data() + i * n;
  std::fill(ci, ci + n, cplx{});
  const cplx* ai = a.data() + i * k;
  for (std::size_t p = 0; p < k; ++p) {
    const cplx aip = ai[p];
    if (aip == cplx{}) continue;
    const cplx* bp = b.data() + p * n;
    for (std::size_t j = 0; j < n; ++j) ci[j] += aip * bp[j];
  }
}

}  // namespace

void matmul_serial(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> c,
                   std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) matmul_row(a, b, c, i, k, n);
}

void matmul_parallel(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> c,
                     std::size_t m, std::size_t k, std::size_t n) {
  const auto rows = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i)
    matmul_row(a, b, c, static_cast<std::size_t>(i), k, n);
}

void matmul(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> c, std::size_t m,
            std::size_t k, std::size_t n) {
  if (m * k * n >= kParallelMatmulWork && max_threads() > 1)
    matmul_parallel(a, b, c, m, k, n);
  else
    matmul_serial(a, b, c, m, k, n);
}

double min_over_serial(std::size_t count, const std::function<double(std::size_t)>& f) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) best = std::min(best, f(i));
  return best;
}

double min_over_parallel(std::size_t count, const std::function<double(std::size_t)>& f) {
  double best = std::numeric_limits<double>::infinity();
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for reduction(min : best) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) best = std::min(best, f(static_cast<std::size_t>(i)));
  return best;
}

void for_each_serial(std::size_t count, const std::function<void(std::size_t)>& body) {
  for (std::size_t i = 0; i < count; ++i) body(i);
}

void for_each_parallel(std::size_t count, const std::function<void(std::size_t)>& body) {
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace linflow::kernels
