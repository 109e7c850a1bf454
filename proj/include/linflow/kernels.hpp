#pragma once

// Data-parallel kernels. Every parallel routine has a serial twin with the
// same arithmetic order per output element, so results agree bit for bit;
// the serial versions are the reference the tests and benchmarks compare
// against.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>

namespace linflow::kernels {

using cplx = std::complex<double>;

/// c (m×n) = a (m×k) · b (k×n), all row-major.
void matmul_serial(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> c,
                   std::size_t m, std::size_t k, std::size_t n);
void matmul_parallel(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> c,
                     std::size_t m, std::size_t k, std::size_t n);

/// Dispatches to the parallel kernel once m·k·n crosses a work threshold.
void matmul(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> c, std::size_t m,
            std::size_t k, std::size_t n);

inline constexpr std::size_t kParallelMatmulWork = 64 * 64 * 64;

/// min over i in [0, count) of f(i).
double min_over_serial(std::size_t count, const std::function<double(std::size_t)>& f);
double min_over_parallel(std::size_t count, const std::function<double(std::size_t)>& f);

/// Runs body(i) for i in [0, count); bodies must write to disjoint slots.
void for_each_serial(std::size_t count, const std::function<void(std::size_t)>& body);
void for_each_parallel(std::size_t count, const std::function<void(std::size_t)>& body);

int max_threads();

}  // namespace linflow::kernels
