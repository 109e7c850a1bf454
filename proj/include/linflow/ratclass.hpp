#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "linflow/linalg.hpp"

namespace linflow {

/// Reduced fraction p/q, q > 0.
struct Ratio {
  std::int64_t p = 0;
  std::int64_t q = 1;
  double value() const { return static_cast<double>(p) / static_cast<double>(q); }
};

/// Best approximation p/q of x with 1 ≤ q ≤ qmax, from the continued
/// fraction convergents and semiconvergents. `error` = |x − p/q|.
struct BestRational {
  Ratio ratio;
  double error = 0.0;
};
BestRational best_rational(double x, std::int64_t qmax);

/// Frequencies rationally dependent on the generator (its smallest member).
struct RationalClass {
  std::vector<double> members;          // ascending
  double generator = 0.0;               // members.front()
  std::vector<Ratio> ratios;            // members[i] ≈ ratios[i] · generator
  double period = 0.0;                  // (2π / generator) · lcm(q_i)
  std::vector<std::size_t> member_dims; // eigenspace dimension of i·members[i]
  double margin = 0.0;                  // largest accepted |r − p/q| / r
};

struct RationalPartition {
  std::size_t fixed_dim = 0;            // dim ker A
  std::vector<RationalClass> classes;   // by largest member, descending
};

/// Groups the positive imaginary parts of a bounded generator into rational
/// classes: a frequency s joins the class with generator g when the best
/// approximation p/q of s/g with q ≤ qmax satisfies |s/g − p/q| ≤
/// tol.eig_cluster_rel · s/g. Complex input is realified. Throws NotBounded
/// when an eigenvalue leaves the imaginary axis or a block has size > 1.
RationalPartition rational_partition(const Mat& a, const Tolerance& tol, std::int64_t qmax = 64);
/// Same with an explicit clustering scale (for restrictions of a larger
/// generator).
RationalPartition rational_partition(const Mat& a, const Tolerance& tol, std::int64_t qmax,
                                     double scale);

/// (2π / generator) · lcm of the ratio denominators; exact integer lcm,
/// OverflowError beyond 2⁶³.
double class_period(const RationalClass& cls);

/// dim Per_t Φ = dim ker A + Σ 2·dim over members s with t·s/(2π) ∈ ℕ.
std::size_t periodic_dim(const Mat& a, double t, const Tolerance& tol);

/// Orthonormal real basis of the sum of the eigenspaces of ±i·s over the
/// members s of `cls`.
Mat class_subspace(const Mat& a, const RationalClass& cls, const Tolerance& tol);

}  // namespace linflow
