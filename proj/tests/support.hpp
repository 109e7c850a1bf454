#pragma once

// Generators shared by the unit and acceptance tests. Everything is seeded
// so failures reproduce.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "linflow/linalg.hpp"
#include "linflow/spectral.hpp"

namespace testing_support {

using linflow::Field;
using linflow::Mat;
using linflow::Scalar;

inline Mat gaussian(std::mt19937_64& rng, std::size_t r, std::size_t c, Field f = Field::real) {
  std::normal_distribution<double> nd;
  Mat m(r, c, f);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      m(i, j) = f == Field::real ? Scalar(nd(rng)) : Scalar(nd(rng), nd(rng));
  return m;
}

// Orthogonal/unitary factor of a Gaussian matrix via modified Gram-Schmidt.
inline Mat random_orthogonal(std::mt19937_64& rng, std::size_t n, Field f = Field::real) {
  Mat g = gaussian(rng, n, n, f);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      Scalar dot{};
      for (std::size_t i = 0; i < n; ++i) dot += std::conj(g(i, k)) * g(i, j);
      for (std::size_t i = 0; i < n; ++i) g(i, j) -= dot * g(i, k);
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) nrm += std::norm(g(i, j));
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < n; ++i) g(i, j) /= nrm;
  }
  return g;
}

// S = Q1 diag(σ) Q2 with singular values log-spaced in [1, max_cond].
inline Mat random_conditioned(std::mt19937_64& rng, std::size_t n, double max_cond,
                              Field f = Field::real) {
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  const double cond = std::pow(max_cond, ud(rng));
  Mat d(n, n, f);
  for (std::size_t i = 0; i < n; ++i)
    d(i, i) = n == 1 ? 1.0 : std::pow(cond, static_cast<double>(i) / static_cast<double>(n - 1));
  return random_orthogonal(rng, n, f) * d * random_orthogonal(rng, n, f);
}

// Exact inverse of random_conditioned is not available, so callers use
// linflow::inverse; conditioning keeps that accurate.
inline Mat similar(const Mat& j, const Mat& s) {
  return s * j * linflow::inverse(s, linflow::Tolerance{});
}

struct PlantedBlock {
  Scalar eigenvalue;  // for real pairs: the member with positive imaginary part
  std::size_t size;   // chain length
};

struct Planted {
  std::vector<PlantedBlock> blocks;
  Mat form;  // real Jordan form
  std::size_t dim() const { return form.rows(); }

  // Count of chains of length n at eigenvalue λ.
  std::size_t count(Scalar lambda, std::size_t n) const {
    return static_cast<std::size_t>(std::count_if(blocks.begin(), blocks.end(), [&](const PlantedBlock& b) {
      return b.eigenvalue == lambda && b.size == n;
    }));
  }
};

inline Planted assemble(const std::vector<PlantedBlock>& blocks) {
  Planted p;
  p.blocks = blocks;
  std::vector<Mat> parts;
  for (const auto& b : blocks) parts.push_back(linflow::real_jordan_block(b.eigenvalue, b.size));
  p.form = linflow::block_diag(parts);
  return p;
}

// Random real Jordan structure of dimension ≤ max_dim mixing zero blocks,
// imaginary pairs and hyperbolic blocks.
inline Planted random_structure(std::mt19937_64& rng, std::size_t max_dim) {
  static const double freqs[] = {1.0, 1.7, 2.5};
  static const double reals[] = {-2.0, -0.5, 0.75, 1.5};
  std::uniform_int_distribution<int> kind(0, 3);
  std::vector<PlantedBlock> blocks;
  std::size_t dim = 0;
  std::uniform_int_distribution<std::size_t> target_d(1, max_dim);
  const std::size_t target = target_d(rng);
  while (dim < target) {
    const std::size_t room = max_dim - dim;
    const int k = kind(rng);
    if (k == 0 || k == 1) {
      std::uniform_int_distribution<std::size_t> sz(1, std::min<std::size_t>(room, 5));
      const std::size_t m = sz(rng);
      blocks.push_back({0.0, m});
      dim += m;
    } else if (k == 2 && room >= 2) {
      std::uniform_int_distribution<std::size_t> sz(1, std::min<std::size_t>(room / 2, 3));
      std::uniform_int_distribution<int> fi(0, 2);
      const std::size_t m = sz(rng);
      blocks.push_back({Scalar(0.0, freqs[fi(rng)]), m});
      dim += 2 * m;
    } else {
      std::uniform_int_distribution<int> ri(0, 3);
      std::uniform_int_distribution<std::size_t> sz(1, std::min<std::size_t>(room, 2));
      const double re = reals[ri(rng)];
      if (room >= 2 && kind(rng) == 0) {
        blocks.push_back({Scalar(re, 1.3), 1});
        dim += 2;
      } else {
        const std::size_t m = sz(rng);
        blocks.push_back({re, m});
        dim += m;
      }
    }
  }
  return assemble(blocks);
}

}  // namespace testing_support
