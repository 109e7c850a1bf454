#include "linflow/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace linflow {

double default_scale(const Mat& a) { return a.norm_fro(); }

double spectral_threshold(const Tolerance& tol, double scale) {
  return tol.eig_cluster_rel * scale;
}

SpectralRegion region_of(Scalar lambda, double threshold) {
  if (lambda.real() < -threshold) return SpectralRegion::stable;
  if (lambda.real() > threshold) return SpectralRegion::unstable;
  return SpectralRegion::central;
}

Mat restrict_to(const Mat& a, const Mat& q) { return q.adjoint() * a * q; }

std::size_t JordanStructure::width(const JordanBlocks& b) const {
  const std::size_t s = std::accumulate(b.sizes.begin(), b.sizes.end(), std::size_t{0});
  return (field == Field::real && b.eigenvalue.imag() != 0.0) ? 2 * s : s;
}

std::size_t JordanStructure::dimension() const {
  std::size_t d = 0;
  for (const auto& b : blocks) d += width(b);
  return d;
}

bool JordanStructure::is_nilpotent() const {
  return std::all_of(blocks.begin(), blocks.end(),
                     [](const JordanBlocks& b) { return b.eigenvalue == Scalar{}; });
}

std::vector<std::size_t> block_sizes_from_weyr(const std::vector<std::size_t>& weyr) {
  std::vector<std::size_t> sizes;
  for (std::size_t k = weyr.size(); k-- > 0;) {
    const std::size_t next = k + 1 < weyr.size() ? weyr[k + 1] : 0;
    for (std::size_t c = next; c < weyr[k]; ++c) sizes.push_back(k + 1);
  }
  return sizes;
}

std::vector<std::size_t> weyr_from_block_sizes(std::vector<std::size_t> sizes) {
  std::size_t top = sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
  std::vector<std::size_t> w(top, 0);
  for (std::size_t s : sizes)
    for (std::size_t k = 0; k < s; ++k) ++w[k];
  return w;
}

bool same_structure(const JordanStructure& x, const JordanStructure& y, double abs_tol) {
  if (x.field != y.field || x.blocks.size() != y.blocks.size()) return false;
  std::vector<bool> used(y.blocks.size(), false);
  for (const auto& bx : x.blocks) {
    bool found = false;
    for (std::size_t j = 0; j < y.blocks.size(); ++j) {
      if (used[j]) continue;
      if (std::abs(bx.eigenvalue - y.blocks[j].eigenvalue) <= abs_tol &&
          bx.sizes == y.blocks[j].sizes) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

Mat complex_jordan_block(Scalar eigenvalue, std::size_t m) {
  Mat b(m, m, eigenvalue.imag() != 0.0 ? Field::complex : Field::real);
  for (std::size_t i = 0; i < m; ++i) {
    b(i, i) = eigenvalue;
    if (i + 1 < m) b(i, i + 1) = 1.0;
  }
  return b;
}

Mat real_jordan_block(Scalar eigenvalue, std::size_t m) {
  const double a = eigenvalue.real(), b = eigenvalue.imag();
  if (b == 0.0) return complex_jordan_block(a, m);
  Mat out(2 * m, 2 * m, Field::real);
  for (std::size_t i = 0; i < m; ++i) {
    out(i, i) = a;
    out(m + i, m + i) = a;
    out(i, m + i) = -b;
    out(m + i, i) = b;
    if (i + 1 < m) {
      out(i, i + 1) = 1.0;
      out(m + i, m + i + 1) = 1.0;
    }
  }
  return out;
}

Mat jordan_form(const JordanStructure& s) {
  std::vector<Mat> blocks;
  for (const auto& g : s.blocks)
    for (std::size_t m : g.sizes)
      blocks.push_back(s.field == Field::real ? real_jordan_block(g.eigenvalue, m)
                                              : complex_jordan_block(g.eigenvalue, m).as_complex());
  Mat out = block_diag(blocks);
  if (s.field == Field::complex) out = out.as_complex();
  return out;
}

namespace {

struct NestedKernels {
  std::vector<Mat> levels;  // levels[k] spans ker B^{k+1}
  std::vector<std::size_t> weyr;
  std::size_t total() const { return levels.empty() ? 0 : levels.back().cols(); }
};

Mat shifted(const Mat& a, Scalar c) {
  Mat b = a;
  if (c.imag() != 0.0) b = b.as_complex();
  for (std::size_t i = 0; i < a.rows(); ++i) b(i, i) -= c;
  return b;
}

// ker B^k = ker((I − N Nᴴ) B) with N an orthonormal basis of ker B^{k−1};
// no matrix powers are formed.
NestedKernels nested_kernels(const Mat& a, Scalar c, const Tolerance& tol, double scale,
                             std::size_t cap) {
  const std::size_t n = a.rows();
  const Mat b = shifted(a, c);
  NestedKernels out;
  Mat basis(n, 0, b.field());
  std::size_t prev = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    Mat m = b;
    if (basis.cols() > 0) m -= basis * (basis.adjoint() * b);
    Mat ker = kernel_basis(m, tol, scale);
    const std::size_t d = ker.cols();
    if (d <= prev) break;
    out.weyr.push_back(d - prev);
    out.levels.push_back(ker);
    basis = std::move(ker);
    prev = d;
    if (d >= cap) break;
  }
  return out;
}

struct Dsu {
  std::vector<std::size_t> parent;
  explicit Dsu(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t x, std::size_t y) {
    x = find(x);
    y = find(y);
    if (x != y) parent[std::max(x, y)] = std::min(x, y);
  }
};

struct ClusterData {
  std::vector<std::size_t> members;
  Scalar centroid;
  Scalar value;  // centroid snapped to the axes within the cluster radius
  NestedKernels kernels;
  bool self_conjugate = false;
  std::size_t mirror = 0;
};

Scalar snap(Scalar c, double thr) {
  double re = c.real(), im = c.imag();
  if (std::abs(re) <= thr) re = 0.0;
  if (std::abs(im) <= thr) im = 0.0;
  return {re, im};
}

// The QR iteration splits a defective eigenvalue of block size m by about
// (eps·‖A‖)^{1/m}, which can exceed the clustering radius. Walk the
// single-linkage hierarchy past the radius and accept a merged group when
// its generalized eigenspace at the group centroid has full dimension;
// genuinely distinct eigenvalues leave A − c well conditioned and fail.
void merge_split_blocks(const Mat& a, const std::vector<Scalar>& lam, const std::vector<std::size_t>& conj_of,
                        const Tolerance& tol, double scale, double radius, Dsu& accepted) {
  const std::size_t n = lam.size();
  const double reach = 0.1 * scale;
  struct Edge {
    double d;
    std::size_t i, j;
  };
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::abs(lam[i] - lam[j]);
      if (d > radius && d <= reach) edges.push_back({d, i, j});
    }
  if (edges.empty()) return;
  std::stable_sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) { return x.d < y.d; });
  Dsu tree = accepted;
  const bool real = a.field() == Field::real;
  for (const Edge& e : edges) {
    if (tree.find(e.i) == tree.find(e.j)) continue;
    tree.unite(e.i, e.j);
    const std::size_t root = tree.find(e.i);
    std::vector<std::size_t> members;
    Scalar sum{};
    for (std::size_t k = 0; k < n; ++k)
      if (tree.find(k) == root) {
        members.push_back(k);
        sum += lam[k];
      }
    Scalar c = sum / static_cast<double>(members.size());
    if (real && std::all_of(members.begin(), members.end(),
                            [&](std::size_t k) { return tree.find(conj_of[k]) == root; }))
      c = c.real();
    if (nested_kernels(a, c, tol, scale, members.size() + 1).total() == members.size())
      for (std::size_t k : members) accepted.unite(members.front(), k);
  }
}

std::vector<ClusterData> analyze(const Mat& a, const Tolerance& tol, double scale) {
  tol.validate();
  check_finite(a, "spectral input");
  require_square(a, "spectral input");
  const std::size_t n = a.rows();
  if (n == 0) return {};
  const RawSpectrum raw = raw_eigenvalues(a);
  const auto& lam = raw.values;
  const bool real = a.field() == Field::real;
  const double radius = spectral_threshold(tol, scale);

  Dsu dsu(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(lam[i] - lam[j]) <= radius) dsu.unite(i, j);
  merge_split_blocks(a, lam, raw.conj_of, tol, scale, radius, dsu);

  std::map<std::vector<std::size_t>, NestedKernels> cache;

  for (std::size_t round = 0;; ++round) {
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[dsu.find(i)].push_back(i);
    std::vector<ClusterData> clusters;
    std::map<std::size_t, std::size_t> root_to_cluster;
    for (auto& [root, members] : groups) {
      root_to_cluster[root] = clusters.size();
      ClusterData c;
      c.members = members;
      clusters.push_back(std::move(c));
    }
    for (std::size_t k = 0; k < clusters.size(); ++k) {
      auto& c = clusters[k];
      c.mirror = real ? root_to_cluster[dsu.find(raw.conj_of[c.members.front()])] : k;
      c.self_conjugate = real && c.mirror == k;
    }
    for (std::size_t k = 0; k < clusters.size(); ++k) {
      auto& c = clusters[k];
      Scalar sum{};
      for (std::size_t i : c.members) sum += lam[i];
      Scalar mean = sum / static_cast<double>(c.members.size());
      if (c.self_conjugate) {
        c.centroid = mean.real();
      } else if (real) {
        // Mirror pairs get exactly conjugate centroids; the member with the
        // upper-half-plane mean is the primary.
        auto& m = clusters[c.mirror];
        if (mean.imag() > 0.0 || (mean.imag() == 0.0 && k < c.mirror)) {
          c.centroid = mean;
          m.centroid = std::conj(mean);
        }
      } else {
        c.centroid = mean;
      }
    }

    std::vector<std::size_t> fragments;
    bool deficient = false;
    for (std::size_t k = 0; k < clusters.size(); ++k) {
      auto& c = clusters[k];
      auto it = cache.find(c.members);
      if (it == cache.end())
        it = cache.emplace(c.members, nested_kernels(a, c.centroid, tol, scale, c.members.size() + 1))
                 .first;
      c.kernels = it->second;
      const std::size_t g = c.kernels.total();
      if (g > c.members.size()) fragments.push_back(k);
      if (g < c.members.size()) deficient = true;
    }

    if (fragments.empty()) {
      if (deficient) {
        std::ostringstream os;
        os << "eigenvalue cluster with generalized eigenspace smaller than its multiplicity;"
              " the clustering radius may be merging distinct eigenvalues";
        throw InternalConsistencyError(os.str());
      }
      for (auto& c : clusters) c.value = snap(c.centroid, radius);
      for (auto& c : clusters)
        if (c.self_conjugate) c.value = {c.value.real(), 0.0};
      return clusters;
    }
    if (round > n) throw InternalConsistencyError("eigenvalue cluster merging did not settle");

    // Merge the fragment closest to another cluster.
    double best = std::numeric_limits<double>::infinity();
    std::size_t fi = 0, fj = 0;
    for (std::size_t k : fragments) {
      for (std::size_t l = 0; l < clusters.size(); ++l) {
        if (l == k) continue;
        for (std::size_t i : clusters[k].members)
          for (std::size_t j : clusters[l].members) {
            const double d = std::abs(lam[i] - lam[j]);
            if (d < best) {
              best = d;
              fi = i;
              fj = j;
            }
          }
      }
    }
    dsu.unite(fi, fj);
    if (real) dsu.unite(raw.conj_of[fi], raw.conj_of[fj]);
  }
}

bool ordered_before(Scalar x, Scalar y) {
  if (x.real() != y.real()) return x.real() > y.real();
  return x.imag() > y.imag();
}

std::vector<ClusterData> sorted_clusters(const Mat& a, const Tolerance& tol, double scale) {
  auto clusters = analyze(a, tol, scale);
  std::stable_sort(clusters.begin(), clusters.end(), [](const ClusterData& x, const ClusterData& y) {
    return ordered_before(x.value, y.value);
  });
  return clusters;
}

// Primary clusters: every cluster for complex input; for real input the
// self-conjugate ones and the upper member of each mirror pair.
bool is_primary(const ClusterData& c, Field field) {
  if (field == Field::complex || c.self_conjugate) return true;
  return c.centroid.imag() > 0.0;
}

double resolve_scale(const Mat& a, double scale) { return scale < 0.0 ? default_scale(a) : scale; }

}  // namespace

std::vector<EigCluster> eigen_clusters(const Mat& a, const Tolerance& tol) {
  return eigen_clusters(a, tol, -1.0);
}

std::vector<EigCluster> eigen_clusters(const Mat& a, const Tolerance& tol, double scale) {
  std::vector<EigCluster> out;
  for (const auto& c : sorted_clusters(a, tol, resolve_scale(a, scale)))
    out.push_back({c.value, c.members.size(), c.kernels.weyr});
  return out;
}

JordanStructure jordan_structure(const Mat& a, const Tolerance& tol) {
  return jordan_structure(a, tol, -1.0);
}

JordanStructure jordan_structure(const Mat& a, const Tolerance& tol, double scale) {
  JordanStructure s;
  s.field = a.field();
  for (const auto& c : sorted_clusters(a, tol, resolve_scale(a, scale))) {
    if (!is_primary(c, a.field())) continue;
    s.blocks.push_back({c.value, block_sizes_from_weyr(c.kernels.weyr)});
  }
  return s;
}

namespace {

using Chain = std::vector<Mat>;  // chain[0] is the eigenvector

std::vector<Chain> build_chains(const Mat& b, const NestedKernels& nk, const Tolerance& tol,
                                double scale) {
  const std::size_t n = b.rows();
  const std::size_t p = nk.weyr.size();
  std::vector<Chain> chains;
  for (std::size_t k = p; k >= 1; --k) {
    const std::size_t next = k < p ? nk.weyr[k] : 0;
    const std::size_t need = nk.weyr[k - 1] - next;
    if (need == 0) continue;
    std::vector<Mat> spanning;
    if (k >= 2) spanning.push_back(nk.levels[k - 2]);
    for (const auto& ch : chains) spanning.push_back(ch[k - 1]);
    const Mat& level = nk.levels[k - 1];
    Mat cand = level;
    if (!spanning.empty()) {
      const Mat s = range_basis(hstack(spanning), tol, scale);
      if (s.cols() > 0) cand -= s * (s.adjoint() * level);
    }
    const auto qr = pivoted_qr(cand);
    for (std::size_t h = 0; h < need && h < qr.q.cols(); ++h) {
      Chain ch(k);
      ch[k - 1] = qr.q.col(h);
      for (std::size_t j = k - 1; j >= 1; --j) ch[j - 1] = b * ch[j];
      double big = 0.0;
      for (const auto& v : ch) big = std::max(big, v.norm_fro());
      if (big > 0.0)
        for (auto& v : ch) v *= Scalar(1.0 / big);
      chains.push_back(std::move(ch));
    }
    (void)n;
  }
  return chains;
}

}  // namespace

JordanDecomposition jordan_decomposition(const Mat& a, const Tolerance& tol) {
  return jordan_decomposition(a, tol, -1.0);
}

JordanDecomposition jordan_decomposition(const Mat& a, const Tolerance& tol, double scale) {
  scale = resolve_scale(a, scale);
  const auto clusters = sorted_clusters(a, tol, scale);
  const std::size_t n = a.rows();
  const Field field = a.field();
  JordanDecomposition out;
  out.structure.field = field;
  std::vector<Mat> columns;
  std::size_t offset = 0;
  for (const auto& c : clusters) {
    if (!is_primary(c, field)) continue;
    const Mat b = shifted(a, c.centroid);
    auto chains = build_chains(b, c.kernels, tol, scale);
    std::stable_sort(chains.begin(), chains.end(),
                     [](const Chain& x, const Chain& y) { return x.size() > y.size(); });
    JordanBlocks jb{c.value, {}};
    const bool pair = field == Field::real && !c.self_conjugate;
    for (const auto& ch : chains) {
      jb.sizes.push_back(ch.size());
      if (pair) {
        for (const auto& v : ch) columns.push_back(v.real_part());
        for (const auto& v : ch) columns.push_back(-v.imag_part());
      } else {
        for (const auto& v : ch) columns.push_back(field == Field::real ? v.as_real(1e300) : v);
      }
      BlockSpan span{c.value, ch.size(), offset, pair};
      offset += span.width();
      out.blocks.push_back(span);
    }
    out.structure.blocks.push_back(std::move(jb));
  }
  out.basis = columns.empty() ? Mat(n, 0, field) : hstack(columns);
  if (field == Field::complex) out.basis = out.basis.as_complex();
  if (out.basis.cols() != n)
    throw InternalConsistencyError("Jordan chains do not span the space");
  out.form = jordan_form(out.structure);
  out.condition = condition_1(out.basis, tol);
  if (!(out.condition * tol.rank_rel < 1.0))
    throw IllConditioned("Jordan chain basis is numerically singular", out.condition);
  return out;
}

JordanDecomposition real_jordan_basis(const Mat& a, const Tolerance& tol) {
  if (a.field() != Field::real) throw InvalidArgument("real_jordan_basis requires a real matrix");
  return jordan_decomposition(a, tol);
}

ScuSplit scu_split(const Mat& a, const Tolerance& tol) { return scu_split(a, tol, -1.0); }

ScuSplit scu_split(const Mat& a, const Tolerance& tol, double scale) {
  scale = resolve_scale(a, scale);
  const auto clusters = sorted_clusters(a, tol, scale);
  const std::size_t n = a.rows();
  const Field field = a.field();
  const double thr = spectral_threshold(tol, scale);
  std::vector<Mat> parts[3];
  std::size_t dims[3] = {0, 0, 0};
  for (const auto& c : clusters) {
    if (!is_primary(c, field)) continue;
    const int r = static_cast<int>(region_of(c.value, thr));
    const Mat& gen = c.kernels.levels.back();
    if (field == Field::real && !c.self_conjugate) {
      parts[r].push_back(gen.real_part());
      parts[r].push_back(gen.imag_part());
      dims[r] += 2 * gen.cols();
    } else {
      parts[r].push_back(field == Field::real ? gen.as_real(1e300) : gen);
      dims[r] += gen.cols();
    }
  }
  ScuSplit s;
  Mat* bases[3] = {&s.basis_s, &s.basis_c, &s.basis_u};
  for (int r = 0; r < 3; ++r) {
    if (dims[r] == 0) {
      *bases[r] = Mat(n, 0, field);
      continue;
    }
    const auto qr = pivoted_qr(hstack(parts[r]));
    *bases[r] = qr.q.block(0, 0, n, dims[r]);
    if (field == Field::complex) *bases[r] = bases[r]->as_complex();
  }
  s.dim_s = dims[0];
  s.dim_c = dims[1];
  s.dim_u = dims[2];
  const Mat q = hstack({s.basis_s, s.basis_c, s.basis_u});
  const Mat qinv = n ? inverse(q, tol) : Mat(0, 0, field);
  Mat* projs[3] = {&s.proj_s, &s.proj_c, &s.proj_u};
  std::size_t off = 0;
  for (int r = 0; r < 3; ++r) {
    *projs[r] = bases[r]->cols() ? (*bases[r]) * qinv.block(off, 0, dims[r], n) : Mat(n, n, field);
    off += dims[r];
  }
  return s;
}

}  // namespace linflow
