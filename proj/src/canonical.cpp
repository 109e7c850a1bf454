#include "linflow/canonical.hpp"

#include <algorithm>
#include <cmath>

namespace linflow {

namespace {

bool before(Scalar x, Scalar y) {
  if (x.real() != y.real()) return x.real() > y.real();
  return x.imag() > y.imag();
}

}  // namespace

JordanStructure normalize_structure(JordanStructure s) {
  if (!s.is_nilpotent()) {
    double rho = 0.0;
    for (const auto& g : s.blocks) rho = std::max(rho, std::abs(g.eigenvalue));
    for (auto& g : s.blocks) g.eigenvalue /= rho;
  }
  for (auto& g : s.blocks) std::sort(g.sizes.rbegin(), g.sizes.rend());
  std::stable_sort(s.blocks.begin(), s.blocks.end(),
                   [](const JordanBlocks& x, const JordanBlocks& y) { return before(x.eigenvalue, y.eigenvalue); });
  return s;
}

ClassDescriptor descriptor(const Mat& a, Relation relation, const Tolerance& tol) {
  require_square(a, "generator");
  check_finite(a, "generator");
  ClassDescriptor d;
  d.relation = relation;
  d.field = a.field();
  d.dimension = a.rows();
  const Mat r = realify(a);
  const double scale = default_scale(r);
  const ScuSplit split = scu_split(r, tol, scale);
  d.dim_s = split.dim_s;
  d.dim_u = split.dim_u;
  if (relation == Relation::topological) {
    d.central = normalize_structure(jordan_structure(restrict_to(r, split.basis_c), tol, scale));
  } else {
    d.full = normalize_structure(jordan_structure(a, tol));
  }
  return d;
}

bool same_class(const ClassDescriptor& x, const ClassDescriptor& y, double abs_tol) {
  if (x.relation != y.relation || x.field != y.field || x.dimension != y.dimension) return false;
  if (x.relation == Relation::topological)
    return x.dim_s == y.dim_s && x.dim_u == y.dim_u && same_structure(x.central, y.central, abs_tol);
  return same_structure(x.full, y.full, abs_tol);
}

Mat representative(const ClassDescriptor& d) {
  if (d.relation == Relation::smooth) return jordan_form(d.full);
  std::vector<Mat> blocks;
  if (d.field == Field::real) {
    if (d.dim_s) blocks.push_back(Mat::identity(d.dim_s) * Scalar(-1.0));
    if (d.dim_u) blocks.push_back(Mat::identity(d.dim_u));
    if (d.central.dimension()) blocks.push_back(jordan_form(d.central));
    return blocks.empty() ? Mat(0, 0) : block_diag(blocks);
  }
  // Complex generator whose realification has this descriptor: real
  // eigenvalues of the realification come in equal pairs of blocks, one
  // complex block each; a pair at ±ib comes from one complex block at ib.
  if (d.dim_s) blocks.push_back(Mat::identity(d.dim_s / 2, Field::complex) * Scalar(-1.0));
  if (d.dim_u) blocks.push_back(Mat::identity(d.dim_u / 2, Field::complex));
  for (const auto& g : d.central.blocks) {
    if (g.eigenvalue.imag() == 0.0) {
      for (std::size_t i = 0; i < g.sizes.size(); i += 2)
        blocks.push_back(complex_jordan_block(g.eigenvalue, g.sizes[i]).as_complex());
    } else {
      for (std::size_t m : g.sizes) blocks.push_back(complex_jordan_block(g.eigenvalue, m).as_complex());
    }
  }
  if (blocks.empty()) return Mat(0, 0, Field::complex);
  return block_diag(blocks).as_complex();
}

namespace {

CatalogEntry fixed(std::string label, Mat m, std::size_t id) {
  CatalogEntry e;
  e.label = std::move(label);
  e.matrix = m;
  e.class_id = id;
  e.member = [m](double) { return m; };
  return e;
}

CatalogEntry family(std::string label, std::function<Mat(double)> f, std::size_t id, double a) {
  CatalogEntry e;
  e.label = std::move(label);
  e.class_id = id;
  e.parameter = "a";
  e.constraint = "a > 0";
  e.sample = a;
  e.member = f;
  e.matrix = f(a);
  return e;
}

Mat diag2(double x, double y) { return Mat::real({{x, 0}, {0, y}}); }

}  // namespace

std::vector<CatalogEntry> catalog_2x2(Relation relation) {
  const Mat rotation = Mat::real({{0, -1}, {1, 0}});
  const Mat zero = diag2(0, 0);
  const Mat nil = Mat::real({{0, 1}, {0, 0}});
  auto saddle_family = [](double a) { return diag2(-1, a); };
  auto node_plus = [](double a) { return diag2(1, a); };
  auto node_minus = [](double a) { return diag2(-1, -a); };
  auto focus_plus = [](double a) { return Mat::real({{1, -a}, {a, 1}}); };
  auto focus_minus = [](double a) { return Mat::real({{-1, a}, {-a, -1}}); };
  std::vector<CatalogEntry> out;
  if (relation == Relation::topological) {
    out.push_back(fixed("[[0,-1],[1,0]]", rotation, 0));
    out.push_back(fixed("[[0,0],[0,0]]", zero, 1));
    out.push_back(fixed("[[0,1],[0,0]]", nil, 2));
    out.push_back(fixed("+[[0,0],[0,1]]", diag2(0, 1), 3));
    out.push_back(fixed("-[[0,0],[0,1]]", diag2(0, -1), 4));
    out.push_back(fixed("[[1,0],[0,-1]]", diag2(1, -1), 5));
    out.push_back(fixed("+[[1,0],[0,1]]", diag2(1, 1), 6));
    out.push_back(fixed("-[[1,0],[0,1]]", diag2(-1, -1), 7));
    out.push_back(family("[[-1,0],[0,a]]", saddle_family, 5, 2.0));
    out.push_back(family("+[[1,0],[0,a]]", node_plus, 6, 2.0));
    out.push_back(family("-[[1,0],[0,a]]", node_minus, 7, 2.0));
    out.push_back(family("+[[1,-a],[a,1]]", focus_plus, 6, 2.0));
    out.push_back(family("-[[1,-a],[a,1]]", focus_minus, 7, 2.0));
  } else {
    out.push_back(fixed("[[0,-1],[1,0]]", rotation, 0));
    out.push_back(fixed("[[0,0],[0,0]]", zero, 1));
    out.push_back(fixed("[[0,1],[0,0]]", nil, 2));
    out.push_back(fixed("+[[0,0],[0,1]]", diag2(0, 1), 3));
    out.push_back(fixed("-[[0,0],[0,1]]", diag2(0, -1), 4));
    out.push_back(fixed("+[[1,1],[0,1]]", Mat::real({{1, 1}, {0, 1}}), 5));
    out.push_back(fixed("-[[1,1],[0,1]]", Mat::real({{-1, -1}, {0, -1}}), 6));
    out.push_back(family("[[-1,0],[0,a]]", saddle_family, 7, 1.0));
    out.push_back(family("+[[1,0],[0,a]]", node_plus, 8, 1.0));
    out.push_back(family("-[[1,0],[0,a]]", node_minus, 9, 1.0));
    out.push_back(family("+[[1,-a],[a,1]]", focus_plus, 10, 1.0));
    out.push_back(family("-[[1,-a],[a,1]]", focus_minus, 11, 1.0));
  }
  return out;
}

}  // namespace linflow
