#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "linflow/equiv.hpp"

namespace linflow {

/// Complete invariant of a class. Topological: (dim_s, dim_u, central
/// structure); smooth: the full structure. Structures are normalized so
/// the largest eigenvalue modulus is 1 (unless nilpotent), eigenvalues
/// sorted by (−Re, −Im), sizes descending. Topological descriptors of
/// complex generators are taken from the realification.
struct ClassDescriptor {
  Relation relation = Relation::topological;
  Field field = Field::real;
  std::size_t dimension = 0;  // dimension over the field
  std::size_t dim_s = 0, dim_u = 0;  // real dimensions
  JordanStructure central;    // topological only
  JordanStructure full;       // smooth only
};

ClassDescriptor descriptor(const Mat& a, Relation relation, const Tolerance& tol);

/// Sorts and rescales a structure as described above.
JordanStructure normalize_structure(JordanStructure s);

/// Descriptor equality with eigenvalues compared to `abs_tol` (they are
/// normalized to modulus ≤ 1).
bool same_class(const ClassDescriptor& x, const ClassDescriptor& y, double abs_tol = 1e-6);

/// Block-diagonal normal form: −I on the stable part, +I on the unstable
/// part and Jordan blocks for the central structure (topological), or the
/// Jordan form of the normalized structure (smooth).
Mat representative(const ClassDescriptor& d);

/// One entry of the 2×2 catalogs. Families carry a parameter slot.
struct CatalogEntry {
  std::string label;
  Mat matrix;                           // generator (families at `sample`)
  std::size_t class_id = 0;             // class label within the catalog
  std::optional<std::string> parameter; // "a" for families
  std::string constraint;               // e.g. "a > 0"
  double sample = 0.0;                  // parameter value used for `matrix`
  std::function<Mat(double)> member;    // family member for a given a
};

/// Topological: the eight normal forms of the 2×2 list plus the five
/// family generators at a = 2, labeled into the eight classes. Smooth: the
/// seven isolated normal forms plus the five families (class_id unique per
/// entry; a family entry is one class per parameter value, except that
/// ±diag(1,a) and ±diag(1,1/a) coincide).
std::vector<CatalogEntry> catalog_2x2(Relation relation);

}  // namespace linflow
