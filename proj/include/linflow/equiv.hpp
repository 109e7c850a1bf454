#pragma once

#include <optional>
#include <string>
#include <vector>

#include "linflow/ratclass.hpp"
#include "linflow/spectral.hpp"

namespace linflow {

enum class Relation { topological, smooth };
inline const char* to_string(Relation r) { return r == Relation::topological ? "topological" : "smooth"; }

/// [[Re a, −Im a], [Im a, Re a]] for complex a (real parts first); real
/// input is returned unchanged.
Mat realify(const Mat& a);

/// Result of the search for α > 0 with A similar to αB.
struct ScaledSimilarity {
  bool holds = false;
  bool all_alphas = false;        // both nilpotent with equal blocks: every α works
  std::vector<double> alphas;     // admissible α, ascending (empty when all_alphas)
  double alpha = 1.0;             // the reported α: smallest admissible, 1 for all_alphas
  std::optional<Mat> transform;   // H with H A H⁻¹ = α B
  std::string detail;
};

ScaledSimilarity similar_up_to_scale(const Mat& a, const Mat& b, const Tolerance& tol);
/// Same with explicit clustering scales for each side (used on restricted
/// flows, whose own norm may be pure rounding noise).
ScaledSimilarity similar_up_to_scale(const Mat& a, const Mat& b, const Tolerance& tol,
                                     double scale_a, double scale_b);

/// One checked condition of a verdict.
struct Criterion {
  std::string name;
  bool holds = false;
  std::string detail;
};

/// Correspondence of rational classes between two bounded generators.
struct ClassMatch {
  std::size_t class_a = 0;
  std::size_t class_b = 0;
  double period_a = 0.0;
  double period_b = 0.0;
};

struct Verdict {
  Relation relation = Relation::topological;
  Field field = Field::real;
  bool equivalent = false;
  std::optional<double> alpha;
  /// Smooth: H with H e^{tA} = e^{αtB} H. Topological: the conjugator of
  /// the central parts, acting between `central_a` and `central_b`.
  std::optional<Mat> certificate;
  std::optional<Mat> central_a, central_b;  // restricted central generators
  std::size_t dim_s_a = 0, dim_c_a = 0, dim_u_a = 0;
  std::size_t dim_s_b = 0, dim_c_b = 0, dim_u_b = 0;
  std::vector<Criterion> criteria;
  std::vector<ClassMatch> classes;  // bounded verdicts only
  std::string reason;               // one-line summary
};

/// A smoothly equivalent to B iff A ~ αB for some α > 0 (similarity over
/// the field of the inputs).
Verdict smooth_verdict(const Mat& a, const Mat& b, const Tolerance& tol);

/// Equal stable and unstable dimensions and central parts similar up to a
/// positive scale. Complex input is decided on the realifications.
Verdict topological_verdict(const Mat& a, const Mat& b, const Tolerance& tol);

/// Topological verdict for bounded generators, with the rational classes
/// matched through α (periods scale by α). Throws NotBounded naming the
/// offending side.
Verdict bounded_verdict(const Mat& a, const Mat& b, const Tolerance& tol, std::int64_t qmax = 64);

Verdict verdict(Relation r, const Mat& a, const Mat& b, const Tolerance& tol);

}  // namespace linflow
