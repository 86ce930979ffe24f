#pragma once

#include <cstdint>
#include <vector>

#include "hypercount/form.hpp"
#include "hypercount/projective.hpp"
#include "hypercount/transform.hpp"

namespace hypercount {

/// True iff f restricted to the parametrized subspace is identically zero.
bool contains_subspace(const Form& f, const LinearSubspace& s);

/// Lines through a nonsingular point x of X, in the tangent-adapted
/// coordinates where X reads y0^{d-1} y1 + y0^{d-2} F_2 + ... + F_d.
/// A line joining x = [1,0,...,0] to [a,0,b] lies on X exactly when
/// F_2(0,b) = ... = F_d(0,b) = 0.
struct ConeEquations {
  ProjectivePoint base_point;
  CoordinateTransform transform;
  /// f in the adapted coordinates (primitive integer coefficients).
  Form normal_form;
  /// F_i(0, b) for i = 2..d, as forms in the n-1 variables b. Identically
  /// zero members are kept and flagged in `degenerate`.
  std::vector<Form> equations;
  std::vector<bool> degenerate;

  /// Ambient point M (a, 0, b).
  ProjectivePoint pullback(std::span<const std::int64_t> b, std::int64_t a = 0) const;
  /// The line joining the base point to pullback(b).
  LinearSubspace line_through(std::span<const std::int64_t> b) const;
};

/// Throws NotOnHypersurface / SingularPointError like normal_form_at_point,
/// and InvalidArgument when n < 2.
ConeEquations cone_at_point(const Form& f, const ProjectivePoint& x);

/// Rational lines L with x ∈ L ⊂ X and Plücker height H(L) ≤ h, sorted and
/// deduplicated. The cone system is solved for directions b up to a bound
/// derived from h, so the result equals the lines of rational_lines(f, h)
/// passing through x.
std::vector<LinearSubspace> lines_through_point(const Form& f, const ProjectivePoint& x,
                                                std::int64_t h, int threads = 1);

/// All rational m-planes contained in f = 0 with Plücker height ≤ h.
///
/// Complete by Minkowski's second theorem: a plane of height ≤ h contains
/// independent points a_0..a_m with H(a_0) ≤ ... ≤ H(a_m) and
/// prod H(a_i) ≤ sqrt(C(n+1, m+1)) h (sup-norm successive minima; the sup-norm
/// unit ball meets every (m+1)-dimensional subspace in volume ≥ 2^{m+1}).
/// The search picks a_j level by level on X, inside the tangent hyperplanes
/// of the earlier points, keeping only partial spans that lie in X.
std::vector<LinearSubspace> rational_subspaces(const Form& f, int m, std::int64_t h,
                                               int threads = 1);
std::vector<LinearSubspace> rational_lines(const Form& f, std::int64_t h, int threads = 1);
/// Requires n ≥ 3.
std::vector<LinearSubspace> rational_planes(const Form& f, std::int64_t h, int threads = 1);

struct AttributedSubspace {
  LinearSubspace subspace;
  /// Points of X of height ≤ bound lying on this subspace.
  std::uint64_t count = 0;
  bool operator==(const AttributedSubspace&) const = default;
};

/// Points of height ≤ bound split between the rational lines and planes of
/// height ≤ cover_height_bound and the rest.
///
/// Audit: sum(count) - overcount + residual == total, exactly. overcount is
/// the sum over covered points of (multiplicity - 1). pairwise_overlap is
/// sum_{i<j} #(S_i ∩ S_j)(bound), computed from the intersection subspaces;
/// it equals overcount when no point lies on three or more of the subspaces.
struct AttributionReport {
  std::int64_t bound = 0;
  std::int64_t cover_height_bound = 0;
  std::vector<AttributedSubspace> subspaces;
  std::uint64_t total = 0;
  std::uint64_t covered = 0;
  std::uint64_t residual = 0;
  std::uint64_t overcount = 0;
  std::uint64_t pairwise_overlap = 0;
  bool operator==(const AttributionReport&) const = default;
};

AttributionReport attribute_points(const Form& f, std::int64_t b, std::int64_t h,
                                   int threads = 1);

}  // namespace hypercount
