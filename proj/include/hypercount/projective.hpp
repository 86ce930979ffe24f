#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hypercount/form.hpp"

namespace hypercount {

using Coords = std::vector<std::int64_t>;

/// A rational point of P^n, stored as its primitive integer representative
/// with first nonzero coordinate positive. Height is max |x_i|.
class ProjectivePoint {
 public:
  ProjectivePoint() = default;

  const Coords& coords() const noexcept { return coords_; }
  std::int64_t height() const noexcept { return height_; }
  int ambient_dim() const noexcept { return static_cast<int>(coords_.size()) - 1; }
  std::span<const std::int64_t> span() const noexcept { return coords_; }

  std::vector<mpz_class> to_mpz() const;

  auto operator<=>(const ProjectivePoint& o) const { return coords_ <=> o.coords_; }
  bool operator==(const ProjectivePoint& o) const { return coords_ == o.coords_; }

 private:
  friend ProjectivePoint normalize(std::span<const std::int64_t> v);
  Coords coords_;
  std::int64_t height_ = 0;
};

/// Throws InvalidArgument on the zero vector.
ProjectivePoint normalize(std::span<const std::int64_t> v);
ProjectivePoint normalize(std::span<const mpz_class> v);

/// True when v is primitive with first nonzero coordinate positive.
bool is_normalized(std::span<const std::int64_t> v);

/// A rational linear m-plane of P^n.
///
/// `basis` is an LLL-reduced Z-basis of the saturated lattice (span ∩ Z^{n+1}),
/// so its (m+1)x(m+1) minors are already coprime. `pluecker` lists those
/// minors for column subsets in lexicographic order, sign-normalized.
class LinearSubspace {
 public:
  LinearSubspace() = default;

  int dim() const noexcept { return static_cast<int>(basis_.size()) - 1; }
  int ambient_dim() const noexcept { return ambient_dim_; }
  const std::vector<Coords>& basis() const noexcept { return basis_; }
  const std::vector<mpz_class>& pluecker() const noexcept { return pluecker_; }
  const mpz_class& height() const noexcept { return height_; }
  /// Integer linear forms cutting out the subspace (rows of a Z-basis of the
  /// orthogonal complement).
  const std::vector<Coords>& equations() const noexcept { return equations_; }

  bool contains(std::span<const std::int64_t> v) const;
  bool contains(const ProjectivePoint& p) const { return contains(p.span()); }

  ZMatrix basis_mpz() const;

  bool operator==(const LinearSubspace& o) const { return pluecker_ == o.pluecker_ && ambient_dim_ == o.ambient_dim_; }
  std::strong_ordering operator<=>(const LinearSubspace& o) const;

 private:
  friend LinearSubspace subspace_from_rows(const ZMatrix& rows);
  int ambient_dim_ = 0;
  std::vector<Coords> basis_;
  std::vector<Coords> equations_;
  std::vector<mpz_class> pluecker_;
  mpz_class height_;
};

/// Subspace spanned by integer rows. Throws DependentPoints if the rows are
/// not linearly independent.
LinearSubspace subspace_from_rows(const ZMatrix& rows);
LinearSubspace subspace_from_points(std::span<const ProjectivePoint> points);

/// Reduced, sign-normalized Plücker vector of the rows (gcd of the minors
/// divided out). Rows must be independent.
std::vector<mpz_class> pluecker_coordinates(const ZMatrix& rows);

/// Intersection of two subspaces, or nullopt when it is empty.
std::optional<LinearSubspace> intersect(const LinearSubspace& a, const LinearSubspace& b);

/// The shipped constant c(n) = 2^n bounding prod H(a_i) / H(Λ) from above.
std::int64_t generator_constant(int ambient_dim);

/// Successive minima of the subspace's point lattice in the sup norm: the
/// first point has minimal height among all rational points of s, and each
/// following point has minimal height among points independent of the
/// previous ones. Ties are broken by taking the lexicographically least
/// coordinates, so the returned tuple is the least among minimal tuples.
std::vector<ProjectivePoint> smallest_generators(const LinearSubspace& s);

/// All rational points of s of height at most b, sorted by coordinates.
std::vector<ProjectivePoint> points_on_subspace(const LinearSubspace& s, std::int64_t b);

/// Number of points of height ≤ b on s (same enumeration, no materialization).
std::uint64_t count_points_on_subspace(const LinearSubspace& s, std::int64_t b);

/// Dyadic bucket index k with 2^{k-1} < h ≤ 2^k (h = 1 gives k = 0).
int dyadic_bucket(std::int64_t height);

}  // namespace hypercount
