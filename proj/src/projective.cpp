#include "hypercount/projective.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "hypercount/errors.hpp"
#include "hypercount/linalg.hpp"

namespace hypercount {

namespace {

std::int64_t to_int64(const mpz_class& v) {
  if (!v.fits_slong_p()) throw InvalidArgument("coordinate exceeds 64-bit range");
  return v.get_si();
}

Coords to_coords(const std::vector<mpz_class>& v) {
  Coords out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(to_int64(x));
  return out;
}

// Column subsets of {0..n-1} of size k in lexicographic order.
std::vector<std::vector<int>> column_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(k);
  std::iota(cur.begin(), cur.end(), 0);
  if (k > n) return out;
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == n - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

std::vector<mpz_class> raw_minors(const ZMatrix& rows) {
  const int k = static_cast<int>(rows.size());
  const int n = static_cast<int>(rows[0].size());
  std::vector<mpz_class> minors;
  for (const auto& cols : column_subsets(n, k)) {
    ZMatrix sub(k, std::vector<mpz_class>(k));
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) sub[i][j] = rows[i][cols[j]];
    }
    minors.push_back(linalg::determinant(sub));
  }
  return minors;
}

}  // namespace

std::vector<mpz_class> ProjectivePoint::to_mpz() const {
  std::vector<mpz_class> out;
  out.reserve(coords_.size());
  for (auto x : coords_) out.emplace_back(static_cast<long>(x));
  return out;
}

bool is_normalized(std::span<const std::int64_t> v) {
  std::int64_t g = 0;
  bool seen = false;
  for (auto x : v) {
    if (!seen && x != 0) {
      if (x < 0) return false;
      seen = true;
    }
    g = std::gcd(g, x);
  }
  return g == 1;
}

ProjectivePoint normalize(std::span<const std::int64_t> v) {
  std::int64_t g = 0;
  std::int64_t first = 0;
  for (auto x : v) {
    if (first == 0) first = x;
    g = std::gcd(g, x);
  }
  if (g == 0) throw InvalidArgument("cannot normalize the zero vector");
  if (first < 0) g = -g;
  ProjectivePoint p;
  p.coords_.reserve(v.size());
  for (auto x : v) {
    std::int64_t y = x / g;
    p.coords_.push_back(y);
    p.height_ = std::max(p.height_, std::abs(y));
  }
  return p;
}

ProjectivePoint normalize(std::span<const mpz_class> v) {
  auto prim = linalg::primitive_vector(std::vector<mpz_class>(v.begin(), v.end()));
  if (linalg::content(prim) == 0) throw InvalidArgument("cannot normalize the zero vector");
  Coords c = to_coords(prim);
  return normalize(std::span<const std::int64_t>(c));
}

int dyadic_bucket(std::int64_t height) {
  int k = 0;
  std::int64_t edge = 1;
  while (edge < height) {
    edge <<= 1;
    ++k;
  }
  return k;
}

std::vector<mpz_class> pluecker_coordinates(const ZMatrix& rows) {
  if (rows.empty()) throw InvalidArgument("empty basis");
  auto minors = raw_minors(rows);
  if (linalg::content(minors) == 0) throw DependentPoints();
  return linalg::primitive_vector(std::move(minors));
}

LinearSubspace subspace_from_rows(const ZMatrix& rows) {
  if (rows.empty()) throw InvalidArgument("a subspace needs at least one spanning vector");
  const std::size_t n1 = rows[0].size();
  for (const auto& r : rows) {
    if (r.size() != n1) throw DimensionMismatch("spanning vectors have different lengths");
  }
  if (rows.size() > n1 || linalg::rank(rows) != static_cast<int>(rows.size())) {
    throw DependentPoints();
  }
  ZMatrix sat = linalg::saturate(rows);
  LinearSubspace s;
  s.ambient_dim_ = static_cast<int>(n1) - 1;
  for (const auto& r : sat) s.basis_.push_back(to_coords(r));
  if (rows.size() < n1) {
    for (const auto& r : linalg::integer_kernel(sat)) s.equations_.push_back(to_coords(r));
  }
  s.pluecker_ = pluecker_coordinates(sat);
  s.height_ = 0;
  for (const auto& p : s.pluecker_) {
    mpz_class a = abs(p);
    if (a > s.height_) s.height_ = a;
  }
  return s;
}

LinearSubspace subspace_from_points(std::span<const ProjectivePoint> points) {
  ZMatrix rows;
  for (const auto& p : points) rows.push_back(p.to_mpz());
  return subspace_from_rows(rows);
}

ZMatrix LinearSubspace::basis_mpz() const {
  ZMatrix out;
  for (const auto& r : basis_) {
    std::vector<mpz_class> row;
    for (auto x : r) row.emplace_back(static_cast<long>(x));
    out.push_back(std::move(row));
  }
  return out;
}

bool LinearSubspace::contains(std::span<const std::int64_t> v) const {
  if (static_cast<int>(v.size()) != ambient_dim_ + 1) {
    throw DimensionMismatch("point dimension does not match subspace");
  }
  for (const auto& eq : equations_) {
    __int128 s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) s += static_cast<__int128>(eq[i]) * v[i];
    if (s != 0) return false;
  }
  return true;
}

std::strong_ordering LinearSubspace::operator<=>(const LinearSubspace& o) const {
  if (ambient_dim_ != o.ambient_dim_) return ambient_dim_ <=> o.ambient_dim_;
  if (pluecker_.size() != o.pluecker_.size()) return pluecker_.size() <=> o.pluecker_.size();
  for (std::size_t i = 0; i < pluecker_.size(); ++i) {
    int c = cmp(pluecker_[i], o.pluecker_[i]);
    if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

std::optional<LinearSubspace> intersect(const LinearSubspace& a, const LinearSubspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionMismatch("subspaces live in different spaces");
  const int n1 = a.ambient_dim() + 1;
  ZMatrix eqs;
  for (const auto* s : {&a, &b}) {
    for (const auto& e : s->equations()) {
      std::vector<mpz_class> row;
      for (auto x : e) row.emplace_back(static_cast<long>(x));
      eqs.push_back(std::move(row));
    }
  }
  ZMatrix span;
  if (eqs.empty()) {
    span.assign(n1, std::vector<mpz_class>(n1, 0));
    for (int i = 0; i < n1; ++i) span[i][i] = 1;
  } else {
    span = linalg::integer_kernel(eqs);
  }
  if (span.empty()) return std::nullopt;
  return subspace_from_rows(span);
}

std::int64_t generator_constant(int ambient_dim) { return std::int64_t{1} << ambient_dim; }

namespace {

// Enumerates the primitive points of height ≤ bound on a subspace. The
// lattice basis is brought to upper-triangular (Hermite) form on the column
// set J carrying the largest Plücker minor, so each coordinate in J pins
// down one lattice coefficient and the search box shrinks to about
// (2R)^{m+1} / H(Λ) candidates.
class SubspaceLattice {
 public:
  explicit SubspaceLattice(const LinearSubspace& s) : n1_(s.ambient_dim() + 1) {
    const int k = s.dim() + 1;
    auto subsets = column_subsets(n1_, k);
    std::size_t best = 0;
    for (std::size_t i = 1; i < s.pluecker().size(); ++i) {
      if (abs(s.pluecker()[i]) > abs(s.pluecker()[best])) best = i;
    }
    cols_ = subsets[best];
    rows_ = s.basis();
    for (int ci = 0; ci < k; ++ci) {
      const int col = cols_[ci];
      for (int r = ci + 1; r < k; ++r) {
        while (rows_[r][col] != 0) {
          std::int64_t q = rows_[ci][col] / rows_[r][col];
          for (int j = 0; j < n1_; ++j) rows_[ci][j] -= q * rows_[r][j];
          std::swap(rows_[ci], rows_[r]);
        }
      }
      if (rows_[ci][col] < 0) {
        for (auto& x : rows_[ci]) x = -x;
      }
    }
  }

  template <typename Visit>
  void for_each(std::int64_t bound, Visit&& visit) const {
    Coords acc(n1_, 0);
    recurse(0, bound, acc, 0, true, visit);
  }

 private:
  static std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
  }
  static std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

  template <typename Visit>
  void recurse(int level, std::int64_t bound, Coords& acc, std::int64_t g, bool all_zero,
               Visit& visit) const {
    const int k = static_cast<int>(rows_.size());
    if (level == k) {
      if (g != 1) return;
      for (auto x : acc) {
        if (x > bound || x < -bound) return;
      }
      visit(static_cast<const Coords&>(acc));
      return;
    }
    const auto& row = rows_[level];
    const std::int64_t pivot = row[cols_[level]];
    const std::int64_t base = acc[cols_[level]];
    std::int64_t lo = ceil_div(-bound - base, pivot);
    std::int64_t hi = floor_div(bound - base, pivot);
    if (all_zero) lo = std::max<std::int64_t>(lo, level == k - 1 ? 1 : 0);
    for (std::int64_t c = lo; c <= hi; ++c) {
      if (c != 0) {
        for (int j = 0; j < n1_; ++j) acc[j] += c * row[j];
      }
      recurse(level + 1, bound, acc, std::gcd(g, c), all_zero && c == 0, visit);
      if (c != 0) {
        for (int j = 0; j < n1_; ++j) acc[j] -= c * row[j];
      }
    }
  }

  int n1_;
  std::vector<int> cols_;
  std::vector<Coords> rows_;
};

}  // namespace

std::vector<ProjectivePoint> points_on_subspace(const LinearSubspace& s, std::int64_t b) {
  std::vector<ProjectivePoint> out;
  if (b < 1) return out;
  SubspaceLattice lattice(s);
  lattice.for_each(b, [&](const Coords& x) { out.push_back(normalize(std::span<const std::int64_t>(x))); });
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t count_points_on_subspace(const LinearSubspace& s, std::int64_t b) {
  std::uint64_t count = 0;
  if (b < 1) return 0;
  SubspaceLattice(s).for_each(b, [&](const Coords&) { ++count; });
  return count;
}

std::vector<ProjectivePoint> smallest_generators(const LinearSubspace& s) {
  std::int64_t bound = 1;
  for (const auto& r : s.basis()) {
    for (auto x : r) bound = std::max(bound, std::abs(x));
  }
  auto pts = points_on_subspace(s, bound);
  std::sort(pts.begin(), pts.end(), [](const ProjectivePoint& a, const ProjectivePoint& b) {
    if (a.height() != b.height()) return a.height() < b.height();
    return a.coords() < b.coords();
  });
  const int k = s.dim() + 1;
  std::vector<ProjectivePoint> chosen;
  ZMatrix rows;
  for (const auto& p : pts) {
    rows.push_back(p.to_mpz());
    if (linalg::rank(rows) == static_cast<int>(rows.size())) {
      chosen.push_back(p);
      if (static_cast<int>(chosen.size()) == k) break;
    } else {
      rows.pop_back();
    }
  }
  return chosen;
}

}  // namespace hypercount
