#include "hypercount/linear_loci.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <cmath>
#include <map>
#include <set>

#include "hypercount/enumerate.hpp"
#include "hypercount/errors.hpp"
#include "hypercount/linalg.hpp"

namespace hypercount {

namespace {

ZMatrix rows_of(const std::vector<Coords>& pts) {
  return linalg::to_zmatrix(pts);
}

using Key = std::vector<std::int64_t>;

// Reduced, sign-normalized Plücker vector of integer rows; nullopt when the
// rows are dependent. Minors come from fraction-free elimination in 128-bit
// arithmetic while the entries are small, else from the exact routine.
std::optional<Key> small_pluecker(const std::vector<Coords>& rows) {
  const int k = static_cast<int>(rows.size());
  const int n1 = static_cast<int>(rows[0].size());
  std::int64_t peak = 0;
  for (const auto& r : rows) {
    for (auto x : r) peak = std::max<std::int64_t>(peak, std::abs(x));
  }
  Key key;
  if (k > 6 || peak > (1 << 16)) {
    ZMatrix z = rows_of(rows);
    if (linalg::rank(z) < k) return std::nullopt;
    for (const auto& v : pluecker_coordinates(z)) {
      if (!v.fits_slong_p()) throw InvalidArgument("Plücker coordinate exceeds 64-bit range");
      key.push_back(v.get_si());
    }
    return key;
  }
  std::vector<int> cols(k);
  std::iota(cols.begin(), cols.end(), 0);
  std::array<std::array<__int128, 8>, 8> a;
  for (;;) {
    for (int r = 0; r < k; ++r) {
      for (int c = 0; c < k; ++c) a[r][c] = rows[r][cols[c]];
    }
    // Bareiss
    __int128 prev = 1;
    int sign = 1;
    bool zero = false;
    for (int c = 0; c < k && !zero; ++c) {
      int piv = c;
      while (piv < k && a[piv][c] == 0) ++piv;
      if (piv == k) {
        zero = true;
        break;
      }
      if (piv != c) {
        std::swap(a[piv], a[c]);
        sign = -sign;
      }
      for (int r = c + 1; r < k; ++r) {
        for (int q = c + 1; q < k; ++q) a[r][q] = (a[r][q] * a[c][c] - a[r][c] * a[c][q]) / prev;
      }
      prev = a[c][c];
    }
    key.push_back(zero ? 0 : static_cast<std::int64_t>(sign * a[k - 1][k - 1]));
    int i = k - 1;
    while (i >= 0 && cols[i] == n1 - k + i) --i;
    if (i < 0) break;
    ++cols[i];
    for (int j = i + 1; j < k; ++j) cols[j] = cols[j - 1] + 1;
  }
  std::int64_t g = 0;
  for (auto x : key) g = std::gcd(g, x);
  if (g == 0) return std::nullopt;
  for (auto x : key) {
    if (x != 0) {
      if (x < 0) g = -g;
      break;
    }
  }
  for (auto& x : key) x /= g;
  return key;
}

std::int64_t key_height(const Key& k) {
  std::int64_t h = 0;
  for (auto x : k) h = std::max<std::int64_t>(h, std::abs(x));
  return h;
}

// f restricted to span(rows) has degree ≤ d in each parameter, so it vanishes
// identically iff it vanishes on the grid {0..d}^k.
class SpanTester {
 public:
  explicit SpanTester(const Form& f) : f_(f), nvars_(f.num_vars()) {
    log_l1_ = std::log2(std::max(1.0, f.coefficient_l1().get_d()));
    for (const auto& [e, c] : f.terms()) {
      if (!c.fits_slong_p()) fast_ = false;
      coefs_.push_back(fast_ ? c.get_si() : 0);
      exps_.insert(exps_.end(), e.begin(), e.end());
    }
  }

  bool contains(const std::vector<Coords>& rows) const {
    const int k = static_cast<int>(rows.size());
    const int d = f_.degree();
    std::vector<int> c(k, 0);
    Coords v(nvars_);
    for (;;) {
      std::int64_t peak = 0;
      for (int i = 0; i < nvars_; ++i) {
        std::int64_t s = 0;
        for (int r = 0; r < k; ++r) s += c[r] * rows[r][i];
        v[i] = s;
        peak = std::max<std::int64_t>(peak, std::abs(s));
      }
      if (!vanishes(v, peak)) return false;
      int p = k - 1;
      while (p >= 0 && c[p] == d) {
        c[p] = 0;
        --p;
      }
      if (p < 0) return true;
      ++c[p];
    }
  }

 private:
  bool vanishes(const Coords& v, std::int64_t peak) const {
    const bool small = fast_ && log_l1_ + f_.degree() * std::log2(std::max<double>(1.0, peak)) < 118.0;
    if (!small) return f_.evaluate(std::span<const std::int64_t>(v)) == 0;
    __int128 sum = 0;
    const int* e = exps_.data();
    for (std::size_t t = 0; t < coefs_.size(); ++t, e += nvars_) {
      __int128 term = coefs_[t];
      for (int i = 0; i < nvars_; ++i) {
        for (int q = 0; q < e[i]; ++q) term *= v[i];
      }
      sum += term;
    }
    return sum == 0;
  }

  const Form& f_;
  int nvars_;
  bool fast_ = true;
  double log_l1_ = 0.0;
  std::vector<std::int64_t> coefs_;
  std::vector<int> exps_;
};

mpz_class binomial(int n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

// Largest integer u with u^k ≤ x (x ≥ 0), with a little slack upwards so a
// rounding error can only enlarge the search.
std::int64_t root_floor(double x, int k) {
  if (x < 1.0) return 0;
  double r = std::pow(x, 1.0 / k) * (1.0 + 1e-12);
  return static_cast<std::int64_t>(std::floor(r));
}

// Gradient of f at p as int64 (nullopt if any entry overflows or all vanish).
std::optional<Coords> tangent_row(const std::vector<Form>& grad, const Coords& p) {
  Coords out;
  bool nonzero = false;
  for (const auto& g : grad) {
    mpz_class v = g.evaluate(std::span<const std::int64_t>(p));
    if (!v.fits_slong_p()) return std::nullopt;
    out.push_back(v.get_si());
    nonzero = nonzero || v != 0;
  }
  if (!nonzero) return std::nullopt;
  return out;
}

bool on_hyperplanes(const std::vector<Coords>& rows, const Coords& p) {
  for (const auto& r : rows) {
    __int128 s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) s += static_cast<__int128>(r[i]) * p[i];
    if (s != 0) return false;
  }
  return true;
}

struct Partial {
  std::vector<Coords> points;
  std::vector<Coords> tangents;
  double product = 1.0;
  std::int64_t last = 0;
};

// Pareto set of partial spans: a representative is dropped only when another
// has both a smaller-or-equal height product and last height, since such a
// one admits every continuation the first admits.
class Frontier {
 public:
  void offer(const Key& key, Partial p) {
    auto& list = entries_[key];
    for (const auto& q : list) {
      if (q.product <= p.product && q.last <= p.last) return;
    }
    std::erase_if(list, [&](const Partial& q) { return p.product <= q.product && p.last <= q.last; });
    list.push_back(std::move(p));
  }

  std::vector<std::pair<Key, Partial>> take() {
    std::vector<std::pair<Key, Partial>> out;
    for (auto& [k, list] : entries_) {
      for (auto& p : list) out.emplace_back(k, std::move(p));
    }
    entries_.clear();
    return out;
  }

 private:
  std::map<Key, std::vector<Partial>> entries_;
};

class PointSource {
 public:
  PointSource(const Form& f, std::int64_t level0, std::int64_t max_bound, int threads) : f_(f) {
    // Cache every point of X up to max_bound when that enumeration is cheap,
    // otherwise only up to the level-0 bound.
    const double work = std::pow(2.0 * max_bound + 1.0, f.ambient_dim());
    cached_bound_ = work <= 4e8 ? max_bound : level0;
    CountOptions opts;
    opts.want_points = true;
    opts.threads = threads;
    auto report = count_points(f, std::max<std::int64_t>(cached_bound_, 1), opts);
    cache_ = std::move(*report.points);
    std::stable_sort(cache_.begin(), cache_.end(), [](const auto& a, const auto& b) {
      return a.height() < b.height();
    });
  }

  // Points of X with lo ≤ H ≤ hi on all the given hyperplanes.
  template <typename Visit>
  void for_each(std::int64_t lo, std::int64_t hi, const std::vector<Coords>& hyperplanes,
                Visit&& visit) const {
    if (hi <= cached_bound_) {
      auto it = std::lower_bound(cache_.begin(), cache_.end(), lo,
                                 [](const ProjectivePoint& p, std::int64_t v) { return p.height() < v; });
      for (; it != cache_.end() && it->height() <= hi; ++it) {
        if (on_hyperplanes(hyperplanes, it->coords())) visit(it->coords());
      }
      return;
    }
    const int n1 = f_.num_vars();
    ZMatrix span;
    if (hyperplanes.empty()) {
      span = linalg::to_zmatrix(std::vector<Coords>(n1, Coords(n1, 0)));
      for (int i = 0; i < n1; ++i) span[i][i] = 1;
    } else {
      span = linalg::integer_kernel(linalg::to_zmatrix(hyperplanes));
    }
    if (span.empty()) return;
    auto v = subspace_from_rows(span);
    for (const auto& p : points_on_subspace(v, hi)) {
      if (p.height() < lo) continue;
      if (f_.evaluate(p.span()) == 0) visit(p.coords());
    }
  }

 private:
  const Form& f_;
  std::int64_t cached_bound_ = 0;
  std::vector<ProjectivePoint> cache_;
};

}  // namespace

bool contains_subspace(const Form& f, const LinearSubspace& s) {
  if (s.ambient_dim() != f.ambient_dim()) {
    throw DimensionMismatch("subspace and form live in different spaces");
  }
  return restrict_to_span(f, s.basis_mpz()).empty();
}

ProjectivePoint ConeEquations::pullback(std::span<const std::int64_t> b, std::int64_t a) const {
  const int n1 = transform.size();
  if (static_cast<int>(b.size()) != n1 - 2) throw DimensionMismatch("cone coordinate length");
  std::vector<mpz_class> y(n1, 0);
  y[0] = static_cast<long>(a);
  for (std::size_t i = 0; i < b.size(); ++i) y[i + 2] = static_cast<long>(b[i]);
  return normalize(std::span<const mpz_class>(transform.apply(y)));
}

LinearSubspace ConeEquations::line_through(std::span<const std::int64_t> b) const {
  std::vector<ProjectivePoint> pts{base_point, pullback(b)};
  return subspace_from_points(pts);
}

ConeEquations cone_at_point(const Form& f, const ProjectivePoint& x) {
  if (f.ambient_dim() < 2) throw InvalidArgument("cone equations need n >= 2");
  NormalForm nf = normal_form_at_point(f, x);
  auto parts = expand_in_first_variable(nf.form);
  const int n = f.ambient_dim();
  std::vector<Form> eqs;
  std::vector<bool> degenerate;
  for (int i = 2; i <= f.degree(); ++i) {
    TermMap t;
    for (const auto& [e, c] : parts[i - 1].terms()) {
      if (e[0] != 0) continue;  // y1 = 0
      t.emplace(Exponents(e.begin() + 1, e.end()), c);
    }
    Form eq(n - 2, i, std::move(t));
    degenerate.push_back(eq.is_zero());
    eqs.push_back(std::move(eq));
  }
  return ConeEquations{x, std::move(nf.transform), std::move(nf.form), std::move(eqs),
                       std::move(degenerate)};
}

std::vector<LinearSubspace> lines_through_point(const Form& f, const ProjectivePoint& x,
                                                std::int64_t h, int threads) {
  if (h < 1) throw InvalidArgument("height bound must be at least 1");
  ConeEquations cone = cone_at_point(f, x);
  const int n1 = f.num_vars();

  // A line L ∋ x with H(L) ≤ h has a lattice basis {x, w}; shifting w by a
  // multiple of x gives |w_i| ≤ H(x)/2 at the coordinate where |x_i| = H(x),
  // and then x_i w_j = p_ij + x_j w_i bounds every |w_j| by h/H(x) + H(x)/2.
  const std::int64_t hx = x.height();
  const mpz_class wbound = (mpz_class(2) * h + mpz_class(hx) * hx) / (2 * hx);

  // w lies in the tangent hyperplane, so w = M (a, 0, b) and b is read off
  // rows 2..n of M^{-1}, scaled by a common denominator.
  const QMatrix& inv = cone.transform.inverse_matrix();
  mpz_class den = 1;
  for (int r = 2; r < n1; ++r) {
    for (const auto& q : inv[r]) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
  }
  mpz_class row_max = 0;
  for (int r = 2; r < n1; ++r) {
    mpz_class s = 0;
    for (const auto& q : inv[r]) s += abs(mpq_class(q * den).get_num());
    if (s > row_max) row_max = s;
  }
  mpz_class bb = row_max * wbound;
  if (bb < 1) bb = 1;
  if (bb > mpz_class(1) << 30) throw InvalidArgument("direction bound too large for enumeration");

  CountOptions opts;
  opts.want_points = true;
  opts.threads = threads;
  auto sols = count_points_on_system(cone.equations, bb.get_si(), opts, n1 - 3);
  std::set<LinearSubspace> lines;
  for (const auto& b : *sols.points) {
    auto line = cone.line_through(b.span());
    if (line.height() <= h) lines.insert(std::move(line));
  }
  return {lines.begin(), lines.end()};
}

std::vector<LinearSubspace> rational_subspaces(const Form& f, int m, std::int64_t h, int threads) {
  const int n = f.ambient_dim();
  if (m < 1 || m >= n) throw InvalidArgument("subspace dimension must satisfy 1 <= m < n");
  if (h < 1) throw InvalidArgument("height bound must be at least 1");

  const double cap = std::sqrt(binomial(n + 1, m + 1).get_d()) * static_cast<double>(h);
  const std::int64_t level0 = root_floor(cap, m + 1);
  const std::int64_t max_bound = root_floor(cap, 1);
  PointSource source(f, level0, max_bound, threads);
  const auto grad = gradient(f);

  const SpanTester tester(f);

  std::map<Key, std::vector<Coords>> found;
  std::vector<std::pair<Key, Partial>> level;
  source.for_each(1, level0, {}, [&](const Coords& p) {
    Partial part;
    part.points.push_back(p);
    if (auto t = tangent_row(grad, p)) part.tangents.push_back(*t);
    for (auto c : p) part.last = std::max<std::int64_t>(part.last, std::abs(c));
    part.product = static_cast<double>(part.last);
    level.emplace_back(p, std::move(part));
  });

  for (int j = 1; j <= m; ++j) {
    Frontier next;
    for (const auto& [span, part] : level) {
      const std::int64_t hi = root_floor(cap / part.product, m + 1 - j);
      if (hi < part.last) continue;
      source.for_each(part.last, hi, part.tangents, [&](const Coords& p) {
        std::vector<Coords> rows = part.points;
        rows.push_back(p);
        auto key = small_pluecker(rows);
        if (!key) return;  // p already in the span
        if (j == m && (key_height(*key) > h || found.count(*key))) return;
        if (!tester.contains(rows)) return;
        if (j == m) {
          found.emplace(std::move(*key), std::move(rows));
          return;
        }
        Partial q;
        q.points = std::move(rows);
        q.tangents = part.tangents;
        if (auto t = tangent_row(grad, p)) q.tangents.push_back(*t);
        for (auto c : p) q.last = std::max<std::int64_t>(q.last, std::abs(c));
        q.product = part.product * static_cast<double>(q.last);
        next.offer(*key, std::move(q));
      });
    }
    if (j < m) level = next.take();
  }
  std::vector<LinearSubspace> out;
  for (const auto& [key, rows] : found) out.push_back(subspace_from_rows(rows_of(rows)));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<LinearSubspace> rational_lines(const Form& f, std::int64_t h, int threads) {
  return rational_subspaces(f, 1, h, threads);
}

std::vector<LinearSubspace> rational_planes(const Form& f, std::int64_t h, int threads) {
  if (f.ambient_dim() < 3) throw InvalidArgument("plane search needs n >= 3");
  return rational_subspaces(f, 2, h, threads);
}

AttributionReport attribute_points(const Form& f, std::int64_t b, std::int64_t h, int threads) {
  if (b < 1 || h < 1) throw InvalidArgument("bounds must be at least 1");
  AttributionReport rep;
  rep.bound = b;
  rep.cover_height_bound = h;

  std::vector<LinearSubspace> subs;
  if (f.ambient_dim() >= 2) {
    auto lines = rational_lines(f, h, threads);
    subs.insert(subs.end(), lines.begin(), lines.end());
  }
  if (f.ambient_dim() >= 3) {
    auto planes = rational_planes(f, h, threads);
    subs.insert(subs.end(), planes.begin(), planes.end());
  }

  CountOptions opts;
  opts.want_points = true;
  opts.threads = threads;
  auto all = count_points(f, b, opts);
  rep.total = all.total;

  std::vector<std::uint64_t> counts(subs.size(), 0);
  for (const auto& p : *all.points) {
    std::uint64_t mult = 0;
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i].contains(p)) {
        ++counts[i];
        ++mult;
      }
    }
    if (mult == 0) {
      ++rep.residual;
    } else {
      ++rep.covered;
      rep.overcount += mult - 1;
    }
  }
  for (std::size_t i = 0; i < subs.size(); ++i) {
    for (std::size_t k = i + 1; k < subs.size(); ++k) {
      if (auto meet = intersect(subs[i], subs[k])) {
        rep.pairwise_overlap += count_points_on_subspace(*meet, b);
      }
    }
  }
  for (std::size_t i = 0; i < subs.size(); ++i) rep.subspaces.push_back({subs[i], counts[i]});
  return rep;
}

}  // namespace hypercount
