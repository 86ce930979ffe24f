// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any
// failure.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "corpus.hpp"
#include "hypercount/bounds.hpp"
#include "hypercount/enumerate.hpp"
#include "hypercount/errors.hpp"
#include "hypercount/linear_loci.hpp"
#include "hypercount/projective.hpp"

using namespace hypercount;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::vector<std::pair<std::int64_t, std::uint64_t>> sweep(const Form& f,
                                                          std::vector<std::int64_t> bounds,
                                                          const CountOptions& opts) {
  std::vector<std::pair<std::int64_t, std::uint64_t>> s;
  for (auto b : bounds) s.emplace_back(b, count_points(f, b, opts).total);
  return s;
}

std::string series_text(const std::vector<std::pair<std::int64_t, std::uint64_t>>& s) {
  std::ostringstream o;
  for (auto& [b, n] : s) o << " N(" << b << ")=" << n;
  return o.str();
}

Outcome quadric_benchmark() {
  CountOptions opts;
  opts.method = Method::Sieved;
  opts.threads = 4;
  auto s = sweep(parse_form("x0*x1 - x2*x3"), {100, 200, 400, 800}, opts);
  auto fit = fit_exponent(s);
  std::ostringstream o;
  o << "slope=" << fit.slope << " (want [1.95, 2.20]);" << series_text(s);
  return {fit.slope >= 1.95 && fit.slope <= 2.20, o.str()};
}

Outcome fermat_threefold() {
  CountOptions opts;
  opts.method = Method::MeetInMiddle;
  opts.threads = 4;
  auto s = sweep(parse_form("x0^3 + x1^3 + x2^3 + x3^3 + x4^3"), {20, 40, 80}, opts);
  auto fit = fit_exponent(s);
  std::ostringstream o;
  o << "slope=" << fit.slope << " (want <= 3.5);" << series_text(s);
  return {fit.slope <= 3.5, o.str()};
}

Outcome lp_sweep() {
  int cases = 0, bad = 0;
  double worst_gap = 0;
  for (int a = 0; a <= 3; ++a) {
    for (int b = 0; b <= 3; ++b) {
      for (int c = 0; c <= 3; ++c) {
        for (double H = 2; H <= 1024; H *= 2) {
          ++cases;
          double bound = lp_max_bound(a, b, c, H);
          double orc = lp_max_oracle(a, b, c, H, 64);
          auto e = lp_corner_exponents(a, b, c);
          double corner = 0;
          for (const auto& x : e) corner = std::max(corner, std::pow(H, x.get_d()));
          double gap = (bound - orc) / bound;
          worst_gap = std::max(worst_gap, gap);
          if (orc > bound || bound != corner || gap > 0.05) ++bad;
        }
      }
    }
  }
  std::ostringstream o;
  o << cases << " cases, " << bad << " violations, worst relative gap " << worst_gap;
  return {bad == 0, o.str()};
}

Outcome intersection_table() {
  bool ok = true;
  const int r3[] = {0, 1, -1, 3}, r4[] = {0, 1, -2, 7};
  for (int r = -1; r <= 2; ++r) {
    ok &= intersection_degree(3, r) == r3[r + 1];
    ok &= intersection_degree(4, r) == r4[r + 1];
  }
  int checked = 0;
  for (int d = 2; d <= 10; ++d) {
    for (int r = -1; r <= 8; ++r) {
      mpz_class p;
      mpz_pow_ui(p.get_mpz_t(), mpz_class(1 - d).get_mpz_t(), r + 1);
      mpz_class num = 1 - p;
      ok &= num % d == 0 && intersection_degree(d, r) * d == num;
      ++checked;
    }
  }
  return {ok, "tables for d=3,4 and " + std::to_string(checked) + " integrality checks"};
}

Outcome fermat_lines() {
  Form f = parse_form("x0^3 + x1^3 + x2^3 + x3^3");
  auto lines = rational_lines(f, 4);
  bool ok = lines.size() == 3;
  for (const auto& l : lines) ok &= contains_subspace(f, l);
  // the three pairings x_i + x_j = x_k + x_l = 0
  for (auto [i, j, k, l] : {std::array{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}}) {
    ZMatrix rows(2, std::vector<mpz_class>(4, 0));
    rows[0][i] = 1;
    rows[0][j] = -1;
    rows[1][k] = 1;
    rows[1][l] = -1;
    ok &= std::find(lines.begin(), lines.end(), subspace_from_rows(rows)) != lines.end();
  }
  ok &= fermat_plane_count(1, 3) == 27;
  return {ok, std::to_string(lines.size()) + " rational lines of Plücker height <= 4"};
}

Outcome quadric_no_planes() {
  Form f = parse_form("x0*x1 + x2*x3 + x4^2");
  auto planes = rational_planes(f, 8);
  auto sing = singular_point_search(f, 20);
  std::ostringstream o;
  o << planes.size() << " planes up to height 8, " << sing.size()
    << " singular points up to height 20";
  return {planes.empty() && sing.empty(), o.str()};
}

Outcome cone_vs_filter() {
  Form f = parse_form("x0^3 + x1^3 + x2^3 + x3^3");
  auto x = normalize(Coords{1, -1, 0, 0});
  bool ok = true;
  std::ostringstream o;
  for (std::int64_t h : {1, 4, 9}) {
    auto via_cone = lines_through_point(f, x, h);
    std::vector<LinearSubspace> filtered;
    for (const auto& l : rational_lines(f, h)) {
      if (l.contains(x)) filtered.push_back(l);
    }
    ok &= via_cone == filtered;
    o << "h=" << h << ": " << via_cone.size() << " vs " << filtered.size() << "; ";
  }
  ZMatrix rows{{1, -1, 0, 0}, {0, 0, 1, -1}};
  auto target = subspace_from_rows(rows);
  auto lines = lines_through_point(f, x, 4);
  bool has = std::find(lines.begin(), lines.end(), target) != lines.end();
  o << "contains {x0+x1=0, x2+x3=0}: " << (has ? "yes" : "no");
  return {ok && has, o.str()};
}

// All points of a line with height < limit, by solving p = u*b0 + v*b1 on
// two columns with a nonzero minor.
bool line_has_point_below(const LinearSubspace& s, std::int64_t limit) {
  const auto& b = s.basis();
  const int len = static_cast<int>(b[0].size());
  int ci = -1, cj = -1;
  std::int64_t det = 0;
  for (int i = 0; i < len && det == 0; ++i) {
    for (int j = i + 1; j < len && det == 0; ++j) {
      det = b[0][i] * b[1][j] - b[0][j] * b[1][i];
      ci = i;
      cj = j;
    }
  }
  const std::int64_t ad = std::abs(det);
  std::int64_t ubound = (std::abs(b[1][ci]) + std::abs(b[1][cj])) * limit / ad + 1;
  std::int64_t vbound = (std::abs(b[0][ci]) + std::abs(b[0][cj])) * limit / ad + 1;
  for (std::int64_t u = -ubound; u <= ubound; ++u) {
    for (std::int64_t v = -vbound; v <= vbound; ++v) {
      if (u == 0 && v == 0) continue;
      std::int64_t h = 0;
      for (int k = 0; k < len; ++k) h = std::max(h, std::abs(u * b[0][k] + v * b[1][k]));
      if (h < limit) return true;
    }
  }
  return false;
}

Outcome generator_quality() {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::int64_t> entry(-9, 9);
  int lines = 0, below = 0, above = 0, not_minimal = 0;
  double min_ratio = 1e9, max_ratio = 0;
  while (lines < 200) {
    ZMatrix rows(2, std::vector<mpz_class>(5));
    for (auto& r : rows) {
      for (auto& x : r) x = static_cast<long>(entry(rng));
    }
    LinearSubspace s;
    try {
      s = subspace_from_rows(rows);
    } catch (const DependentPoints&) {
      continue;
    }
    ++lines;
    auto g = smallest_generators(s);
    mpz_class prod = mpz_class(static_cast<long>(g[0].height())) * static_cast<long>(g[1].height());
    double ratio = mpq_class(prod, s.height()).get_d();
    min_ratio = std::min(min_ratio, ratio);
    max_ratio = std::max(max_ratio, ratio);
    if (prod < s.height()) ++below;
    if (prod > 16 * s.height()) ++above;
    if (!s.contains(g[0]) || line_has_point_below(s, g[0].height())) ++not_minimal;
  }
  std::ostringstream o;
  o << lines << " lines; product/H ratio in [" << min_ratio << ", " << max_ratio << "]; "
    << below << " below H, " << above << " above 16H, " << not_minimal
    << " non-minimal first generators";
  return {below == 0 && above == 0 && not_minimal == 0, o.str()};
}

Outcome closed_forms() {
  bool ok = true;
  for (int d = 3; d <= 12; ++d) ok &= fermat_plane_count(1, d) == 3 * d * d;
  ok &= line_count_bounds(3) == LineCountBounds{27, 27};
  auto lc4 = line_count_bounds(4);
  ok &= lc4 == LineCountBounds{80, 76};
  ok &= lc4.flecnodal > 64 && lc4.segre > 64;
  return {ok, "3d^2 for d=3..12, bounds at d=3 and d=4"};
}

Outcome cross_method() {
  int forms = 0, compared = 0, mismatches = 0;
  for (const auto& e : corpus::forms()) {
    Form f = parse_form(e.text);
    if (f.ambient_dim() > 4) continue;
    ++forms;
    for (std::int64_t b : {5, 12, 20}) {
      CountOptions opts;
      opts.want_points = true;
      opts.method = Method::Naive;
      auto ref = count_points(f, b, opts);
      std::vector<Method> methods{Method::Sieved};
      if (e.separable) methods.push_back(Method::MeetInMiddle);
      for (auto m : methods) {
        for (int t : {1, 4, 8}) {
          opts.method = m;
          opts.threads = t;
          auto r = count_points(f, b, opts);
          ++compared;
          if (r.total != ref.total || r.dyadic_buckets != ref.dyadic_buckets ||
              r.points != ref.points) {
            ++mismatches;
          }
        }
      }
    }
  }
  std::ostringstream o;
  o << forms << " forms, " << compared << " comparisons against naive, " << mismatches
    << " mismatches";
  return {mismatches == 0, o.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"quadric benchmark slope", quadric_benchmark},
      {"Fermat cubic threefold slope (MitM)", fermat_threefold},
      {"corner bound vs grid oracle", lp_sweep},
      {"intersection degree table", intersection_table},
      {"Fermat cubic surface rational lines", fermat_lines},
      {"no planes on smooth quadric in P^4", quadric_no_planes},
      {"cone equations vs filtered line search", cone_vs_filter},
      {"smallest generator quality", generator_quality},
      {"closed-form consistency", closed_forms},
      {"cross-method exactness", cross_method},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!out.pass) ++failed;
    std::printf("%s %2zu %s: %s [%.1fs]\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
