#include <algorithm>

#include "corpus.hpp"
#include "doctest.h"
#include "hypercount/enumerate.hpp"
#include "hypercount/errors.hpp"
#include "hypercount/linalg.hpp"
#include "oracles.hpp"

using namespace hypercount;

namespace {

CountReport run(const Form& f, std::int64_t b, Method m, int threads = 1) {
  CountOptions o;
  o.method = m;
  o.want_points = true;
  o.threads = threads;
  return count_points(f, b, o);
}

std::uint64_t bucket_sum(const CountReport& r) {
  std::uint64_t s = 0;
  for (const auto& [k, c] : r.dyadic_buckets) s += c;
  return s;
}

}  // namespace

TEST_CASE("quadric at b=1 against the full 3^4 scan") {
  auto f = parse_form("x0*x1 - x2*x3");
  auto expect = oracle::zeros(f, 1);
  for (Method m : {Method::Naive, Method::Sieved}) {
    auto r = run(f, 1, m);
    CHECK(r.total == expect.size());
    CHECK(oracle::coords(*r.points) == expect);
  }
}

TEST_CASE("Fermat cubic surface: all methods agree at b=10") {
  auto f = parse_form("x0^3+x1^3+x2^3+x3^3");
  auto expect = oracle::zeros(f, 10);
  for (Method m : {Method::Naive, Method::Sieved, Method::MeetInMiddle}) {
    auto r = run(f, 10, m);
    CHECK(r.total == expect.size());
    CHECK(oracle::coords(*r.points) == expect);
    CHECK(bucket_sum(r) == r.total);
    CHECK(r.method == m);
  }
}

TEST_CASE("positive definite forms have no points") {
  auto f = parse_form("x0^2+x1^2+x2^2+x3^2");
  for (std::int64_t b : {1, 5, 40}) {
    CHECK(count_points(f, b).total == 0);
  }
}

TEST_CASE("meet in the middle needs a separable form") {
  CountOptions o;
  o.method = Method::MeetInMiddle;
  CHECK_THROWS_AS(count_points(parse_form("x0*x1 - x1*x2 + x2*x3"), 5, o), MethodInapplicable);
}

TEST_CASE("memory cap is enforced, not truncated") {
  CountOptions o;
  o.method = Method::MeetInMiddle;
  o.memory_cap = 1000;
  CHECK_THROWS_AS(count_points(parse_form("x0^3+x1^3+x2^3+x3^3"), 50, o), MemoryBudgetExceeded);
}

TEST_CASE("separable split") {
  auto s = separable_split(parse_form("x0^3+x1^3+x2^3+x3^3+x4^3"));
  REQUIRE(s);
  CHECK(s->left.size() == 2);
  CHECK(s->right.size() == 3);
  auto t = separable_split(parse_form("x0*x2 - x1^2 + x3*x4"));
  REQUIRE(t);
  CHECK(t->left.size() == 2);
  CHECK(t->right.size() == 3);
  CHECK_FALSE(separable_split(parse_form("x0*x1 - x1*x2 + x2*x3")));
}

TEST_CASE("systems") {
  std::vector<Form> coord{parse_form("x0", 2), parse_form("x1", 2)};
  auto r = count_points_on_system(coord, 5, {.want_points = true});
  CHECK(r.total == 1);
  CHECK(r.points->front().coords() == Coords{0, 0, 1});

  std::vector<Form> sys{parse_form("x0*x1 - x2*x3"), parse_form("x0 - x1", 3)};
  auto expect = oracle::zeros(sys, 4, 3);
  auto got = count_points_on_system(sys, 3, {.want_points = true});
  CHECK(oracle::coords(*got.points) == expect);

  auto all = count_points_on_system(std::vector<Form>{}, 2, {}, 2);
  CHECK(all.total == oracle::points(3, 2, [](const oracle::Vec&) { return true; }).size());
  CHECK(all.total == 49);

  std::vector<Form> mixed{parse_form("x0*x1 - x2*x3"), parse_form("x0", 2)};
  CHECK_THROWS_AS(count_points_on_system(mixed, 3), DimensionMismatch);
}

TEST_CASE("property: methods agree with brute force on the corpus") {
  for (const auto& entry : corpus::forms()) {
    auto f = parse_form(entry.text);
    const std::int64_t b = f.num_vars() >= 5 ? 5 : 9;
    auto expect = oracle::zeros(f, b);
    std::vector<Method> methods{Method::Naive, Method::Sieved};
    if (entry.separable) methods.push_back(Method::MeetInMiddle);
    for (Method m : methods) {
      auto r = run(f, b, m);
      INFO(entry.text, " ", to_string(m));
      CHECK(r.total == expect.size());
      CHECK(oracle::coords(*r.points) == expect);
      CHECK(bucket_sum(r) == r.total);
    }
  }
}

TEST_CASE("property: thread count does not change results") {
  for (const auto& entry : corpus::forms()) {
    auto f = parse_form(entry.text);
    const std::int64_t b = f.num_vars() >= 5 ? 6 : 14;
    auto base = run(f, b, Method::Sieved, 1);
    for (int t : {4, 8}) {
      auto r = run(f, b, Method::Sieved, t);
      CHECK(r.total == base.total);
      CHECK(*r.points == *base.points);
      CHECK(r.dyadic_buckets == base.dyadic_buckets);
      if (entry.separable) CHECK(run(f, b, Method::MeetInMiddle, t).total == base.total);
    }
  }
}

TEST_CASE("property: permutation equivariance") {
  const char* forms[] = {"x0^2*x1 - x2^3 + x0*x1*x2 - x3^3", "x0*x1 - x2*x3", "x0^3 + 2*x1^3 - x2^3 - 2*x3^3"};
  std::vector<std::vector<int>> perms{{1, 0, 2, 3}, {3, 2, 1, 0}, {2, 3, 0, 1}, {1, 2, 3, 0}};
  for (const char* s : forms) {
    auto f = parse_form(s);
    auto base = run(f, 12, Method::Sieved);
    for (const auto& p : perms) {
      auto g = permute_variables(f, p);
      auto r = run(g, 12, Method::Sieved);
      CHECK(r.total == base.total);
      std::vector<oracle::Vec> mapped;
      for (const auto& x : *base.points) {
        oracle::Vec v(4);
        for (int i = 0; i < 4; ++i) v[p[i]] = x.coords()[i];
        mapped.push_back(normalize(std::span<const std::int64_t>(v)).coords());
      }
      std::sort(mapped.begin(), mapped.end());
      CHECK(oracle::coords(*r.points) == mapped);
    }
  }
}

TEST_CASE("property: monotone in the bound") {
  auto f = parse_form("x0^2 + x1^2 - x2^2 - x3^2");
  std::uint64_t prev = 0;
  for (std::int64_t b = 1; b <= 30; ++b) {
    auto t = count_points(f, b).total;
    CHECK(t >= prev);
    prev = t;
  }
}

TEST_CASE("subspace points appear in the count") {
  auto f = parse_form("x0^3+x1^3+x2^3+x3^3");
  auto line = subspace_from_rows(linalg::to_zmatrix({{1, -1, 0, 0}, {0, 0, 1, -1}}));
  auto all = run(f, 15, Method::Sieved);
  for (const auto& p : points_on_subspace(line, 15)) {
    CHECK(std::binary_search(all.points->begin(), all.points->end(), p));
  }
}

TEST_CASE("trivial upper envelope total <= C b^{dim+1}") {
  auto f = parse_form("x0*x1 - x2*x3");
  for (std::int64_t b : {5, 10, 20, 40}) {
    CHECK(static_cast<double>(count_points(f, b).total) <= 8.0 * b * b * b);
  }
}

TEST_CASE("wide coefficients take the 128-bit and big-integer paths") {
  auto f = parse_form("x0^3 - 1000000000000*x1^3 + x0*x1*x2 - x2^3", 2);
  auto g = parse_form("x0^7 - 100000000000000000000000000000000*x1^7 + x1^3*x2^4 - x2^7", 2);
  for (const auto& h : {f, g}) {
    auto expect = oracle::zeros(h, 12);
    for (Method m : {Method::Naive, Method::Sieved}) {
      auto r = run(h, 12, m);
      CHECK(oracle::coords(*r.points) == expect);
    }
  }
}

TEST_CASE("merge is associative over disjoint pieces") {
  CountReport a, b, c;
  a.total = 2;
  a.dyadic_buckets = {{0, 1}, {1, 1}};
  b.total = 1;
  b.dyadic_buckets = {{1, 1}};
  c.total = 3;
  c.dyadic_buckets = {{2, 3}};
  auto left = a;
  left.merge(b);
  left.merge(c);
  auto bc = b;
  bc.merge(c);
  auto right = a;
  right.merge(bc);
  CHECK(left.total == right.total);
  CHECK(left.dyadic_buckets == right.dyadic_buckets);
}

TEST_CASE("singular point search") {
  CHECK(singular_point_search(parse_form("x0^3+x1^3+x2^3+x3^3"), 20).empty());
  auto s = singular_point_search(parse_form("x0*x1^2", 2), 5);
  CHECK(std::find(s.begin(), s.end(), normalize(std::vector<std::int64_t>{1, 0, 0})) != s.end());
  auto f = parse_form("(x0+x1)^2*x2");
  auto t = singular_point_search(f, 3);
  CHECK_FALSE(t.empty());
  auto grad = gradient(f);
  CHECK(oracle::coords(t) == oracle::zeros(grad, 3, 3));
}
