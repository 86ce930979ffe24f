#include <random>

#include "doctest.h"
#include "hypercount/errors.hpp"
#include "hypercount/form.hpp"
#include "hypercount/linalg.hpp"
#include "hypercount/transform.hpp"

using namespace hypercount;

namespace {

std::vector<std::int64_t> random_vec(std::mt19937_64& rng, int len, int lim) {
  std::uniform_int_distribution<int> d(-lim, lim);
  std::vector<std::int64_t> v(len);
  for (auto& x : v) x = d(rng);
  return v;
}

const char* kCorpus[] = {
    "x0^3+x1^3+x2^3+x3^3",
    "x0*x1 - x2*x3",
    "x0*x1 + x2*x3 + x4^2",
    "2*x0^2*x1 - 3*x1*x2^2 + x2^3 + 5*x0*x1*x2",
    "x0^4 - x1^4 + 7*x2^2*x3^2 - x0*x1*x2*x3",
    "(x0+x1)^2*x2",
};

}  // namespace

TEST_CASE("parse basic forms") {
  auto f = parse_form("x0^3+x1^3+x2^3+x3^3");
  CHECK(f.ambient_dim() == 3);
  CHECK(f.degree() == 3);
  CHECK(f.num_terms() == 4);
  for (const auto& [e, c] : f.terms()) CHECK(c == 1);

  auto q = parse_form("x0*x1 - x2*x3");
  CHECK(q.ambient_dim() == 3);
  CHECK(q.degree() == 2);
  CHECK(q.num_terms() == 2);
  CHECK(q.coefficient_norm() == 1);
}

TEST_CASE("parse rejects mixed degrees and reports both") {
  try {
    parse_form("x0^2 + x1");
    FAIL("expected an error");
  } catch (const MixedDegreeError& e) {
    CHECK(e.first() == 2);
    CHECK(e.second() == 1);
    CHECK(std::string(e.what()) == "mixed degrees 2 and 1");
  }
}

TEST_CASE("parse syntax errors") {
  CHECK_THROWS_AS(parse_form("x0^"), ParseError);
  CHECK_THROWS_AS(parse_form("x0 + * x1"), ParseError);
  CHECK_THROWS_AS(parse_form("y0 + x1"), ParseError);
  CHECK_THROWS_AS(parse_form(""), ParseError);
  CHECK_THROWS_AS(parse_form("x0 - x0"), ParseError);
  CHECK_THROWS_AS(parse_form("x0 + x5", 3), DimensionMismatch);
}

TEST_CASE("parse expands products and collects terms") {
  auto f = parse_form("(x0+x1)^2 - x0^2 - x1^2");
  CHECK(f.num_terms() == 1);
  CHECK(f == parse_form("2*x0*x1"));
  CHECK(parse_form("x0*x1", 3).ambient_dim() == 3);
  CHECK(parse_form("  3 * x0 ^ 2 * x1 ").coefficient_norm() == 3);
  CHECK(parse_form("-x0^2 + 123456789012345678901234567890*x1^2").coefficient_norm() ==
        mpz_class("123456789012345678901234567890"));
}

TEST_CASE("to_string round trips through the parser") {
  for (const char* s : kCorpus) {
    auto f = parse_form(s);
    CHECK(parse_form(f.to_string(), f.ambient_dim()) == f);
  }
}

TEST_CASE("evaluate examples") {
  auto fermat = parse_form("x0^3+x1^3+x2^3+x3^3");
  std::vector<std::int64_t> v1{1, -1, 0, 0}, v2{1, 1, 1, 0};
  CHECK(fermat.evaluate(std::span<const std::int64_t>(v1)) == 0);
  CHECK(fermat.evaluate(std::span<const std::int64_t>(v2)) == 3);
  auto q = parse_form("x0*x1 - x2*x3");
  std::vector<std::int64_t> v3{2, 3, 1, 6};
  CHECK(q.evaluate(std::span<const std::int64_t>(v3)) == 0);
  std::vector<std::int64_t> bad{1, 2, 3};
  CHECK_THROWS_AS(q.evaluate(std::span<const std::int64_t>(bad)), DimensionMismatch);
}

TEST_CASE("evaluate does not overflow") {
  auto f = parse_form("x0^5 + x1^5", 1);
  std::vector<std::int64_t> v{std::int64_t{1} << 40, 1};
  mpz_class expect = mpz_class(1) << 200;
  expect += 1;
  CHECK(f.evaluate(std::span<const std::int64_t>(v)) == expect);
}

TEST_CASE("gradient examples") {
  auto g = gradient(parse_form("x0^3", 3));
  REQUIRE(g.size() == 4);
  CHECK(g[0] == parse_form("3*x0^2", 3));
  for (int i = 1; i < 4; ++i) CHECK(g[i].is_zero());

  auto h = gradient(parse_form("x0*x1 - x2*x3"));
  CHECK(h[0] == parse_form("x1", 3));
  CHECK(h[1] == parse_form("x0", 3));
  CHECK(h[2] == parse_form("-x3", 3));
  CHECK(h[3] == parse_form("-x2", 3));
}

TEST_CASE("property: Euler identity and homogeneity") {
  std::mt19937_64 rng(7);
  for (const char* s : kCorpus) {
    auto f = parse_form(s);
    auto g = gradient(f);
    for (int trial = 0; trial < 50; ++trial) {
      auto v = random_vec(rng, f.num_vars(), 30);
      mpz_class lhs = 0;
      for (int i = 0; i < f.num_vars(); ++i) lhs += v[i] * g[i].evaluate(std::span<const std::int64_t>(v));
      mpz_class fv = f.evaluate(std::span<const std::int64_t>(v));
      CHECK(lhs == f.degree() * fv);

      std::int64_t lam = std::uniform_int_distribution<int>(-9, 9)(rng);
      auto w = v;
      for (auto& x : w) x *= lam;
      mpz_class lp;
      mpz_pow_ui(lp.get_mpz_t(), mpz_class(static_cast<long>(lam)).get_mpz_t(), f.degree());
      CHECK(f.evaluate(std::span<const std::int64_t>(w)) == lp * fv);
    }
  }
}

TEST_CASE("primitive part normalizes gcd and sign") {
  auto f = primitive_part(parse_form("-4*x0^2 + 6*x1^2"));
  CHECK(f == parse_form("2*x0^2 - 3*x1^2"));
}

TEST_CASE("apply_transform identity and swap") {
  auto q = parse_form("x0*x1 - x2*x3");
  CHECK(apply_transform(q, CoordinateTransform::identity(4)) == q);
  CHECK(apply_transform(parse_form("4*x0^2 - 2*x1^2"), CoordinateTransform::identity(2)) ==
        parse_form("2*x0^2 - x1^2"));
  QMatrix swap = linalg::identity(4);
  swap[0][0] = 0;
  swap[1][1] = 0;
  swap[0][1] = 1;
  swap[1][0] = 1;
  CHECK(apply_transform(q, CoordinateTransform(swap)) == q);
}

TEST_CASE("singular transforms are rejected") {
  QMatrix m{{1, 2}, {2, 4}};
  CHECK_THROWS_AS(CoordinateTransform{m}, SingularTransform);
}

TEST_CASE("property: transform then inverse recovers the form") {
  std::mt19937_64 rng(11);
  for (const char* s : kCorpus) {
    auto f = parse_form(s);
    const int n1 = f.num_vars();
    for (int trial = 0; trial < 5; ++trial) {
      QMatrix m(n1, std::vector<mpq_class>(n1));
      for (auto& row : m) {
        for (auto& x : row) {
          x = mpq_class(std::uniform_int_distribution<int>(-3, 3)(rng),
                        std::uniform_int_distribution<int>(1, 3)(rng));
          x.canonicalize();
        }
      }
      if (!linalg::inverse(m)) continue;
      CoordinateTransform t(m);
      auto g = apply_transform(f, t);
      auto back = apply_transform(g, t.inverse());
      CHECK(back == primitive_part(f));
      // scaled form: g(y) = c f(M y) on integer y
      auto [gs, c] = apply_transform_scaled(f, t);
      auto y = random_vec(rng, n1, 5);
      std::vector<mpq_class> x(n1, 0);
      for (int i = 0; i < n1; ++i) {
        for (int j = 0; j < n1; ++j) x[i] += m[i][j] * y[j];
      }
      mpq_class fx = 0;
      for (const auto& [e, coef] : f.terms()) {
        mpq_class term = coef;
        for (int i = 0; i < n1; ++i) {
          for (int k = 0; k < e[i]; ++k) term *= x[i];
        }
        fx += term;
      }
      CHECK(mpq_class(gs.evaluate(std::span<const std::int64_t>(y))) == c * fx);
    }
  }
}

TEST_CASE("normal form shape on the Fermat cubic surface") {
  auto f = parse_form("x0^3+x1^3+x2^3+x3^3");
  auto x = normalize(std::vector<std::int64_t>{1, -1, 0, 0});
  auto nf = normal_form_at_point(f, x);
  const auto& g = nf.form;
  const int d = g.degree();
  Exponents top(4, 0);
  top[0] = d;
  CHECK(g.terms().count(top) == 0);
  Exponents lead{d - 1, 1, 0, 0};
  CHECK(g.terms().count(lead) == 1);
  for (int j = 2; j < 4; ++j) {
    Exponents e(4, 0);
    e[0] = d - 1;
    e[j] = 1;
    CHECK(g.terms().count(e) == 0);
  }
  // the base point maps to [1,0,0,0]
  auto back = nf.transform.apply_inverse(x.to_mpz());
  CHECK(back == std::vector<mpz_class>{1, 0, 0, 0});
}

TEST_CASE("normal form fixes a form already in shape") {
  auto f = parse_form("x0^2*x1 + x2^3 + x1*x2*x3 + x3^3");
  auto nf = normal_form_at_point(f, normalize(std::vector<std::int64_t>{1, 0, 0, 0}));
  CHECK(nf.form == f);
  CHECK(nf.scale == 1);
}

TEST_CASE("normal form errors") {
  auto f = parse_form("x0*x1^2", 2);
  CHECK_THROWS_AS(normal_form_at_point(f, normalize(std::vector<std::int64_t>{1, 0, 0})),
                  SingularPointError);
  auto fermat = parse_form("x0^3+x1^3+x2^3+x3^3");
  CHECK_THROWS_AS(normal_form_at_point(fermat, normalize(std::vector<std::int64_t>{1, 1, 0, 0})),
                  NotOnHypersurface);
}

TEST_CASE("property: normal form shape at many points") {
  const char* forms[] = {"x0^3+x1^3+x2^3+x3^3", "x0*x1 - x2*x3", "x0^3 + x1^3 + x2^3 - 3*x0*x1*x2 + x3^3 - x0^2*x3"};
  for (const char* s : forms) {
    auto f = parse_form(s);
    auto grad = gradient(f);
    int seen = 0;
    for (std::int64_t a = -3; a <= 3 && seen < 12; ++a)
      for (std::int64_t b = -3; b <= 3 && seen < 12; ++b)
        for (std::int64_t c = -3; c <= 3 && seen < 12; ++c)
          for (std::int64_t e = -3; e <= 3 && seen < 12; ++e) {
            std::vector<std::int64_t> v{a, b, c, e};
            if ((a == 0 && b == 0 && c == 0 && e == 0) || f.evaluate(std::span<const std::int64_t>(v)) != 0) continue;
            bool singular = true;
            for (const auto& gi : grad) singular = singular && gi.evaluate(std::span<const std::int64_t>(v)) == 0;
            if (singular) continue;
            auto nf = normal_form_at_point(f, normalize(std::span<const std::int64_t>(v)));
            const int d = f.degree();
            Exponents top(4, 0);
            top[0] = d;
            CHECK(nf.form.terms().count(top) == 0);
            for (int j = 2; j < 4; ++j) {
              Exponents ej(4, 0);
              ej[0] = d - 1;
              ej[j] = 1;
              CHECK(nf.form.terms().count(ej) == 0);
            }
            Exponents lead(4, 0);
            lead[0] = d - 1;
            lead[1] = 1;
            CHECK(nf.form.terms().count(lead) == 1);
            ++seen;
          }
    CHECK(seen > 0);
  }
}

TEST_CASE("expansion in the first variable") {
  auto f = parse_form("x0^2*x1 + x0*(x2^2 - x1*x3) + x2^3 + x3^3");
  auto parts = expand_in_first_variable(f);
  REQUIRE(parts.size() == 3);
  CHECK(parts[0] == parse_form("x0", 2));
  CHECK(parts[1] == parse_form("x1^2 - x0*x2", 2));
  CHECK(parts[2] == parse_form("x1^3 + x2^3", 2));
}
