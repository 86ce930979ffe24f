#include "hypercount/form.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "hypercount/errors.hpp"

namespace hypercount {

Form::Form(int ambient_dim, int degree, TermMap terms)
    : ambient_dim_(ambient_dim), degree_(degree) {
  if (ambient_dim < 0) throw InvalidArgument("ambient dimension must be non-negative");
  if (degree < 0) throw InvalidArgument("degree must be non-negative");
  for (auto& [exps, coef] : terms) {
    if (static_cast<int>(exps.size()) != ambient_dim + 1) {
      throw InvalidArgument("exponent vector length does not match ambient dimension");
    }
    int total = 0;
    for (int e : exps) {
      if (e < 0) throw InvalidArgument("negative exponent");
      total += e;
    }
    if (total != degree) throw InvalidArgument("term degree does not match form degree");
    if (coef != 0) terms_.emplace(exps, std::move(coef));
  }
}

Form Form::zero(int ambient_dim, int degree) { return Form(ambient_dim, degree, {}); }

mpz_class Form::coefficient_norm() const {
  mpz_class best = 0;
  for (const auto& [_, c] : terms_) {
    mpz_class a = abs(c);
    if (a > best) best = a;
  }
  return best;
}

mpz_class Form::coefficient_l1() const {
  mpz_class sum = 0;
  for (const auto& [_, c] : terms_) sum += abs(c);
  return sum;
}

int Form::degree_in(int var) const {
  int best = 0;
  for (const auto& [e, _] : terms_) best = std::max(best, e[var]);
  return best;
}

namespace {

template <typename Int>
mpz_class evaluate_impl(const TermMap& terms, int nvars, std::span<const Int> v) {
  if (static_cast<int>(v.size()) != nvars) {
    throw DimensionMismatch("vector length " + std::to_string(v.size()) +
                            " does not match " + std::to_string(nvars) + " variables");
  }
  mpz_class sum = 0;
  mpz_class term;
  mpz_class base;
  for (const auto& [exps, coef] : terms) {
    term = coef;
    for (int i = 0; i < nvars; ++i) {
      if (exps[i] == 0) continue;
      if constexpr (std::is_same_v<Int, mpz_class>) {
        base = v[i];
      } else {
        base = static_cast<long>(v[i]);
      }
      mpz_pow_ui(base.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(exps[i]));
      term *= base;
    }
    sum += term;
  }
  return sum;
}

}  // namespace

mpz_class Form::evaluate(std::span<const mpz_class> v) const {
  return evaluate_impl(terms_, num_vars(), v);
}

mpz_class Form::evaluate(std::span<const std::int64_t> v) const {
  return evaluate_impl(terms_, num_vars(), v);
}

std::string Form::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [exps, coef] = *it;
    mpz_class mag = abs(coef);
    if (first) {
      if (coef < 0) out << "-";
    } else {
      out << (coef < 0 ? " - " : " + ");
    }
    first = false;
    bool constant = std::all_of(exps.begin(), exps.end(), [](int e) { return e == 0; });
    bool wrote = false;
    if (mag != 1 || constant) {
      out << mag.get_str();
      wrote = true;
    }
    for (std::size_t i = 0; i < exps.size(); ++i) {
      if (exps[i] == 0) continue;
      if (wrote) out << "*";
      out << "x" << i;
      if (exps[i] > 1) out << "^" << exps[i];
      wrote = true;
    }
  }
  return out.str();
}

Form partial(const Form& f, int var) {
  if (var < 0 || var >= f.num_vars()) throw DimensionMismatch("variable index out of range");
  TermMap out;
  for (const auto& [exps, coef] : f.terms()) {
    if (exps[var] == 0) continue;
    Exponents e = exps;
    e[var] -= 1;
    out.emplace(std::move(e), coef * exps[var]);
  }
  return Form(f.ambient_dim(), std::max(f.degree() - 1, 0), std::move(out));
}

std::vector<Form> gradient(const Form& f) {
  std::vector<Form> g;
  g.reserve(f.num_vars());
  for (int i = 0; i < f.num_vars(); ++i) g.push_back(partial(f, i));
  return g;
}

Form primitive_part(const Form& f) {
  if (f.is_zero()) return f;
  mpz_class g = 0;
  for (const auto& [_, c] : f.terms()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (f.terms().rbegin()->second < 0) g = -g;
  TermMap out;
  for (const auto& [e, c] : f.terms()) out.emplace(e, c / g);
  return Form(f.ambient_dim(), f.degree(), std::move(out));
}

Form primitive_from_rational(int ambient_dim, int degree, const QTermMap& terms,
                             mpq_class* scale) {
  mpz_class lcm = 1;
  for (const auto& [_, c] : terms) {
    if (c == 0) continue;
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
  }
  TermMap ints;
  for (const auto& [e, c] : terms) {
    if (c == 0) continue;
    mpq_class scaled = c * lcm;
    ints.emplace(e, scaled.get_num());
  }
  Form raw(ambient_dim, degree, std::move(ints));
  Form prim = primitive_part(raw);
  if (scale != nullptr) {
    if (raw.is_zero()) {
      *scale = 1;
    } else {
      // prim = raw / g and raw = lcm * input, so prim = (lcm / g) * input.
      const auto& [e, c] = *raw.terms().rbegin();
      mpq_class ratio(prim.terms().at(e), c);
      ratio.canonicalize();
      *scale = ratio * lcm;
    }
  }
  return prim;
}

Form permute_variables(const Form& f, std::span<const int> perm) {
  if (static_cast<int>(perm.size()) != f.num_vars()) {
    throw DimensionMismatch("permutation length does not match variable count");
  }
  TermMap out;
  for (const auto& [exps, coef] : f.terms()) {
    Exponents e(exps.size(), 0);
    for (std::size_t i = 0; i < exps.size(); ++i) e[perm[i]] = exps[i];
    out.emplace(std::move(e), coef);
  }
  return Form(f.ambient_dim(), f.degree(), std::move(out));
}

namespace {

// Sparse polynomial product over a coefficient ring with fixed variable count.
template <typename Coef>
std::map<Exponents, Coef> multiply(const std::map<Exponents, Coef>& a,
                                   const std::map<Exponents, Coef>& b) {
  std::map<Exponents, Coef> out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      Exponents e(ea.size());
      for (std::size_t i = 0; i < ea.size(); ++i) e[i] = ea[i] + eb[i];
      out[e] += ca * cb;
    }
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

template <typename Coef>
std::map<Exponents, Coef> substitute_impl(const Form& f,
                                          const std::vector<std::vector<Coef>>& cols,
                                          int k) {
  const int nvars = f.num_vars();
  using Poly = std::map<Exponents, Coef>;
  // Linear form for each x_i and a cache of its powers.
  std::vector<std::vector<Poly>> powers(nvars);
  for (int i = 0; i < nvars; ++i) {
    Poly lin;
    for (int j = 0; j < k; ++j) {
      if (cols[i][j] == 0) continue;
      Exponents e(k, 0);
      e[j] = 1;
      lin.emplace(std::move(e), cols[i][j]);
    }
    Poly one;
    one.emplace(Exponents(k, 0), Coef(1));
    powers[i].push_back(std::move(one));
    powers[i].push_back(std::move(lin));
  }
  auto power = [&](int i, int e) -> const Poly& {
    while (static_cast<int>(powers[i].size()) <= e) {
      powers[i].push_back(multiply(powers[i].back(), powers[i][1]));
    }
    return powers[i][e];
  };
  Poly total;
  for (const auto& [exps, coef] : f.terms()) {
    Poly term;
    term.emplace(Exponents(k, 0), Coef(coef));
    for (int i = 0; i < nvars && !term.empty(); ++i) {
      if (exps[i] == 0) continue;
      term = multiply(term, power(i, exps[i]));
    }
    for (auto& [e, c] : term) total[e] += c;
  }
  std::erase_if(total, [](const auto& kv) { return kv.second == 0; });
  return total;
}

}  // namespace

QTermMap substitute_linear(const Form& f, const QMatrix& m) {
  if (static_cast<int>(m.size()) != f.num_vars()) {
    throw DimensionMismatch("substitution matrix row count does not match variable count");
  }
  const int k = m.empty() ? 0 : static_cast<int>(m[0].size());
  return substitute_impl<mpq_class>(f, m, k);
}

TermMap restrict_to_span(const Form& f, const ZMatrix& rows) {
  const int k = static_cast<int>(rows.size());
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != f.num_vars()) {
      throw DimensionMismatch("spanning vector length does not match variable count");
    }
  }
  // x_i = sum_j u_j rows[j][i]
  ZMatrix cols(f.num_vars(), std::vector<mpz_class>(k));
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < f.num_vars(); ++i) cols[i][j] = rows[j][i];
  }
  return substitute_impl<mpz_class>(f, cols, k);
}

}  // namespace hypercount
