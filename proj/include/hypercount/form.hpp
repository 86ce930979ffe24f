#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hypercount {

using Exponents = std::vector<int>;
using TermMap = std::map<Exponents, mpz_class>;
using QTermMap = std::map<Exponents, mpq_class>;
using ZMatrix = std::vector<std::vector<mpz_class>>;
using QMatrix = std::vector<std::vector<mpq_class>>;

/// A homogeneous polynomial with integer coefficients in the variables
/// x0..xn, stored sparsely as exponent vector -> nonzero coefficient.
///
/// Terms are kept in ascending lexicographic order of exponent vectors, so
/// the "leading" term (highest power of x0 first) is the last map entry.
/// Forms of ambient dimension below 2 are permitted; they arise as cone
/// equations in the tangent coordinates of a hypersurface.
class Form {
 public:
  Form() = default;

  /// Throws InvalidArgument if an exponent vector has the wrong length, a
  /// negative entry, or does not sum to `degree`. Zero coefficients are
  /// dropped.
  Form(int ambient_dim, int degree, TermMap terms);

  static Form zero(int ambient_dim, int degree);

  int ambient_dim() const noexcept { return ambient_dim_; }
  int num_vars() const noexcept { return ambient_dim_ + 1; }
  int degree() const noexcept { return degree_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t num_terms() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// ||F||: maximum absolute coefficient (0 for the zero form).
  mpz_class coefficient_norm() const;

  /// Sum of absolute values of the coefficients.
  mpz_class coefficient_l1() const;

  /// Highest power of x_var occurring in any term.
  int degree_in(int var) const;

  mpz_class evaluate(std::span<const mpz_class> v) const;
  mpz_class evaluate(std::span<const std::int64_t> v) const;

  std::string to_string() const;

  bool operator==(const Form&) const = default;

 private:
  int ambient_dim_ = 0;
  int degree_ = 0;
  TermMap terms_;
};

/// Parses a sum of integer-coefficient monomials in x0..xn. Supports
/// `+ - * ^`, integer literals and parentheses. The ambient dimension is the
/// largest variable index unless given explicitly.
Form parse_form(std::string_view text, std::optional<int> ambient_dim = std::nullopt);

/// d/dx_var. The result has degree d-1 (the zero form when x_var is absent).
Form partial(const Form& f, int var);

std::vector<Form> gradient(const Form& f);

/// Divides by the gcd of the coefficients and makes the leading coefficient
/// (lexicographically greatest exponent vector) positive.
Form primitive_part(const Form& f);

/// Clears denominators of a rational term map and returns its primitive
/// integer part together with the scale c such that result = c * input.
Form primitive_from_rational(int ambient_dim, int degree, const QTermMap& terms,
                             mpq_class* scale = nullptr);

/// Renames variables: variable i of `f` becomes variable perm[i] of the result.
Form permute_variables(const Form& f, std::span<const int> perm);

/// Expands f(M y) where x_i = sum_j M[i][j] y_j, giving a form in M[0].size()
/// variables with rational coefficients.
QTermMap substitute_linear(const Form& f, const QMatrix& m);

/// Restriction of f to the span of `rows`: expands f(sum_j u_j rows[j]) as an
/// integer polynomial in the parameters u_0..u_{k-1}.
TermMap restrict_to_span(const Form& f, const ZMatrix& rows);

}  // namespace hypercount
