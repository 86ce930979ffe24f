#pragma once

#include <optional>

#include "hypercount/form.hpp"

// Exact linear algebra over Z and Q on small dense matrices.
namespace hypercount::linalg {

ZMatrix to_zmatrix(const std::vector<std::vector<std::int64_t>>& m);

/// Rank over Q.
int rank(const ZMatrix& m);
int rank(const QMatrix& m);

/// Determinant of a square integer matrix (fraction-free Bareiss elimination).
mpz_class determinant(const ZMatrix& m);

/// Exact inverse, or nullopt when singular.
std::optional<QMatrix> inverse(const QMatrix& m);

QMatrix multiply(const QMatrix& a, const QMatrix& b);
QMatrix identity(int n);

/// Z-basis (as rows) of {x in Z^N : m x = 0}. Rows are LLL-reduced.
ZMatrix integer_kernel(const ZMatrix& m);

/// Z-basis of span_Q(rows) ∩ Z^N, LLL-reduced. Rows must be independent.
ZMatrix saturate(const ZMatrix& rows);

/// LLL reduction (delta = 3/4) of linearly independent integer rows.
ZMatrix lll_reduce(ZMatrix rows);

mpz_class content(std::span<const mpz_class> v);

/// Divides by the content and makes the first nonzero entry positive.
std::vector<mpz_class> primitive_vector(std::vector<mpz_class> v);

}  // namespace hypercount::linalg
