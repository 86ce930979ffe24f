#pragma once

#include "hypercount/form.hpp"
#include "hypercount/projective.hpp"

namespace hypercount {

/// An invertible rational change of coordinates x = M y.
class CoordinateTransform {
 public:
  /// Throws SingularTransform when `matrix` is not invertible.
  explicit CoordinateTransform(QMatrix matrix);

  static CoordinateTransform identity(int size);

  const QMatrix& matrix() const noexcept { return matrix_; }
  const QMatrix& inverse_matrix() const noexcept { return inverse_; }
  int size() const noexcept { return static_cast<int>(matrix_.size()); }

  CoordinateTransform inverse() const;

  /// M v, scaled to a primitive sign-normalized integer vector.
  std::vector<mpz_class> apply(std::span<const mpz_class> v) const;
  /// M^{-1} v, scaled to a primitive sign-normalized integer vector.
  std::vector<mpz_class> apply_inverse(std::span<const mpz_class> v) const;

 private:
  CoordinateTransform(QMatrix matrix, QMatrix inverse)
      : matrix_(std::move(matrix)), inverse_(std::move(inverse)) {}

  QMatrix matrix_;
  QMatrix inverse_;
};

struct ScaledForm {
  Form form;
  /// form(y) = scale * f(M y)
  mpq_class scale;
};

/// g(y) = c f(M y), normalized to primitive integer coefficients.
Form apply_transform(const Form& f, const CoordinateTransform& t);
ScaledForm apply_transform_scaled(const Form& f, const CoordinateTransform& t);

struct NormalForm {
  CoordinateTransform transform;
  /// In these coordinates the base point is [1,0,...,0] and the tangent
  /// hyperplane there is y1 = 0.
  Form form;
  mpq_class scale;
};

/// Moves a nonsingular point x of f = 0 to [1,0,...,0] with tangent
/// hyperplane y1 = 0. The columns of the matrix are x, a coordinate vector
/// off the tangent hyperplane, and an integer basis completion of the
/// tangent hyperplane.
NormalForm normal_form_at_point(const Form& f, const ProjectivePoint& x);

/// The forms F_1..F_d with f(y) = sum_i y0^{d-i} F_i(y1..yn), as forms in
/// the n variables y1..yn (entry i-1 holds F_i).
std::vector<Form> expand_in_first_variable(const Form& f);

}  // namespace hypercount
