#include "hypercount/transform.hpp"

#include <cstdlib>

#include "hypercount/errors.hpp"
#include "hypercount/linalg.hpp"

namespace hypercount {

CoordinateTransform::CoordinateTransform(QMatrix matrix) : matrix_(std::move(matrix)) {
  for (const auto& row : matrix_) {
    if (row.size() != matrix_.size()) throw DimensionMismatch("transform matrix must be square");
  }
  auto inv = linalg::inverse(matrix_);
  if (!inv) throw SingularTransform();
  inverse_ = std::move(*inv);
}

CoordinateTransform CoordinateTransform::identity(int size) {
  return CoordinateTransform(linalg::identity(size), linalg::identity(size));
}

CoordinateTransform CoordinateTransform::inverse() const {
  return CoordinateTransform(inverse_, matrix_);
}

namespace {

std::vector<mpz_class> apply_matrix(const QMatrix& m, std::span<const mpz_class> v) {
  if (v.size() != m.size()) throw DimensionMismatch("vector length does not match transform size");
  std::vector<mpq_class> out(m.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  }
  mpz_class lcm = 1;
  for (const auto& x : out) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
  std::vector<mpz_class> ints;
  for (const auto& x : out) {
    mpq_class y = x * lcm;
    ints.push_back(y.get_num());
  }
  return linalg::primitive_vector(std::move(ints));
}

}  // namespace

std::vector<mpz_class> CoordinateTransform::apply(std::span<const mpz_class> v) const {
  return apply_matrix(matrix_, v);
}

std::vector<mpz_class> CoordinateTransform::apply_inverse(std::span<const mpz_class> v) const {
  return apply_matrix(inverse_, v);
}

ScaledForm apply_transform_scaled(const Form& f, const CoordinateTransform& t) {
  if (t.size() != f.num_vars()) throw DimensionMismatch("transform size does not match form");
  QTermMap expanded = substitute_linear(f, t.matrix());
  mpq_class scale = 1;
  Form g = primitive_from_rational(f.ambient_dim(), f.degree(), expanded, &scale);
  return {std::move(g), std::move(scale)};
}

Form apply_transform(const Form& f, const CoordinateTransform& t) {
  return apply_transform_scaled(f, t).form;
}

NormalForm normal_form_at_point(const Form& f, const ProjectivePoint& x) {
  const int n1 = f.num_vars();
  if (x.ambient_dim() + 1 != n1) throw DimensionMismatch("point dimension does not match form");
  auto xv = x.to_mpz();
  if (f.evaluate(std::span<const mpz_class>(xv)) != 0) throw NotOnHypersurface();

  std::vector<mpz_class> w(n1);
  for (int i = 0; i < n1; ++i) w[i] = partial(f, i).evaluate(std::span<const mpz_class>(xv));
  int pivot = -1;
  for (int i = 0; i < n1; ++i) {
    if (w[i] == 0) continue;
    if (pivot < 0 || abs(w[i]) < abs(w[pivot])) pivot = i;
  }
  if (pivot < 0) throw SingularPointError();

  // Columns: x, e_pivot, then primitive kernel vectors w_p e_j - w_j e_p of the
  // gradient row, kept when independent of the columns so far.
  std::vector<std::vector<mpz_class>> columns;
  columns.push_back(xv);
  std::vector<mpz_class> ep(n1, 0);
  ep[pivot] = 1;
  columns.push_back(ep);
  ZMatrix tangent{xv};
  for (int j = 0; j < n1 && static_cast<int>(tangent.size()) < n1 - 1; ++j) {
    if (j == pivot) continue;
    std::vector<mpz_class> v(n1, 0);
    v[j] = w[pivot];
    v[pivot] -= w[j];
    v = linalg::primitive_vector(std::move(v));
    tangent.push_back(v);
    if (linalg::rank(tangent) == static_cast<int>(tangent.size())) {
      columns.push_back(v);
    } else {
      tangent.pop_back();
    }
  }
  QMatrix m(n1, std::vector<mpq_class>(n1));
  for (int c = 0; c < n1; ++c) {
    for (int r = 0; r < n1; ++r) m[r][c] = columns[c][r];
  }
  CoordinateTransform t(std::move(m));
  auto [g, scale] = apply_transform_scaled(f, t);
  return {std::move(t), std::move(g), std::move(scale)};
}

std::vector<Form> expand_in_first_variable(const Form& f) {
  const int d = f.degree();
  const int n = f.ambient_dim();
  if (n < 1) throw InvalidArgument("need at least two variables");
  std::vector<TermMap> parts(d);
  for (const auto& [e, c] : f.terms()) {
    const int i = d - e[0];  // y0^{d-i} F_i
    if (i == 0) continue;    // caller checks the y0^d coefficient separately
    Exponents rest(e.begin() + 1, e.end());
    parts[i - 1].emplace(std::move(rest), c);
  }
  std::vector<Form> out;
  for (int i = 1; i <= d; ++i) out.emplace_back(n - 1, i, std::move(parts[i - 1]));
  return out;
}

}  // namespace hypercount
