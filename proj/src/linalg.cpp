#include "hypercount/linalg.hpp"

#include <utility>

#include "hypercount/errors.hpp"

namespace hypercount::linalg {

ZMatrix to_zmatrix(const std::vector<std::vector<std::int64_t>>& m) {
  ZMatrix out;
  out.reserve(m.size());
  for (const auto& row : m) {
    std::vector<mpz_class> r;
    r.reserve(row.size());
    for (auto x : row) r.emplace_back(static_cast<long>(x));
    out.push_back(std::move(r));
  }
  return out;
}

int rank(const QMatrix& input) {
  QMatrix m = input;
  const int rows = static_cast<int>(m.size());
  if (rows == 0) return 0;
  const int cols = static_cast<int>(m[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i) {
      if (m[i][c] != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    std::swap(m[r], m[piv]);
    for (int i = r + 1; i < rows; ++i) {
      if (m[i][c] == 0) continue;
      mpq_class factor = m[i][c] / m[r][c];
      for (int j = c; j < cols; ++j) m[i][j] -= factor * m[r][j];
    }
    ++r;
  }
  return r;
}

int rank(const ZMatrix& m) {
  QMatrix q;
  q.reserve(m.size());
  for (const auto& row : m) q.emplace_back(row.begin(), row.end());
  return rank(q);
}

mpz_class determinant(const ZMatrix& input) {
  const int n = static_cast<int>(input.size());
  if (n == 0) return 1;
  ZMatrix m = input;
  mpz_class sign = 1;
  mpz_class prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m[k][k] == 0) {
      int swap_row = -1;
      for (int i = k + 1; i < n; ++i) {
        if (m[i][k] != 0) {
          swap_row = i;
          break;
        }
      }
      if (swap_row < 0) return 0;
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]);
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

QMatrix identity(int n) {
  QMatrix id(n, std::vector<mpq_class>(n, 0));
  for (int i = 0; i < n; ++i) id[i][i] = 1;
  return id;
}

std::optional<QMatrix> inverse(const QMatrix& input) {
  const int n = static_cast<int>(input.size());
  QMatrix a = input;
  QMatrix inv = identity(n);
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int i = c; i < n; ++i) {
      if (a[i][c] != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) return std::nullopt;
    std::swap(a[c], a[piv]);
    std::swap(inv[c], inv[piv]);
    mpq_class p = a[c][c];
    for (int j = 0; j < n; ++j) {
      a[c][j] /= p;
      inv[c][j] /= p;
    }
    for (int i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      mpq_class factor = a[i][c];
      for (int j = 0; j < n; ++j) {
        a[i][j] -= factor * a[c][j];
        inv[i][j] -= factor * inv[c][j];
      }
    }
  }
  return inv;
}

QMatrix multiply(const QMatrix& a, const QMatrix& b) {
  const std::size_t n = a.size();
  const std::size_t k = b.size();
  const std::size_t m = k == 0 ? 0 : b[0].size();
  QMatrix out(n, std::vector<mpq_class>(m, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) out[i][j] += a[i][l] * b[l][j];
    }
  }
  return out;
}

mpz_class content(std::span<const mpz_class> v) {
  mpz_class g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  return g;
}

std::vector<mpz_class> primitive_vector(std::vector<mpz_class> v) {
  mpz_class g = content(v);
  if (g == 0) return v;
  for (const auto& x : v) {
    if (x != 0) {
      if (x < 0) g = -g;
      break;
    }
  }
  for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  return v;
}

ZMatrix lll_reduce(ZMatrix b) {
  const int k = static_cast<int>(b.size());
  if (k <= 1) return b;
  const int n = static_cast<int>(b[0].size());
  auto dot = [n](const auto& x, const auto& y) {
    mpq_class s = 0;
    for (int i = 0; i < n; ++i) s += mpq_class(x[i]) * mpq_class(y[i]);
    return s;
  };
  // Exact Gram-Schmidt data, recomputed after each change (k is tiny).
  std::vector<std::vector<mpq_class>> bstar(k, std::vector<mpq_class>(n));
  std::vector<std::vector<mpq_class>> mu(k, std::vector<mpq_class>(k, 0));
  std::vector<mpq_class> norm2(k);
  auto gram_schmidt = [&] {
    for (int i = 0; i < k; ++i) {
      for (int c = 0; c < n; ++c) bstar[i][c] = b[i][c];
      for (int j = 0; j < i; ++j) {
        mu[i][j] = dot(b[i], bstar[j]) / norm2[j];
        for (int c = 0; c < n; ++c) bstar[i][c] -= mu[i][j] * bstar[j][c];
      }
      norm2[i] = dot(bstar[i], bstar[i]);
    }
  };
  gram_schmidt();
  const mpq_class delta(3, 4);
  int i = 1;
  while (i < k) {
    for (int j = i - 1; j >= 0; --j) {
      // round mu to nearest integer
      mpq_class m = mu[i][j];
      mpz_class q;
      mpz_class twice_num = 2 * m.get_num() + m.get_den();
      mpz_class twice_den = 2 * m.get_den();
      mpz_fdiv_q(q.get_mpz_t(), twice_num.get_mpz_t(), twice_den.get_mpz_t());
      if (q != 0) {
        for (int c = 0; c < n; ++c) b[i][c] -= q * b[j][c];
        gram_schmidt();
      }
    }
    if (norm2[i] >= (delta - mu[i][i - 1] * mu[i][i - 1]) * norm2[i - 1]) {
      ++i;
    } else {
      std::swap(b[i], b[i - 1]);
      gram_schmidt();
      i = std::max(i - 1, 1);
    }
  }
  return b;
}

ZMatrix integer_kernel(const ZMatrix& input) {
  if (input.empty()) throw InvalidArgument("integer_kernel of an empty matrix");
  const int rows = static_cast<int>(input.size());
  const int cols = static_cast<int>(input[0].size());
  ZMatrix a = input;
  // u accumulates the unimodular column operations; a * u stays equal to a.
  ZMatrix u(cols, std::vector<mpz_class>(cols, 0));
  for (int i = 0; i < cols; ++i) u[i][i] = 1;

  auto col_combine = [&](ZMatrix& m, int p, int q, const mpz_class& s, const mpz_class& t,
                         const mpz_class& x, const mpz_class& y) {
    // (col_p, col_q) <- (s col_p + t col_q, x col_p + y col_q)
    for (auto& row : m) {
      mpz_class np = s * row[p] + t * row[q];
      mpz_class nq = x * row[p] + y * row[q];
      row[p] = std::move(np);
      row[q] = std::move(nq);
    }
  };
  auto col_swap = [](ZMatrix& m, int p, int q) {
    for (auto& row : m) std::swap(row[p], row[q]);
  };

  int piv = 0;
  for (int r = 0; r < rows && piv < cols; ++r) {
    for (int j = piv + 1; j < cols; ++j) {
      if (a[r][j] == 0) continue;
      if (a[r][piv] == 0) {
        col_swap(a, piv, j);
        col_swap(u, piv, j);
        continue;
      }
      mpz_class g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a[r][piv].get_mpz_t(),
                 a[r][j].get_mpz_t());
      mpz_class x = -a[r][j] / g;
      mpz_class y = a[r][piv] / g;
      col_combine(a, piv, j, s, t, x, y);
      col_combine(u, piv, j, s, t, x, y);
    }
    if (a[r][piv] != 0) ++piv;
  }
  ZMatrix kernel;
  for (int j = piv; j < cols; ++j) {
    std::vector<mpz_class> v(cols);
    for (int i = 0; i < cols; ++i) v[i] = u[i][j];
    kernel.push_back(std::move(v));
  }
  return lll_reduce(std::move(kernel));
}

ZMatrix saturate(const ZMatrix& rows) {
  if (rows.empty()) return rows;
  const std::size_t cols = rows[0].size();
  if (rows.size() == cols) {
    ZMatrix id(cols, std::vector<mpz_class>(cols, 0));
    for (std::size_t i = 0; i < cols; ++i) id[i][i] = 1;
    return id;
  }
  ZMatrix complement = integer_kernel(rows);
  return integer_kernel(complement);
}

}  // namespace hypercount::linalg
