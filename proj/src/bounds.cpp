#include "hypercount/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "hypercount/errors.hpp"

namespace hypercount {

namespace {

void check_lp_args(const mpq_class& a, const mpq_class& b, const mpq_class& c, double H) {
  if (!(H >= 1.0)) throw InvalidArgument("H must be at least 1");
  if (a < 0 || b < 0 || c < 0) throw InvalidArgument("exponents must be non-negative");
}

double power(double H, const mpq_class& e) { return std::pow(H, e.get_d()); }

}  // namespace

std::array<mpq_class, 3> lp_corner_exponents(const mpq_class& a, const mpq_class& b,
                                             const mpq_class& c) {
  return {mpq_class((a + b + c) / 3), mpq_class((b + c) / 2), c};
}

double lp_max_bound(const mpq_class& a, const mpq_class& b, const mpq_class& c, double H) {
  check_lp_args(a, b, c, H);
  auto e = lp_corner_exponents(a, b, c);
  return power(H, std::max({e[0], e[1], e[2]}));
}

double lp_max_oracle(const mpq_class& a, const mpq_class& b, const mpq_class& c, double H,
                     int steps) {
  check_lp_args(a, b, c, H);
  if (steps < 2) throw InvalidArgument("grid needs at least 2 steps");
  // log_H R = i/3s, log_H S = j/2s, log_H T = k/s, and A = R, B = RS, C = RST.
  // With a, b, c scaled by the lcm L of their denominators, 6sL times the
  // exponent of A^a B^b C^c is the integer 2(a+b+c)i + 3(b+c)j + 6ck.
  mpz_class L = 1;
  for (const auto* q : {&a, &b, &c}) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), q->get_den_mpz_t());
  const mpz_class A = a.get_num() * (L / a.get_den());
  const mpz_class B = b.get_num() * (L / b.get_den());
  const mpz_class C = c.get_num() * (L / c.get_den());
  const mpz_class ci = 2 * (A + B + C), cj = 3 * (B + C), ck = 6 * C;
  mpz_class best = 0;
  if (ci.fits_slong_p() && cj.fits_slong_p() && ck.fits_slong_p() &&
      abs(ci) + abs(cj) + abs(ck) < mpz_class(1) << 40) {
    const long xi = ci.get_si(), xj = cj.get_si(), xk = ck.get_si();
    long m = 0;
    for (long i = 0; i <= steps; ++i) {
      for (long j = 0; i + j <= steps; ++j) {
        for (long k = 0; i + j + k <= steps; ++k) m = std::max(m, xi * i + xj * j + xk * k);
      }
    }
    best = m;
  } else {
    mpz_class e;
    for (int i = 0; i <= steps; ++i) {
      for (int j = 0; i + j <= steps; ++j) {
        for (int k = 0; i + j + k <= steps; ++k) {
          e = ci * i + cj * j + ck * k;
          if (e > best) best = e;
        }
      }
    }
  }
  mpq_class exponent(best, 6 * steps * L);
  exponent.canonicalize();
  return power(H, exponent);
}

mpz_class intersection_degree(int d, int r) {
  if (d < 2) throw InvalidArgument("degree must be at least 2");
  if (r < -1) throw InvalidArgument("r must be at least -1");
  mpz_class p;
  mpz_pow_ui(p.get_mpz_t(), mpz_class(1 - d).get_mpz_t(), static_cast<unsigned long>(r + 1));
  mpz_class num = 1 - p;
  if (num % d != 0) throw InvalidArgument("non-integral intersection degree");
  return num / d;
}

mpz_class odd_double_factorial(int m) {
  if (m < 0) throw InvalidArgument("m must be non-negative");
  mpz_class r = 1;
  for (int k = 2 * m + 1; k > 1; k -= 2) r *= k;
  return r;
}

mpz_class fermat_plane_count(int m, int d) {
  if (m < 1) throw InvalidArgument("m must be at least 1");
  if (d < 3) throw InvalidArgument("degree must be at least 3");
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(m + 1));
  return odd_double_factorial(m) * p;
}

LineCountBounds line_count_bounds(int d) {
  if (d < 3) throw InvalidArgument("degree must be at least 3");
  mpz_class dd = d;
  return {11 * dd * dd - 24 * dd, 11 * dd * dd - 28 * dd + 12};
}

ExponentFit fit_exponent(const std::vector<std::pair<std::int64_t, std::uint64_t>>& samples) {
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].first <= samples[i - 1].first) {
      throw InvalidArgument("sample bounds must be strictly increasing");
    }
  }
  std::vector<double> xs, ys;
  for (const auto& [b, n] : samples) {
    if (b <= 0) throw InvalidArgument("sample bounds must be positive");
    if (n == 0) continue;
    xs.push_back(std::log(static_cast<double>(b)));
    ys.push_back(std::log(static_cast<double>(n)));
  }
  if (xs.size() < 3) throw InvalidArgument("need at least 3 samples with N > 0");
  const double k = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  ExponentFit fit;
  fit.samples = samples;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / k);
  return fit;
}

std::vector<double> theta_iteration(double theta0, int steps) {
  if (theta0 < 0) throw InvalidArgument("theta0 must be non-negative");
  if (steps < 0) throw InvalidArgument("steps must be non-negative");
  std::vector<double> out{theta0};
  for (int i = 0; i < steps; ++i) out.push_back(out.back() / 2);
  return out;
}

int theta_steps_below(double theta0, double eps) {
  if (theta0 < 0 || !(eps > 0)) throw InvalidArgument("need theta0 >= 0 and eps > 0");
  int k = 0;
  double t = theta0;
  while (t >= eps) {
    t /= 2;
    ++k;
  }
  return k;
}

}  // namespace hypercount
