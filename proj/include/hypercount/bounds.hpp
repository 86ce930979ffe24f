#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace hypercount {

/// Exponents e with A^a B^b C^c = H^e at the three corners
/// (H^{1/3},H^{1/3},H^{1/3}), (1,H^{1/2},H^{1/2}) and (1,1,H):
/// (a+b+c)/3, (b+c)/2 and c.
std::array<mpq_class, 3> lp_corner_exponents(const mpq_class& a, const mpq_class& b,
                                             const mpq_class& c);

/// sup of A^a B^b C^c over 1 ≤ A ≤ B ≤ C with ABC ≤ H, which is
/// max{H^{(a+b+c)/3}, H^{(b+c)/2}, H^c}. The exponent is maximized exactly
/// and H raised to it once. Throws InvalidArgument for H < 1 or a negative
/// exponent.
double lp_max_bound(const mpq_class& a, const mpq_class& b, const mpq_class& c, double H);

/// Grid search for the same supremum in the variables A = R, B = RS, C = RST
/// with R = H^{i/3s}, S = H^{j/2s}, T = H^{k/s}, i + j + k ≤ s (s = steps),
/// which covers exactly the feasible region R^3 S^2 T ≤ H. Exponents are
/// exact rationals, so the result never exceeds lp_max_bound.
double lp_max_oracle(const mpq_class& a, const mpq_class& b, const mpq_class& c, double H,
                     int steps);

/// (1 - (1-d)^{r+1}) / d, an integer for every d ≥ 2 and r ≥ -1.
mpz_class intersection_degree(int d, int r);

/// C_m = (2m+1)!! = (2m+1)(2m-1)...3.1.
mpz_class odd_double_factorial(int m);

/// C_m d^{m+1}: the number of m-planes on the Fermat hypersurface of degree d
/// in P^{2m+1}.
mpz_class fermat_plane_count(int m, int d);

struct LineCountBounds {
  mpz_class flecnodal;  // 11d^2 - 24d
  mpz_class segre;      // 11d^2 - 28d + 12
  bool operator==(const LineCountBounds&) const = default;
};

LineCountBounds line_count_bounds(int d);

/// Ordinary least squares of log N against log B.
struct ExponentFit {
  std::vector<std::pair<std::int64_t, std::uint64_t>> samples;
  double slope = 0.0;
  double intercept = 0.0;
  /// Root mean square of the residuals in log space.
  double residual = 0.0;
  bool operator==(const ExponentFit&) const = default;
};

/// Uses the samples with N > 0. Throws InvalidArgument when fewer than three
/// remain or the bounds are not strictly increasing.
ExponentFit fit_exponent(const std::vector<std::pair<std::int64_t, std::uint64_t>>& samples);

/// theta0, theta0/2, ..., theta0/2^steps.
std::vector<double> theta_iteration(double theta0, int steps);

/// Number of halvings until theta drops below eps (eps > 0).
int theta_steps_below(double theta0, double eps);

}  // namespace hypercount
