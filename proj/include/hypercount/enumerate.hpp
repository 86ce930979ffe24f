#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hypercount/form.hpp"
#include "hypercount/projective.hpp"

namespace hypercount {

enum class Method { Naive, Sieved, MeetInMiddle };

std::string to_string(Method m);
/// Accepts "naive", "sieved", "mitm" and "meet_in_middle".
Method method_from_string(std::string_view s);

struct CountOptions {
  Method method = Method::Sieved;
  bool want_points = false;
  /// Worker threads; the outermost coordinate range is split into work
  /// items that are processed independently and merged.
  int threads = 1;
  /// Upper limit on the meet-in-the-middle table.
  std::uint64_t memory_cap = std::uint64_t{2} << 30;
};

/// Result of counting primitive points of height ≤ bound.
struct CountReport {
  std::int64_t bound = 0;
  /// Number of projective points, i.e. half the number of primitive integer
  /// solutions in the box.
  std::uint64_t total = 0;
  /// Sorted by coordinates when requested.
  std::optional<std::vector<ProjectivePoint>> points;
  /// k -> number of points with 2^{k-1} < height ≤ 2^k.
  std::map<int, std::uint64_t> dyadic_buckets;
  Method method = Method::Sieved;
  double elapsed_ms = 0.0;

  bool operator==(const CountReport&) const = default;

  /// Associative merge of two disjoint partial counts (same bound).
  void merge(const CountReport& other);
};

/// N_X(b) for X: f = 0 in P^n.
///
/// Naive evaluates f on every normalized vector of the box and exists as an
/// oracle. Sieved solves for the last coordinate given the others: exact
/// roots for low degree, divisor enumeration when f is bilinear in the last
/// two variables, and a residue sieve mod 64 and 81 otherwise.
/// MeetInMiddle requires f = g(left) + h(right) and matches a sorted table
/// of g-values against -h.
///
/// Throws MethodInapplicable when MeetInMiddle is requested for a
/// non-separable form, and MemoryBudgetExceeded when its table exceeds
/// `memory_cap`.
CountReport count_points(const Form& f, std::int64_t b, const CountOptions& opts = {});

/// Common zeros of a system of forms. An empty system needs `ambient_dim`
/// and counts every point of height ≤ b. MeetInMiddle is not available for
/// systems with more than one form.
CountReport count_points_on_system(std::span<const Form> forms, std::int64_t b,
                                   const CountOptions& opts = {},
                                   std::optional<int> ambient_dim = std::nullopt);

struct VariableSplit {
  std::vector<int> left;
  std::vector<int> right;
};

/// A partition of the variables with f = g(left) + h(right), choosing the
/// most balanced split. nullopt when f is not separable.
std::optional<VariableSplit> separable_split(const Form& f);

/// Primitive points of height ≤ h at which every partial derivative
/// vanishes. By Euler's identity these lie on f = 0.
std::vector<ProjectivePoint> singular_point_search(const Form& f, std::int64_t h,
                                                   int threads = 1);

}  // namespace hypercount
