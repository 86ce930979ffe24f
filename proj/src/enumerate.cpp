#include "hypercount/enumerate.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <memory>
#include <mutex>
#include <numeric>
#include <thread>

#include "hypercount/errors.hpp"

namespace hypercount {

std::string to_string(Method m) {
  switch (m) {
    case Method::Naive: return "naive";
    case Method::Sieved: return "sieved";
    case Method::MeetInMiddle: return "meet_in_middle";
  }
  return "unknown";
}

Method method_from_string(std::string_view s) {
  if (s == "naive") return Method::Naive;
  if (s == "sieved") return Method::Sieved;
  if (s == "mitm" || s == "meet_in_middle") return Method::MeetInMiddle;
  throw InvalidArgument("unknown method '" + std::string(s) + "'");
}

void CountReport::merge(const CountReport& other) {
  total += other.total;
  for (const auto& [k, c] : other.dyadic_buckets) dyadic_buckets[k] += c;
  if (other.points) {
    if (!points) points.emplace();
    points->insert(points->end(), other.points->begin(), other.points->end());
    std::sort(points->begin(), points->end());
  }
}

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr int kMaxVars = 32;

template <typename T>
T from_mpz(const mpz_class& v);

template <>
std::int64_t from_mpz<std::int64_t>(const mpz_class& v) {
  return v.get_si();
}

template <>
i128 from_mpz<i128>(const mpz_class& v) {
  mpz_class a = abs(v);
  mpz_class hi = a >> 64;
  mpz_class lo = a - (hi << 64);
  u128 r = (static_cast<u128>(hi.get_ui()) << 64) | static_cast<u128>(lo.get_ui());
  return v < 0 ? -static_cast<i128>(r) : static_cast<i128>(r);
}

enum class Arith { Int64, Int128, Big };

mpz_class value_bound(std::span<const Form> forms, std::int64_t b) {
  mpz_class bound = 0;
  for (const auto& f : forms) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(b), static_cast<unsigned long>(f.degree()));
    mpz_class v = f.coefficient_l1() * p;
    if (v > bound) bound = v;
  }
  return bound;
}

Arith choose_arith(const mpz_class& bound) {
  mpz_class lim64 = mpz_class(1) << 62;
  mpz_class lim128 = mpz_class(1) << 124;
  if (bound < lim64) return Arith::Int64;
  if (bound < lim128) return Arith::Int128;
  return Arith::Big;
}

struct Accum {
  std::uint64_t total = 0;
  std::array<std::uint64_t, 64> buckets{};
  std::vector<std::int64_t> flat;
};

// Records a hit given in enumeration order: maps back to the original variable
// order, fixes the sign, and updates counters.
class Recorder {
 public:
  Recorder(int n1, bool want_points, std::vector<int> order)
      : n1_(n1), want_points_(want_points), order_(std::move(order)) {}

  void record(const std::int64_t* x, Accum& acc) const {
    std::array<std::int64_t, kMaxVars> orig{};
    for (int p = 0; p < n1_; ++p) orig[order_[p]] = x[p];
    int first = 0;
    while (orig[first] == 0) ++first;
    const bool flip = orig[first] < 0;
    std::int64_t h = 0;
    for (int i = 0; i < n1_; ++i) {
      if (flip) orig[i] = -orig[i];
      h = std::max(h, orig[i] < 0 ? -orig[i] : orig[i]);
    }
    ++acc.total;
    ++acc.buckets[dyadic_bucket(h)];
    if (want_points_) acc.flat.insert(acc.flat.end(), orig.begin(), orig.begin() + n1_);
  }

  int n1() const { return n1_; }

 private:
  int n1_;
  bool want_points_;
  std::vector<int> order_;
};

template <typename Fn>
std::vector<Accum> run_items(std::size_t items, int threads, Fn&& fn) {
  const int workers = static_cast<int>(std::clamp<std::size_t>(
      static_cast<std::size_t>(std::max(threads, 1)), 1, std::max<std::size_t>(items, 1)));
  std::vector<Accum> accs(workers);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&](int id) {
    try {
      for (;;) {
        std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= items) break;
        fn(i, accs[id]);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(items);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int id = 0; id < workers; ++id) pool.emplace_back(work, id);
  }
  if (failure) std::rethrow_exception(failure);
  return accs;
}

CountReport finalize(std::vector<Accum> accs, int n1, std::int64_t b, Method method,
                     bool want_points) {
  CountReport r;
  r.bound = b;
  r.method = method;
  std::array<std::uint64_t, 64> buckets{};
  std::size_t npoints = 0;
  for (const auto& a : accs) {
    r.total += a.total;
    for (int k = 0; k < 64; ++k) buckets[k] += a.buckets[k];
    npoints += a.flat.size() / std::max(n1, 1);
  }
  for (int k = 0; k < 64; ++k) {
    if (buckets[k] != 0) r.dyadic_buckets[k] = buckets[k];
  }
  if (want_points) {
    std::vector<ProjectivePoint> pts;
    pts.reserve(npoints);
    for (auto& a : accs) {
      for (std::size_t i = 0; i < a.flat.size(); i += n1) {
        pts.push_back(normalize(std::span<const std::int64_t>(a.flat.data() + i, n1)));
      }
      a.flat.clear();
      a.flat.shrink_to_fit();
    }
    std::sort(pts.begin(), pts.end());
    r.points = std::move(pts);
  }
  return r;
}

// Straight-line evaluation of a form on int64 vectors in accumulator type T.
template <typename T>
class Compiled {
 public:
  explicit Compiled(const Form& f) : nvars_(f.num_vars()) {
    for (const auto& [e, c] : f.terms()) {
      coefs_.push_back(from_mpz<T>(c));
      for (int x : e) exps_.push_back(static_cast<std::uint8_t>(x));
    }
  }

  T operator()(const std::int64_t* x) const {
    T sum = 0;
    const std::uint8_t* e = exps_.data();
    for (std::size_t t = 0; t < coefs_.size(); ++t, e += nvars_) {
      T v = coefs_[t];
      for (int i = 0; i < nvars_; ++i) {
        for (int k = 0; k < e[i]; ++k) v *= static_cast<T>(x[i]);
      }
      sum += v;
    }
    return sum;
  }

 private:
  int nvars_;
  std::vector<T> coefs_;
  std::vector<std::uint8_t> exps_;
};

// ---------------------------------------------------------------------------
// Naive: every normalized vector of the box, full evaluation.

template <typename IsZero>
std::vector<Accum> naive_enumerate(int n1, std::int64_t b, int threads, const Recorder& rec,
                                   const IsZero& is_zero) {
  const std::size_t items = static_cast<std::size_t>(n1) * static_cast<std::size_t>(b);
  return run_items(items, threads, [&](std::size_t item, Accum& acc) {
    const int lead = static_cast<int>(item / b);
    const std::int64_t v = static_cast<std::int64_t>(item % b) + 1;
    std::array<std::int64_t, kMaxVars> x{};
    x[lead] = v;
    for (int i = lead + 1; i < n1; ++i) x[i] = -b;
    for (;;) {
      if (is_zero(x.data())) {
        std::int64_t g = 0;
        for (int i = 0; i < n1; ++i) g = std::gcd(g, x[i]);
        if (g == 1) rec.record(x.data(), acc);
      }
      int p = n1 - 1;
      while (p > lead && x[p] == b) {
        x[p] = -b;
        --p;
      }
      if (p == lead) break;
      ++x[p];
    }
  });
}

// ---------------------------------------------------------------------------
// Sieved: solve for the last coordinate.

u128 isqrt_u128(u128 v) {
  if (v == 0) return 0;
  u128 x = static_cast<u128>(std::sqrt(static_cast<long double>(v)));
  while (x > 0 && x * x > v) --x;
  while ((x + 1) * (x + 1) <= v) ++x;
  return x;
}

// Integer e-th root of a ≥ 0 if exact and ≤ limit.
std::optional<std::int64_t> exact_root(i128 a, int e, std::int64_t limit) {
  if (a == 0) return 0;
  long double approx = std::pow(static_cast<long double>(a), 1.0L / e);
  std::int64_t guess = static_cast<std::int64_t>(std::llround(approx));
  for (std::int64_t t = std::max<std::int64_t>(guess - 2, 1); t <= guess + 2; ++t) {
    if (t > limit) break;
    i128 p = 1;
    bool over = false;
    for (int k = 0; k < e; ++k) {
      p *= t;
      if (p > a) {
        over = true;
        break;
      }
    }
    if (!over && p == a) return t;
  }
  return std::nullopt;
}

class DivisorTable {
 public:
  explicit DivisorTable(std::uint64_t limit) : spf_(limit + 1, 0) {
    for (std::uint64_t i = 2; i <= limit; ++i) {
      if (spf_[i] != 0) continue;
      for (std::uint64_t j = i; j <= limit; j += i) {
        if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
      }
    }
  }

  // Positive divisors of n (1 ≤ n ≤ limit), unsorted.
  void divisors(std::uint64_t n, std::vector<std::int64_t>& out) const {
    out.clear();
    out.push_back(1);
    while (n > 1) {
      std::uint32_t p = spf_[n];
      int e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      const std::size_t base = out.size();
      std::int64_t pk = 1;
      for (int k = 1; k <= e; ++k) {
        pk *= p;
        for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
      }
    }
  }

 private:
  std::vector<std::uint32_t> spf_;
};

struct TailChoice {
  int u = 0;
  int t = 0;
  int primary = -1;
  bool bilinear = false;
};

TailChoice choose_tail(const std::vector<Form>& forms, int n1) {
  TailChoice c;
  if (forms.empty()) {
    c.u = n1 - 2;
    c.t = n1 - 1;
    return c;
  }
  auto min_positive_degree = [n1](const Form& f) {
    int best = 1 << 20;
    for (int i = 0; i < n1; ++i) {
      int d = f.degree_in(i);
      if (d > 0) best = std::min(best, d);
    }
    return best;
  };
  c.primary = 0;
  for (int i = 1; i < static_cast<int>(forms.size()); ++i) {
    const auto& a = forms[i];
    const auto& b = forms[c.primary];
    auto ka = std::make_pair(min_positive_degree(a), a.num_terms());
    auto kb = std::make_pair(min_positive_degree(b), b.num_terms());
    if (ka < kb) c.primary = i;
  }
  const Form& f = forms[c.primary];
  std::vector<int> deg(n1);
  for (int i = 0; i < n1; ++i) deg[i] = f.degree_in(i);
  for (int t = n1 - 1; t >= 0; --t) {
    for (int u = n1 - 1; u >= 0; --u) {
      if (u == t || deg[u] > 1 || deg[t] > 1) continue;
      for (const auto& [e, _] : f.terms()) {
        if (e[u] == 1 && e[t] == 1) {
          c.u = u;
          c.t = t;
          c.bilinear = true;
          return c;
        }
      }
    }
  }
  c.t = -1;
  for (int i = n1 - 1; i >= 0; --i) {
    if (deg[i] > 0 && (c.t < 0 || deg[i] < deg[c.t])) c.t = i;
  }
  c.u = -1;
  for (int i = n1 - 1; i >= 0; --i) {
    if (i == c.t) continue;
    if (c.u < 0 || deg[i] < deg[c.u]) c.u = i;
  }
  return c;
}

template <typename T>
class SievedEngine {
 public:
  // `forms` are already permuted into enumeration order: prefix, u, t.
  SievedEngine(const std::vector<Form>& forms, int primary, bool bilinear, int n1,
               std::int64_t b)
      : n1_(n1), prefix_(n1 - 2), b_(b) {
    for (int i = 0; i < static_cast<int>(forms.size()); ++i) {
      if (i != primary) extras_.emplace_back(forms[i]);
    }
    if (primary < 0) {
      identically_zero_ = true;
      return;
    }
    const Form& f = forms[primary];
    du_ = f.degree_in(n1 - 2);
    dt_ = f.degree_in(n1 - 1);
    for (const auto& [e, c] : f.terms()) {
      group_.push_back((e[n1 - 2]) * (dt_ + 1) + e[n1 - 1]);
      coef_.push_back(from_mpz<T>(c));
      for (int i = 0; i < prefix_; ++i) exps_.push_back(static_cast<std::uint8_t>(e[i]));
    }
    max_prefix_deg_ = f.degree();
    if constexpr (std::is_same_v<T, std::int64_t>) {
      if (bilinear && du_ == 1 && dt_ == 1) setup_divisors(f, b);
    }
  }

  std::size_t items() const {
    return prefix_ >= 1 ? static_cast<std::size_t>(prefix_) * b_ + 1 : 1;
  }

  void process(std::size_t item, const Recorder& rec, Accum& acc) const {
    std::array<std::int64_t, kMaxVars> x{};
    std::vector<T> d(static_cast<std::size_t>((du_ + 1) * (dt_ + 1)), T(0));
    if (prefix_ == 0 || item == static_cast<std::size_t>(prefix_) * b_) {
      inner(x.data(), 0, true, d, rec, acc);
      return;
    }
    const int lead = static_cast<int>(item / b_);
    x[lead] = static_cast<std::int64_t>(item % b_) + 1;
    for (int i = lead + 1; i < prefix_; ++i) x[i] = -b_;
    for (;;) {
      std::int64_t g = 0;
      for (int i = lead; i < prefix_; ++i) g = std::gcd(g, x[i]);
      inner(x.data(), g, false, d, rec, acc);
      int p = prefix_ - 1;
      while (p > lead && x[p] == b_) {
        x[p] = -b_;
        --p;
      }
      if (p == lead) break;
      ++x[p];
    }
  }

 private:
  void setup_divisors(const Form& f, std::int64_t b) {
    // |N| = |beta gamma - alpha delta| bounded group by group.
    std::array<mpz_class, 4> gb;  // index: j*2 + k
    for (const auto& [e, c] : f.terms()) {
      int deg = 0;
      for (int i = 0; i < prefix_; ++i) deg += e[i];
      mpz_class p;
      mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(b), static_cast<unsigned long>(deg));
      gb[e[n1_ - 2] * 2 + e[n1_ - 1]] += abs(c) * p;
    }
    mpz_class nmax = gb[2] * gb[1] + gb[3] * gb[0];
    if (nmax <= kDivisorLimit) {
      divisors_ = std::make_shared<DivisorTable>(std::max<std::uint64_t>(nmax.get_ui(), 1));
    }
  }

  void inner(std::int64_t* x, std::int64_t gp, bool all_zero, std::vector<T>& d,
             const Recorder& rec, Accum& acc) const {
    if (identically_zero_) {
      sweep_all(x, gp, all_zero, rec, acc);
      return;
    }
    std::fill(d.begin(), d.end(), T(0));
    std::array<std::array<T, 64>, kMaxVars> pw;
    for (int i = 0; i < prefix_; ++i) {
      pw[i][0] = 1;
      for (int e = 1; e <= max_prefix_deg_; ++e) pw[i][e] = pw[i][e - 1] * static_cast<T>(x[i]);
    }
    const std::uint8_t* e = exps_.data();
    for (std::size_t t = 0; t < coef_.size(); ++t, e += prefix_) {
      T v = coef_[t];
      for (int i = 0; i < prefix_; ++i) {
        if (e[i] != 0) v *= pw[i][e[i]];
      }
      d[group_[t]] += v;
    }
    const std::int64_t ulo = all_zero ? 0 : -b_;
    if constexpr (std::is_same_v<T, std::int64_t>) {
      if (divisors_ && d[1 * 2 + 1] != 0) {
        bilinear(x, gp, all_zero, d, rec, acc);
        return;
      }
    }
    std::array<T, 64> c;
    for (std::int64_t u = ulo; u <= b_; ++u) {
      x[prefix_] = u;
      const std::int64_t gu = std::gcd(gp, u);
      for (int k = 0; k <= dt_; ++k) {
        T acc_k = d[du_ * (dt_ + 1) + k];
        for (int j = du_ - 1; j >= 0; --j) acc_k = acc_k * static_cast<T>(u) + d[j * (dt_ + 1) + k];
        c[k] = acc_k;
      }
      const std::int64_t tlo = (all_zero && u == 0) ? 1 : -b_;
      solve(c.data(), tlo, [&](std::int64_t t) { emit(x, gu, t, rec, acc); });
    }
  }

  void sweep_all(std::int64_t* x, std::int64_t gp, bool all_zero, const Recorder& rec,
                 Accum& acc) const {
    for (std::int64_t u = all_zero ? 0 : -b_; u <= b_; ++u) {
      x[prefix_] = u;
      const std::int64_t gu = std::gcd(gp, u);
      for (std::int64_t t = (all_zero && u == 0) ? 1 : -b_; t <= b_; ++t) emit(x, gu, t, rec, acc);
    }
  }

  void emit(std::int64_t* x, std::int64_t gu, std::int64_t t, const Recorder& rec,
            Accum& acc) const {
    if (std::gcd(gu, t) != 1) return;
    x[prefix_ + 1] = t;
    for (const auto& ex : extras_) {
      if (ex(x) != 0) return;
    }
    rec.record(x, acc);
  }

  T horner(const T* c, int e, std::int64_t t) const {
    T v = c[e];
    for (int k = e - 1; k >= 0; --k) v = v * static_cast<T>(t) + c[k];
    return v;
  }

  template <typename Emit>
  void solve(const T* c, std::int64_t tlo, Emit&& emit_t) const {
    const std::int64_t thi = b_;
    int e = dt_;
    while (e >= 0 && c[e] == 0) --e;
    if (e < 0) {
      for (std::int64_t t = tlo; t <= thi; ++t) emit_t(t);
      return;
    }
    if (e == 0) return;
    if (e == 1) {
      if (c[0] % c[1] != 0) return;
      T t = -c[0] / c[1];
      if (t >= tlo && t <= thi) emit_t(static_cast<std::int64_t>(t));
      return;
    }
    bool binomial = true;
    for (int k = 1; k < e; ++k) binomial = binomial && c[k] == 0;
    if (binomial) {
      if (c[0] == 0) {
        if (tlo <= 0) emit_t(0);
        return;
      }
      if (c[0] % c[e] != 0) return;
      T r = -c[0] / c[e];
      const bool negative = r < 0;
      if (negative && e % 2 == 0) return;
      auto root = exact_root(static_cast<i128>(negative ? -r : r), e, thi);
      if (!root) return;
      if (e % 2 == 0) {
        if (-*root >= tlo) emit_t(-*root);
        if (*root >= tlo) emit_t(*root);
      } else {
        std::int64_t t = negative ? -*root : *root;
        if (t >= tlo) emit_t(t);
      }
      return;
    }
    if constexpr (std::is_same_v<T, std::int64_t>) {
      if (e == 2) {
        solve_quadratic(c, tlo, thi, emit_t);
        return;
      }
    }
    if (thi - tlo + 1 >= kSieveThreshold) {
      sieve(c, e, tlo, thi, emit_t);
      return;
    }
    for (std::int64_t t = tlo; t <= thi; ++t) {
      if (horner(c, e, t) == 0) emit_t(t);
    }
  }

  template <typename Emit>
  void solve_quadratic(const T* c, std::int64_t tlo, std::int64_t thi, Emit& emit_t) const {
    const i128 a = c[2];
    const i128 bb = c[1];
    const i128 cc = c[0];
    const i128 disc = bb * bb - 4 * a * cc;
    if (disc < 0) return;
    const i128 s = static_cast<i128>(isqrt_u128(static_cast<u128>(disc)));
    if (s * s != disc) return;
    const i128 den = 2 * a;
    std::array<i128, 2> nums{-bb - s, -bb + s};
    const int count = s == 0 ? 1 : 2;
    std::array<std::int64_t, 2> roots{};
    int found = 0;
    for (int i = 0; i < count; ++i) {
      if (nums[i] % den != 0) continue;
      i128 t = nums[i] / den;
      if (t >= tlo && t <= thi) roots[found++] = static_cast<std::int64_t>(t);
    }
    if (found == 2 && roots[0] > roots[1]) std::swap(roots[0], roots[1]);
    for (int i = 0; i < found; ++i) emit_t(roots[i]);
  }

  template <typename Emit>
  void sieve(const T* c, int e, std::int64_t tlo, std::int64_t thi, Emit& emit_t) const {
    // Roots mod 64 and mod 81; a (prefix, u) with no root modulo either is skipped.
    std::array<std::int64_t, 64> c64{};
    std::array<std::int64_t, 64> c81{};
    for (int k = 0; k <= e; ++k) {
      c64[k] = static_cast<std::int64_t>(((c[k] % 64) + 64) % 64);
      c81[k] = static_cast<std::int64_t>(((c[k] % 81) + 81) % 81);
    }
    std::uint64_t mask64 = 0;
    for (std::int64_t r = 0; r < 64; ++r) {
      std::int64_t v = c64[e];
      for (int k = e - 1; k >= 0; --k) v = (v * r + c64[k]) & 63;
      if (v == 0) mask64 |= std::uint64_t{1} << r;
    }
    if (mask64 == 0) return;
    std::array<bool, 81> ok81{};
    bool any81 = false;
    for (std::int64_t r = 0; r < 81; ++r) {
      std::int64_t v = c81[e];
      for (int k = e - 1; k >= 0; --k) v = (v * r + c81[k]) % 81;
      ok81[r] = v == 0;
      any81 = any81 || ok81[r];
    }
    if (!any81) return;
    std::int64_t r81 = ((tlo % 81) + 81) % 81;
    for (std::int64_t t = tlo; t <= thi; ++t) {
      if (((mask64 >> (t & 63)) & 1) && ok81[r81] && horner(c, e, t) == 0) emit_t(t);
      if (++r81 == 81) r81 = 0;
    }
  }

  // f = alpha u t + beta u + gamma t + delta with alpha != 0:
  // (alpha u + gamma)(alpha t + beta) = beta gamma - alpha delta.
  void bilinear(std::int64_t* x, std::int64_t gp, bool all_zero, const std::vector<T>& d,
                const Recorder& rec, Accum& acc) const {
    const std::int64_t alpha = d[3];
    const std::int64_t beta = d[2];
    const std::int64_t gamma = d[1];
    const std::int64_t delta = d[0];
    const std::int64_t n = beta * gamma - alpha * delta;
    const std::int64_t ulo = all_zero ? 0 : -b_;
    auto t_lo = [&](std::int64_t u) { return (all_zero && u == 0) ? std::int64_t{1} : -b_; };
    auto hit = [&](std::int64_t u, std::int64_t t) {
      x[prefix_] = u;
      emit(x, std::gcd(gp, u), t, rec, acc);
    };
    if (n == 0) {
      std::optional<std::int64_t> u0;
      if ((-gamma) % alpha == 0) {
        std::int64_t u = -gamma / alpha;
        if (u >= ulo && u <= b_) {
          u0 = u;
          for (std::int64_t t = t_lo(u); t <= b_; ++t) hit(u, t);
        }
      }
      if ((-beta) % alpha == 0) {
        std::int64_t t = -beta / alpha;
        for (std::int64_t u = ulo; u <= b_; ++u) {
          if (u0 && *u0 == u) continue;
          if (t >= t_lo(u) && t <= b_) hit(u, t);
        }
      }
      return;
    }
    thread_local std::vector<std::int64_t> divs;
    thread_local std::vector<std::pair<std::int64_t, std::int64_t>> sols;
    sols.clear();
    divisors_->divisors(static_cast<std::uint64_t>(n < 0 ? -n : n), divs);
    for (std::int64_t p : divs) {
      for (std::int64_t a : {p, -p}) {
        const std::int64_t q = n / a;
        if ((a - gamma) % alpha != 0 || (q - beta) % alpha != 0) continue;
        const std::int64_t u = (a - gamma) / alpha;
        const std::int64_t t = (q - beta) / alpha;
        if (u < ulo || u > b_ || t < t_lo(u) || t > b_) continue;
        sols.emplace_back(u, t);
      }
    }
    std::sort(sols.begin(), sols.end());
    for (auto [u, t] : sols) hit(u, t);
  }

  static constexpr std::int64_t kSieveThreshold = 145;
  static constexpr unsigned long kDivisorLimit = 1ul << 24;

  int n1_;
  int prefix_;
  std::int64_t b_;
  bool identically_zero_ = false;
  int du_ = 0;
  int dt_ = 0;
  int max_prefix_deg_ = 0;
  std::vector<int> group_;
  std::vector<T> coef_;
  std::vector<std::uint8_t> exps_;
  std::vector<Compiled<T>> extras_;
  std::shared_ptr<DivisorTable> divisors_;
};

// ---------------------------------------------------------------------------
// Meet in the middle for f = g(left) + h(right).

Form restrict_variables(const Form& f, const std::vector<int>& vars) {
  TermMap out;
  for (const auto& [e, c] : f.terms()) {
    bool inside = true;
    int inside_deg = 0;
    for (int v : vars) inside_deg += e[v];
    inside = inside_deg == f.degree();
    if (!inside) continue;
    Exponents sub;
    for (int v : vars) sub.push_back(e[v]);
    out.emplace(std::move(sub), c);
  }
  return Form(static_cast<int>(vars.size()) - 1, f.degree(), std::move(out));
}

template <typename T>
std::vector<Accum> mitm_enumerate(const Form& f, const VariableSplit& split, std::int64_t b,
                                  const CountOptions& opts, const Recorder& rec) {
  const int n1 = f.num_vars();
  const auto& left = split.left;
  const auto& right = split.right;
  const std::uint64_t side = static_cast<std::uint64_t>(2 * b + 1);
  long double entries = std::pow(static_cast<long double>(side), left.size());
  const long double bytes = entries * (sizeof(T) + sizeof(std::uint64_t));
  if (bytes > static_cast<long double>(opts.memory_cap)) {
    throw MemoryBudgetExceeded(
        "meet-in-the-middle table needs " + std::to_string(static_cast<unsigned long long>(bytes)) +
        " bytes, above the cap of " + std::to_string(opts.memory_cap) +
        "; split the run by the leading coordinate or raise --memory-cap");
  }
  const Compiled<T> g(restrict_variables(f, left));
  const Compiled<T> h(restrict_variables(f, right));
  const std::uint64_t count = static_cast<std::uint64_t>(entries);

  std::vector<std::pair<T, std::uint64_t>> table;
  table.reserve(count);
  std::array<std::int64_t, kMaxVars> lv{};
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::uint64_t r = idx;
    for (std::size_t i = 0; i < left.size(); ++i) {
      lv[i] = static_cast<std::int64_t>(r % side) - b;
      r /= side;
    }
    table.emplace_back(g(lv.data()), idx);
  }
  std::sort(table.begin(), table.end());

  // Work items: value of the first right-hand coordinate.
  return run_items(static_cast<std::size_t>(side), opts.threads, [&](std::size_t item, Accum& acc) {
    std::array<std::int64_t, kMaxVars> rv{};
    std::array<std::int64_t, kMaxVars> full{};
    std::array<std::int64_t, kMaxVars> lvals{};
    const std::size_t nr = right.size();
    rv[0] = static_cast<std::int64_t>(item) - b;
    for (std::size_t i = 1; i < nr; ++i) rv[i] = -b;
    for (;;) {
      const T key = -h(rv.data());
      auto lo = std::lower_bound(table.begin(), table.end(), key,
                                 [](const auto& e, const T& k) { return e.first < k; });
      for (auto it = lo; it != table.end() && it->first == key; ++it) {
        std::uint64_t r = it->second;
        for (std::size_t i = 0; i < left.size(); ++i) {
          lvals[i] = static_cast<std::int64_t>(r % side) - b;
          r /= side;
        }
        for (std::size_t i = 0; i < left.size(); ++i) full[left[i]] = lvals[i];
        for (std::size_t i = 0; i < nr; ++i) full[right[i]] = rv[i];
        int first = 0;
        while (first < n1 && full[first] == 0) ++first;
        if (first == n1 || full[first] < 0) continue;
        std::int64_t gg = 0;
        for (int i = 0; i < n1; ++i) gg = std::gcd(gg, full[i]);
        if (gg == 1) rec.record(full.data(), acc);
      }
      std::size_t p = nr - 1;
      while (p > 0 && rv[p] == b) {
        rv[p] = -b;
        --p;
      }
      if (p == 0) break;
      ++rv[p];
    }
  });
}

std::vector<int> identity_order(int n1) {
  std::vector<int> o(n1);
  std::iota(o.begin(), o.end(), 0);
  return o;
}

template <typename T>
std::vector<Accum> sieved_run(const std::vector<Form>& forms, int n1, std::int64_t b,
                              const CountOptions& opts) {
  TailChoice tail = choose_tail(forms, n1);
  std::vector<int> order;
  for (int i = 0; i < n1; ++i) {
    if (i != tail.u && i != tail.t) order.push_back(i);
  }
  order.push_back(tail.u);
  order.push_back(tail.t);
  std::vector<int> perm(n1);
  for (int p = 0; p < n1; ++p) perm[order[p]] = p;
  std::vector<Form> permuted;
  for (const auto& f : forms) permuted.push_back(permute_variables(f, perm));
  SievedEngine<T> engine(permuted, tail.primary, tail.bilinear, n1, b);
  Recorder rec(n1, opts.want_points, order);
  return run_items(engine.items(), opts.threads,
                   [&](std::size_t item, Accum& acc) { engine.process(item, rec, acc); });
}

template <typename T>
std::vector<Accum> naive_run(const std::vector<Form>& forms, int n1, std::int64_t b,
                             const CountOptions& opts) {
  std::vector<Compiled<T>> compiled;
  for (const auto& f : forms) compiled.emplace_back(f);
  Recorder rec(n1, opts.want_points, identity_order(n1));
  return naive_enumerate(n1, b, opts.threads, rec, [&](const std::int64_t* x) {
    for (const auto& c : compiled) {
      if (c(x) != 0) return false;
    }
    return true;
  });
}

std::vector<Accum> naive_run_big(const std::vector<Form>& forms, int n1, std::int64_t b,
                                 const CountOptions& opts) {
  Recorder rec(n1, opts.want_points, identity_order(n1));
  return naive_enumerate(n1, b, opts.threads, rec, [&](const std::int64_t* x) {
    for (const auto& f : forms) {
      if (f.evaluate(std::span<const std::int64_t>(x, n1)) != 0) return false;
    }
    return true;
  });
}

}  // namespace

std::optional<VariableSplit> separable_split(const Form& f) {
  const int n1 = f.num_vars();
  std::vector<int> parent(n1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& [e, _] : f.terms()) {
    int first = -1;
    for (int i = 0; i < n1; ++i) {
      if (e[i] == 0) continue;
      if (first < 0) {
        first = i;
      } else {
        parent[find(i)] = find(first);
      }
    }
  }
  std::map<int, std::vector<int>> comps;
  for (int i = 0; i < n1; ++i) comps[find(i)].push_back(i);
  if (comps.size() < 2) return std::nullopt;
  std::vector<std::vector<int>> groups;
  for (auto& [_, g] : comps) groups.push_back(g);
  const int ng = static_cast<int>(groups.size());
  if (ng > 20) throw InvalidArgument("too many variables for a separability split");
  int best_mask = 0;
  int best_gap = n1 + 1;
  for (int mask = 1; mask < (1 << ng) - 1; ++mask) {
    int size = 0;
    for (int i = 0; i < ng; ++i) {
      if (mask & (1 << i)) size += static_cast<int>(groups[i].size());
    }
    if (2 * size > n1) continue;
    int gap = n1 - 2 * size;
    if (gap < best_gap) {
      best_gap = gap;
      best_mask = mask;
    }
  }
  VariableSplit s;
  for (int i = 0; i < ng; ++i) {
    auto& side = (best_mask & (1 << i)) ? s.left : s.right;
    side.insert(side.end(), groups[i].begin(), groups[i].end());
  }
  std::sort(s.left.begin(), s.left.end());
  std::sort(s.right.begin(), s.right.end());
  return s;
}

CountReport count_points_on_system(std::span<const Form> forms, std::int64_t b,
                                   const CountOptions& opts, std::optional<int> ambient_dim) {
  const auto start = std::chrono::steady_clock::now();
  if (b < 1) throw InvalidArgument("height bound must be at least 1");
  if (opts.threads < 1) throw InvalidArgument("thread count must be positive");
  int n = 0;
  if (ambient_dim) {
    n = *ambient_dim;
  } else if (!forms.empty()) {
    n = forms[0].ambient_dim();
  } else {
    throw InvalidArgument("an empty system needs an explicit ambient dimension");
  }
  for (const auto& f : forms) {
    if (f.ambient_dim() != n) throw DimensionMismatch("forms do not share the ambient dimension");
  }
  const int n1 = n + 1;
  if (n1 > kMaxVars) throw InvalidArgument("too many variables");
  if (b > (std::int64_t{1} << 40)) throw InvalidArgument("height bound too large");

  std::vector<Form> active;
  for (const auto& f : forms) {
    if (f.is_zero()) continue;
    if (f.degree() == 0) {
      CountReport empty;
      empty.bound = b;
      empty.method = opts.method;
      if (opts.want_points) empty.points.emplace();
      return empty;
    }
    active.push_back(f);
  }

  std::optional<VariableSplit> split;
  if (opts.method == Method::MeetInMiddle) {
    if (active.size() != 1) {
      throw MethodInapplicable("meet-in-the-middle needs exactly one nonzero form");
    }
    split = separable_split(active[0]);
    if (!split) {
      throw MethodInapplicable("form is not variable-separable; use naive or sieved");
    }
  }

  std::vector<Accum> accs;
  if (n1 == 1) {
    Recorder rec(1, opts.want_points, {0});
    accs.emplace_back();
    std::int64_t one = 1;
    bool zero = std::all_of(active.begin(), active.end(), [&](const Form& f) {
      return f.evaluate(std::span<const std::int64_t>(&one, 1)) == 0;
    });
    if (zero) rec.record(&one, accs[0]);
  } else {
    const Arith arith = choose_arith(value_bound(active, b));
    if (arith == Arith::Big) {
      accs = naive_run_big(active, n1, b, opts);
    } else if (opts.method == Method::Naive) {
      accs = arith == Arith::Int64 ? naive_run<std::int64_t>(active, n1, b, opts)
                                   : naive_run<i128>(active, n1, b, opts);
    } else if (opts.method == Method::Sieved) {
      accs = arith == Arith::Int64 ? sieved_run<std::int64_t>(active, n1, b, opts)
                                   : sieved_run<i128>(active, n1, b, opts);
    } else {
      Recorder rec(n1, opts.want_points, identity_order(n1));
      accs = arith == Arith::Int64
                 ? mitm_enumerate<std::int64_t>(active[0], *split, b, opts, rec)
                 : mitm_enumerate<i128>(active[0], *split, b, opts, rec);
    }
  }
  CountReport report = finalize(std::move(accs), n1, b, opts.method, opts.want_points);
  report.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

CountReport count_points(const Form& f, std::int64_t b, const CountOptions& opts) {
  std::array<Form, 1> one{f};
  return count_points_on_system(one, b, opts, f.ambient_dim());
}

std::vector<ProjectivePoint> singular_point_search(const Form& f, std::int64_t h, int threads) {
  auto grad = gradient(f);
  CountOptions opts;
  opts.method = Method::Sieved;
  opts.want_points = true;
  opts.threads = threads;
  auto report = count_points_on_system(grad, h, opts, f.ambient_dim());
  return std::move(*report.points);
}

}  // namespace hypercount
