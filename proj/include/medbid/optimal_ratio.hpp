#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

namespace medbid {

inline constexpr long long kOptimalRatioGuard = 20000;

/// Exact ratio with a small numerator/denominator; den >= 1, reduced.
struct Fraction {
  long long num = 0;
  long long den = 1;

  Fraction() = default;
  Fraction(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Fraction& a, const Fraction& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator<(const Fraction& a, const Fraction& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator<=(const Fraction& a, const Fraction& b) { return !(b < a); }
};

namespace detail {

/// Feasibility of ratio r = rp/rq on U = [n]: does an increasing bid sequence
/// ending at n exist whose every prefix sum S_i is at most r*(b_{i-1}+1)?
/// (The worst threshold between consecutive bids is b_{i-1}+1.)  DP over the
/// last bid: min_prefix[b] = b + min over feasible predecessors of their
/// minimal prefix sum.  A predecessor b' can precede bid b exactly when
/// min_prefix[b'] + b <= r*(b'+1); rearranged, while b stays below
/// cap(b') = r*(b'+1) - min_prefix[b'].  Caps only expire as b grows, so a
/// lazy min-heap on the prefix sums gives O(n log n).
struct RatioDp {
  bool feasible = false;
  std::vector<long long> min_prefix;  // 0 marks unreachable (sums are positive)
  std::vector<long long> parent;
};

inline RatioDp ratio_feasible_dp(long long n, __int128 rp, __int128 rq) {
  RatioDp dp;
  dp.min_prefix.assign(static_cast<std::size_t>(n + 1), 0);
  dp.parent.assign(static_cast<std::size_t>(n + 1), -1);

  struct Item {
    long long min_prefix;
    long long bid;
    __int128 cap_scaled;  // rp*(bid+1) - rq*min_prefix, compared against rq*b
  };
  auto later = [](const Item& a, const Item& b) {
    return a.min_prefix != b.min_prefix ? a.min_prefix > b.min_prefix : a.bid > b.bid;
  };
  std::priority_queue<Item, std::vector<Item>, decltype(later)> active(later);

  for (long long b = 1; b <= n; ++b) {
    while (!active.empty() && active.top().cap_scaled < rq * b) active.pop();
    long long best = 0;
    long long from = -1;
    if (rq * b <= rp) {  // opening bid: S_1 = b <= r against threshold 1
      best = b;
      from = 0;
    }
    if (!active.empty()) {
      const long long chained = active.top().min_prefix + b;
      if (best == 0 || chained < best) {
        best = chained;
        from = active.top().bid;
      }
    }
    if (best == 0) continue;
    dp.min_prefix[static_cast<std::size_t>(b)] = best;
    dp.parent[static_cast<std::size_t>(b)] = from;
    active.push({best, b, rp * (b + 1) - rq * best});
  }
  dp.feasible = dp.min_prefix[static_cast<std::size_t>(n)] != 0;
  return dp;
}

/// Exact integer pair (P, Q) with v = P / Q for a finite positive double.
inline void double_as_fraction(double v, __int128& p, __int128& q) {
  int exp = 0;
  const double mant = std::frexp(v, &exp);  // v = mant * 2^exp
  p = static_cast<__int128>(static_cast<long long>(std::ldexp(mant, 53)));
  const int shift = 53 - exp;
  if (shift >= 0) {
    q = static_cast<__int128>(1) << shift;
  } else {
    p <<= -shift;
    q = 1;
  }
}

inline bool ratio_feasible_double(long long n, double r) {
  __int128 p, q;
  double_as_fraction(r, p, q);
  return ratio_feasible_dp(n, p, q).feasible;
}

inline long long floor_mul(double v, long long q) {
  __int128 p, den;
  double_as_fraction(v, p, den);
  return static_cast<long long>((p * q) / den);
}

}  // namespace detail

struct OptimalDetRatio {
  Fraction ratio;
  std::vector<long long> bids;
};

/// Exact worst-case ratio of a concrete bid set over U = [max bid]:
/// max_i S_i / (b_{i-1} + 1).
inline Fraction bid_set_ratio_exact(const std::vector<long long>& bids) {
  if (bids.empty()) throw std::domain_error("empty bid set");
  Fraction best(0, 1);
  long long sum = 0, prev = 0;
  for (long long b : bids) {
    sum += b;
    Fraction r(sum, prev + 1);
    if (best < r) best = r;
    prev = b;
  }
  return best;
}

/// Exactly optimal deterministic competitive ratio over all bid sets in [n],
/// plus one optimal set.  The optimum is a fraction with denominator <= n;
/// a double bisection (each probe checked exactly) brackets it tightly
/// enough that the bracket contains a single such fraction, which is then
/// confirmed by the exact feasibility test.
inline OptimalDetRatio optimal_det_ratio(long long n) {
  if (n < 1) throw std::domain_error("n must be >= 1");
  if (n > kOptimalRatioGuard)
    throw std::domain_error("n above optimal_det_ratio guard");

  double lo = 1.0, hi = 4.0;
  if (detail::ratio_feasible_double(n, lo)) {
    hi = lo;  // n == 1
  } else {
    // Bids {1,2,4,...} restricted to [n] are strictly better than 4.
    while (hi - lo > 0.5e-10) {
      const double mid = lo + (hi - lo) / 2;
      if (detail::ratio_feasible_double(n, mid))
        hi = mid;
      else
        lo = mid;
    }
  }

  // The optimum lies in (lo, hi] (or equals hi when n == 1).  Any interval
  // this short holds at most one fraction with denominator <= n <= 2*10^4:
  // two distinct ones p1/q1, p2/q2 differ by at least 1/(q1*q2) > 2.5e-9.
  std::optional<Fraction> found;
  for (long long q = 1; q <= n && !found; ++q) {
    const long long p_lo = detail::floor_mul(lo, q) + 1;
    const long long p_hi = detail::floor_mul(hi, q);
    for (long long p = p_lo; p <= p_hi; ++p) {
      if (detail::ratio_feasible_dp(n, p, q).feasible) {
        found = Fraction(p, q);
        break;
      }
    }
  }
  if (!found && detail::ratio_feasible_double(n, hi)) {
    // n == 1 path: hi itself is the exact answer.
    found = Fraction(1, 1);
  }
  if (!found) throw std::logic_error("optimal ratio bracket failed");

  auto dp = detail::ratio_feasible_dp(n, found->num, found->den);
  OptimalDetRatio out;
  out.ratio = *found;
  for (long long b = n; b > 0; b = dp.parent[static_cast<std::size_t>(b)])
    out.bids.push_back(b);
  std::reverse(out.bids.begin(), out.bids.end());
  return out;
}

}  // namespace medbid
