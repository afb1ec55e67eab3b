#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "medbid/numeric.hpp"
#include "medbid/random.hpp"

namespace medbid {

/// The set guaranteed to contain the unknown threshold.  Either the positive
/// reals or an explicit finite sorted set of positive values.
template <class Num>
struct Universe {
  bool finite = true;
  std::vector<Num> values;  // strictly increasing, positive

  static Universe positive_reals() {
    Universe u;
    u.finite = false;
    return u;
  }
  static Universe of(std::vector<Num> values) {
    if (values.empty()) throw std::invalid_argument("finite universe must be non-empty");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!(values[i] > 0)) throw std::invalid_argument("universe values must be positive");
      if (i > 0 && !(values[i - 1] < values[i]))
        throw std::invalid_argument("universe values must be strictly increasing");
    }
    Universe u;
    u.values = std::move(values);
    return u;
  }
  static Universe integer_range(long long n) {
    if (n < 1) throw std::invalid_argument("integer universe needs n >= 1");
    std::vector<Num> v;
    v.reserve(static_cast<std::size_t>(n));
    for (long long i = 1; i <= n; ++i) v.push_back(Num(i));
    return of(std::move(v));
  }

  const Num& min() const { return values.front(); }
  const Num& max() const { return values.back(); }
};

/// A committed, increasing sequence of bids.  The conventional opening bid 0 is
/// cost-free and tracked only as a flag.
template <class Num>
struct BidSet {
  std::vector<Num> bids;  // strictly increasing, positive
  bool zero_sentinel = true;
};

namespace detail {

inline double num_from_double_impl(double x, double*) { return x; }
inline Rational num_from_double_impl(double x, Rational*) { return rational_from_double(x); }

template <class Num>
Num num_from_double(double x) {
  return num_from_double_impl(x, static_cast<Num*>(nullptr));
}

/// Largest universe value <= x, if any.
template <class Num>
std::optional<Num> next_smaller(const std::vector<Num>& values, const Num& x) {
  auto it = std::upper_bound(values.begin(), values.end(), x);
  if (it == values.begin()) return std::nullopt;
  return *std::prev(it);
}

template <class Num>
void push_unique(std::vector<Num>& bids, const Num& b) {
  if (bids.empty() || bids.back() < b) bids.push_back(b);
}

}  // namespace detail

/// Doubling bids on the positive reals: {1, 2, 4, ...} up to the first power
/// covering the horizon.
template <class Num>
BidSet<Num> doubling_bids_reals(const Num& horizon) {
  if (!(horizon >= 1)) throw std::domain_error("real-line doubling needs horizon >= 1");
  BidSet<Num> out;
  Num p(1);
  while (true) {
    out.bids.push_back(p);
    if (p >= horizon) break;
    p *= 2;
  }
  return out;
}

/// Doubling bids restricted to a finite universe: each power of two is
/// replaced by the next smaller universe value (skipped when none exists),
/// duplicates are dropped, and max(U) is appended so every threshold is
/// covered.  Powers extend below 1 when the universe does, matching the
/// restriction rule applied to the full doubling sequence.
template <class Num>
BidSet<Num> doubling_bids(const Universe<Num>& universe) {
  if (!universe.finite)
    throw std::invalid_argument("doubling on the reals needs an explicit horizon");
  BidSet<Num> out;
  // Largest power of two <= min(U); start one octave lower is unnecessary
  // because smaller powers have no universe value below them.
  Num p(1);
  if (universe.min() >= 1) {
    while (p * 2 <= universe.min()) p *= 2;
  } else {
    while (p > universe.min()) p /= 2;
  }
  for (;; p *= 2) {
    auto mapped = detail::next_smaller(universe.values, p);
    if (mapped) detail::push_unique(out.bids, *mapped);
    if (p >= universe.max()) break;
  }
  detail::push_unique(out.bids, universe.max());
  return out;
}

/// Randomly translated powers of e on the reals, from the explicit offset xi
/// in [0, 1): all bids e^{i+xi} in [lo, ...] up to the first bid >= hi.
inline BidSet<double> randomized_bids_reals_from_xi(double lo, double hi, double xi) {
  if (!(lo > 0) || !(hi >= lo)) throw std::domain_error("need 0 < lo <= hi");
  BidSet<double> out;
  int i = static_cast<int>(std::ceil(std::log(lo) - xi));
  while (std::exp(i + xi) < lo) ++i;  // guard the rounding of ceil
  while (std::exp(i - 1 + xi) >= lo) --i;
  for (;; ++i) {
    const double b = std::exp(i + xi);
    out.bids.push_back(b);
    if (b >= hi) break;
  }
  return out;
}

inline BidSet<double> randomized_bids_reals(double lo, double hi, std::uint64_t seed) {
  auto rng = seeded_rng(seed);
  return randomized_bids_reals_from_xi(lo, hi, unit_double(rng));
}

/// Randomized bids restricted to a finite universe, from an explicit xi.
/// The translated powers of e run from min(U)/e^2 (the truncation keeps the
/// set finite and only lowers payments) up past max(U); each is replaced by
/// the next smaller universe value and max(U) is appended.
template <class Num>
BidSet<Num> randomized_bids_from_xi(const Universe<Num>& universe, double xi) {
  if (!universe.finite)
    throw std::invalid_argument("randomized bids on the reals need an explicit horizon");
  BidSet<Num> out;
  const double lo = to_double(universe.min()) * std::exp(-2.0);
  const double hi = to_double(universe.max());
  int i = static_cast<int>(std::floor(std::log(lo) - xi)) - 1;
  for (;; ++i) {
    const double b = std::exp(i + xi);
    if (b < lo) continue;
    auto mapped = detail::next_smaller(universe.values, detail::num_from_double<Num>(b));
    if (mapped) detail::push_unique(out.bids, *mapped);
    if (b >= hi) break;
  }
  detail::push_unique(out.bids, universe.max());
  return out;
}

template <class Num>
BidSet<Num> randomized_bids(const Universe<Num>& universe, std::uint64_t seed) {
  auto rng = seeded_rng(seed);
  return randomized_bids_from_xi(universe, unit_double(rng));
}

/// Sum of all bids up to and including T+ = min{b in B : b >= T}.
template <class Num>
Num payment(const BidSet<Num>& bids, const Num& threshold) {
  auto it = std::lower_bound(bids.bids.begin(), bids.bids.end(), threshold);
  if (it == bids.bids.end()) throw std::domain_error("threshold uncovered");
  Num total(0);
  for (auto b = bids.bids.begin(); b <= it; ++b) total += *b;
  return total;
}

/// The bids actually paid against a threshold (everything up to T+).
template <class Num>
std::vector<Num> paid_bids(const BidSet<Num>& bids, const Num& threshold) {
  auto it = std::lower_bound(bids.bids.begin(), bids.bids.end(), threshold);
  if (it == bids.bids.end()) throw std::domain_error("threshold uncovered");
  return std::vector<Num>(bids.bids.begin(), std::next(it));
}

/// Worst-case payment/threshold ratio.  Finite universes are scanned
/// exhaustively.  On the reals the supremum sits just above each bid, so it
/// is evaluated symbolically as (payment at the next bid) / bid, together
/// with the exact ratio at the first bid.
template <class Num>
Num competitive_ratio(const BidSet<Num>& bids, const Universe<Num>& universe) {
  if (bids.bids.empty()) throw std::domain_error("empty bid set");
  std::vector<Num> prefix(bids.bids.size());
  Num run(0);
  for (std::size_t i = 0; i < bids.bids.size(); ++i) {
    run += bids.bids[i];
    prefix[i] = run;
  }
  if (universe.finite) {
    std::optional<Num> best;
    for (const Num& t : universe.values) {
      auto it = std::lower_bound(bids.bids.begin(), bids.bids.end(), t);
      if (it == bids.bids.end()) throw std::domain_error("threshold uncovered");
      Num ratio = prefix[static_cast<std::size_t>(it - bids.bids.begin())] / t;
      if (!best || ratio > *best) best = std::move(ratio);
    }
    return *best;
  }
  Num best = prefix[0] / bids.bids[0];
  for (std::size_t i = 0; i + 1 < bids.bids.size(); ++i) {
    Num ratio = prefix[i + 1] / bids.bids[i];
    if (ratio > best) best = std::move(ratio);
  }
  return best;
}

struct ThresholdStat {
  double threshold = 0;
  double mean_payment = 0;
  double mean_ratio = 0;
  double std_error = 0;  // standard error of mean_ratio
};

struct ExpectedRatioReport {
  std::vector<ThresholdStat> per_threshold;
  double max_mean_ratio = 0;
  double argmax_threshold = 0;
};

/// Monte-Carlo estimate of E[payment]/T per threshold.  Trial i uses seed
/// base_seed + i, so results do not depend on evaluation order.
template <class BidGenerator>
ExpectedRatioReport expected_ratio(BidGenerator&& generate,
                                   const std::vector<double>& thresholds, int trials,
                                   std::uint64_t base_seed) {
  if (trials < 1) throw std::domain_error("trials must be >= 1");
  const std::size_t m = thresholds.size();
  // Welford's running moments: exact when every trial yields the same ratio.
  std::vector<long double> mean_acc(m, 0.0L), m2_acc(m, 0.0L);
  for (int trial = 0; trial < trials; ++trial) {
    BidSet<double> bids = generate(base_seed + static_cast<std::uint64_t>(trial));
    std::vector<double> prefix(bids.bids.size());
    double run = 0;
    for (std::size_t i = 0; i < bids.bids.size(); ++i) {
      run += bids.bids[i];
      prefix[i] = run;
    }
    for (std::size_t j = 0; j < m; ++j) {
      auto it = std::lower_bound(bids.bids.begin(), bids.bids.end(), thresholds[j]);
      if (it == bids.bids.end()) throw std::domain_error("threshold uncovered");
      const double pay = prefix[static_cast<std::size_t>(it - bids.bids.begin())];
      const long double ratio = pay / thresholds[j];
      const long double delta = ratio - mean_acc[j];
      mean_acc[j] += delta / (trial + 1);
      m2_acc[j] += delta * (ratio - mean_acc[j]);
    }
  }
  ExpectedRatioReport report;
  report.per_threshold.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const long double mean = mean_acc[j];
    const long double var = trials > 1 ? std::max(0.0L, m2_acc[j] / (trials - 1)) : 0.0L;
    ThresholdStat& s = report.per_threshold[j];
    s.threshold = thresholds[j];
    s.mean_ratio = static_cast<double>(mean);
    s.mean_payment = static_cast<double>(mean * thresholds[j]);
    s.std_error = static_cast<double>(std::sqrt(static_cast<double>(var) / trials));
    if (j == 0 || s.mean_ratio > report.max_mean_ratio) {
      report.max_mean_ratio = s.mean_ratio;
      report.argmax_threshold = s.threshold;
    }
  }
  return report;
}

/// Convenience form: scan every threshold of a finite universe.
template <class BidGenerator>
ExpectedRatioReport expected_ratio(BidGenerator&& generate, const Universe<double>& universe,
                                   int trials, std::uint64_t base_seed) {
  if (!universe.finite)
    throw std::invalid_argument("expected_ratio over the reals needs an explicit threshold list");
  return expected_ratio(std::forward<BidGenerator>(generate), universe.values, trials,
                        base_seed);
}

/// Which bidding strategy to run, plus the seed for the randomized one.
struct BidderSpec {
  enum class Kind { Doubling, Randomized };
  Kind kind = Kind::Doubling;
  std::uint64_t seed = 0;
};

template <class Num>
BidSet<Num> make_bids(const BidderSpec& spec, const Universe<Num>& universe) {
  if (spec.kind == BidderSpec::Kind::Doubling) return doubling_bids(universe);
  return randomized_bids(universe, spec.seed);
}

}  // namespace medbid
