#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include "medbid/bidding.hpp"
#include "medbid/instance.hpp"
#include "medbid/solvers.hpp"

namespace medbid {

enum class ChainMode { CostCompetitive, SizeCompetitive };

/// Nested facility sets F_1 <= ... <= F_n, one per budget, with the bidding
/// provenance that produced them: the bid set plus either the index set K
/// (cost mode) or the per-k paid bids (size mode).
template <class Num>
struct FacilityChain {
  ChainMode mode = ChainMode::CostCompetitive;
  std::vector<FacilitySet> sets;  // index k-1
  BidSet<Num> bids;
  std::vector<int> index_set;                // cost mode: K, ascending, 1-based
  std::vector<std::vector<Num>> paid_per_k;  // size mode: B_k per k

  int n() const { return static_cast<int>(sets.size()); }
  const FacilitySet& set_for(int k) const { return sets[static_cast<std::size_t>(k - 1)]; }
};

namespace detail {

template <class Num>
void check_costs_non_increasing(const OfflineSolution<Num>& offline) {
  for (int k = 2; k <= offline.n(); ++k)
    if (offline.cost_for(k) > offline.cost_for(k - 1))
      throw std::domain_error(
          "offline costs must be non-increasing in k (run solve_sequence's repair)");
}

template <class Num>
bool within_slack(const Num& lhs, const Num& rhs) {
  if constexpr (numeric_traits<Num>::exact) {
    return lhs <= rhs;
  } else {
    return lhs <= rhs * (1 + numeric_traits<Num>::tolerance) + 1e-12;
  }
}

}  // namespace detail

/// Cost-competitive reduction.  From offline sets F*_1..F*_n (costs
/// non-increasing) and a bidding strategy: the distinct positive costs form
/// the universe, the strategy picks a bid set B on it, each bid maps to the
/// smallest index k whose offline cost equals that bid, and K is those
/// indices plus 1 plus every zero-cost index.  F at the top index copies its
/// offline set; walking K backwards takes gamma against the next chain set;
/// gaps copy downward.  The result is nested with |F_k| <= k and
/// cost(F_k) <= 2 * beta * cost(F*_k) for the bid set's measured ratio beta.
///
/// The smallest-index bid mapping makes the paid bids against threshold
/// cost(F*_k) exactly {cost(F*_l) : l in K, l >= k^-}; mapping ties to the
/// largest index instead breaks that accounting when equal costs span k.
template <class Num>
FacilityChain<Num> build_cost_competitive(const MedianInstance<Num>& inst,
                                          const OfflineSolution<Num>& offline,
                                          const BidderSpec& bidder,
                                          bool require_metric = true) {
  if (require_metric && !metric_report(inst).is_metric)
    throw std::domain_error("cost-competitive reduction requires a metric instance");
  detail::check_costs_non_increasing(offline);

  const int n = offline.n();
  std::map<Num, int> first_index;  // distinct cost -> smallest k
  for (int k = 1; k <= n; ++k) first_index.try_emplace(offline.cost_for(k), k);

  std::vector<Num> universe_values;
  for (const auto& [value, k] : first_index)
    if (value > 0) universe_values.push_back(value);

  FacilityChain<Num> chain;
  chain.mode = ChainMode::CostCompetitive;
  if (!universe_values.empty()) {
    auto universe = Universe<Num>::of(std::move(universe_values));
    chain.bids = make_bids(bidder, universe);
  }

  std::vector<int> K{1};
  for (const Num& bid : chain.bids.bids) K.push_back(first_index.at(bid));
  for (int k = 1; k <= n; ++k)
    if (offline.cost_for(k) == 0) K.push_back(k);
  std::sort(K.begin(), K.end());
  K.erase(std::unique(K.begin(), K.end()), K.end());
  chain.index_set = K;

  std::vector<FacilitySet> at_index(K.size());
  at_index.back() = offline.set_for(K.back());
  for (int i = static_cast<int>(K.size()) - 2; i >= 0; --i) {
    const FacilitySet& next = at_index[static_cast<std::size_t>(i + 1)];
    at_index[static_cast<std::size_t>(i)] =
        gamma(inst, offline.set_for(K[static_cast<std::size_t>(i)]), next);
    if (require_metric) {
      // Per-step service bound summed over customers, guaranteed on metric
      // instances.
      Num lhs = cost(inst, at_index[static_cast<std::size_t>(i)]);
      Num rhs = 2 * cost(inst, offline.set_for(K[static_cast<std::size_t>(i)])) +
                cost(inst, next);
      if (!detail::within_slack(lhs, rhs))
        throw std::logic_error("gamma step exceeded its service bound");
    }
  }

  chain.sets.resize(static_cast<std::size_t>(n));
  std::size_t pos = 0;
  for (int k = 1; k <= n; ++k) {
    if (pos + 1 < K.size() && K[pos + 1] <= k) ++pos;
    chain.sets[static_cast<std::size_t>(k - 1)] = at_index[pos];
  }
  return chain;
}

/// Size-competitive reduction: on universe [n], F_k is the union of F*_b
/// over the bids b paid against threshold k.  Nested because the paid sets
/// grow with k; cost(F_k) <= opt_k because some paid bid is >= k; and
/// |F_k| <= s * beta * k for s-size-approximate offline sets.
template <class Num>
FacilityChain<Num> build_size_competitive(const MedianInstance<Num>& inst,
                                          const OfflineSolution<Num>& offline,
                                          const BidSet<Num>& bids) {
  (void)inst;
  const int n = offline.n();
  FacilityChain<Num> chain;
  chain.mode = ChainMode::SizeCompetitive;
  chain.bids = bids;
  chain.sets.resize(static_cast<std::size_t>(n));
  chain.paid_per_k.resize(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    auto paid = paid_bids(bids, Num(k));
    FacilitySet united;
    for (const Num& b : paid) {
      const double raw = to_double(b);
      const long long idx = std::llround(raw);
      if (idx < 1 || idx > n || !(Num(idx) == b))
        throw std::domain_error("size-competitive bids must be integers in [1, n]");
      united = united.unite(offline.set_for(static_cast<int>(idx)));
    }
    chain.sets[static_cast<std::size_t>(k - 1)] = std::move(united);
    chain.paid_per_k[static_cast<std::size_t>(k - 1)] = std::move(paid);
  }
  return chain;
}

template <class Num>
struct ChainRow {
  int k = 0;
  int size = 0;
  Num cost_value{};
  Num opt{};
  double cost_ratio = 0;
  double size_ratio = 0;
};

template <class Num>
struct ChainReport {
  std::vector<ChainRow<Num>> rows;
  double max_cost_ratio = 0;
  double max_size_ratio = 0;
  bool nesting_ok = true;
};

/// Measures a chain against an exact oracle: per-k sizes, costs and ratios,
/// plus the nesting check.  Verification is non-judgmental; nothing throws
/// on a bad chain.
template <class Num>
ChainReport<Num> verify_chain(const MedianInstance<Num>& inst,
                              const FacilityChain<Num>& chain,
                              const OfflineSolution<Num>& oracle) {
  if (oracle.tag != SolverTag::Exact)
    throw std::invalid_argument("verify_chain needs an exact oracle");
  if (oracle.n() < chain.n())
    throw std::invalid_argument("oracle shorter than chain");
  ChainReport<Num> report;
  report.rows.reserve(static_cast<std::size_t>(chain.n()));
  for (int k = 1; k <= chain.n(); ++k) {
    const FacilitySet& set = chain.set_for(k);
    ChainRow<Num> row;
    row.k = k;
    row.size = set.size();
    row.cost_value = cost(inst, set);
    row.opt = oracle.cost_for(k);
    const double c = to_double(row.cost_value);
    const double o = to_double(row.opt);
    row.cost_ratio = o > 0 ? c / o
                           : (c > 0 ? std::numeric_limits<double>::infinity() : 1.0);
    row.size_ratio = static_cast<double>(row.size) / k;
    report.max_cost_ratio = std::max(report.max_cost_ratio, row.cost_ratio);
    report.max_size_ratio = std::max(report.max_size_ratio, row.size_ratio);
    if (k > 1 && !chain.set_for(k - 1).is_subset_of(set)) report.nesting_ok = false;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace medbid
