#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "medbid/instance.hpp"

namespace medbid {

inline constexpr int kExactSolverFacilityGuard = 25;

enum class SolverTag { Exact, LocalSearch, GreedySize };

inline const char* solver_tag_name(SolverTag tag) {
  switch (tag) {
    case SolverTag::Exact: return "exact";
    case SolverTag::LocalSearch: return "local_search";
    case SolverTag::GreedySize: return "greedy_size";
  }
  return "?";
}

/// One facility set per budget k in [1..n], plus its cost.  Produced by
/// solve_sequence; costs are non-increasing in k after monotone repair.
template <class Num>
struct OfflineSolution {
  SolverTag tag = SolverTag::Exact;
  std::vector<FacilitySet> sets;  // index k-1
  std::vector<Num> costs;

  int n() const { return static_cast<int>(sets.size()); }
  const FacilitySet& set_for(int k) const { return sets[static_cast<std::size_t>(k - 1)]; }
  const Num& cost_for(int k) const { return costs[static_cast<std::size_t>(k - 1)]; }
};

namespace detail {

inline void check_k_range(int k, int n_facilities) {
  if (k < 1 || k > n_facilities)
    throw std::domain_error("k out of range [1, " + std::to_string(n_facilities) + "]");
}

/// Visits all size-k index subsets of [0, n) in lexicographic order.
template <class Visit>
void for_each_combination(int n, int k, Visit&& visit) {
  std::vector<int> pick(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i;
  while (true) {
    visit(pick);
    int i = k - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace detail

/// Minimum-cost set of exactly k facilities by exhaustive enumeration.
/// Cost is monotone under inclusion, so size-k enumeration also covers all
/// smaller sets.  Ties resolve to the lexicographically smallest index set.
template <class Num>
std::pair<FacilitySet, Num> exact_kmedian(const MedianInstance<Num>& inst, int k) {
  const int n = inst.num_facilities();
  detail::check_k_range(k, n);
  if (n > kExactSolverFacilityGuard)
    throw std::domain_error("instance too large for exact solver");

  std::optional<Num> best;
  std::vector<int> best_pick;
  detail::for_each_combination(n, k, [&](const std::vector<int>& pick) {
    Num total(0);
    for (int u = 0; u < inst.num_customers(); ++u) {
      const auto& row = inst.dist[static_cast<std::size_t>(u)];
      Num d = row[static_cast<std::size_t>(pick[0])];
      for (int i = 1; i < k; ++i) {
        const Num& cand = row[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])];
        if (cand < d) d = cand;
      }
      total += inst.weights[static_cast<std::size_t>(u)] * d;
    }
    if (!best || total < *best) {
      best = std::move(total);
      best_pick = pick;
    }
  });
  return {FacilitySet(std::move(best_pick)), *best};
}

/// Single-swap local search seeded by greedy additions.  A swap is taken only
/// if it improves cost by a factor of at least (1 + epsilon/k), which bounds
/// the number of iterations; the result admits no such swap.
template <class Num>
std::pair<FacilitySet, Num> local_search_kmedian(const MedianInstance<Num>& inst, int k,
                                                 const Num& epsilon) {
  const int n = inst.num_facilities();
  detail::check_k_range(k, n);
  if (!(epsilon > 0)) throw std::domain_error("epsilon must be positive");

  // Greedy start: repeatedly add the facility with the largest cost decrease.
  FacilitySet current;
  for (int step = 0; step < k; ++step) {
    int best_f = -1;
    std::optional<Num> best_cost;
    for (int f = 0; f < n; ++f) {
      if (current.contains(f)) continue;
      Num c = cost(inst, current.with(f));
      if (!best_cost || c < *best_cost) {
        best_cost = std::move(c);
        best_f = f;
      }
    }
    current = current.with(best_f);
  }
  Num current_cost = cost(inst, current);

  const Num accept_factor = Num(1) + epsilon / Num(k);
  while (true) {
    int best_out = -1, best_in = -1;
    std::optional<Num> best_cost;
    for (int out : current) {
      for (int in = 0; in < n; ++in) {
        if (current.contains(in)) continue;
        Num c = cost(inst, current.without(out).with(in));
        if (!best_cost || c < *best_cost) {
          best_cost = std::move(c);
          best_out = out;
          best_in = in;
        }
      }
    }
    if (!best_cost || !(*best_cost < current_cost) ||
        !(*best_cost * accept_factor <= current_cost))
      break;
    current = current.without(best_out).with(best_in);
    current_cost = *best_cost;
  }
  return {current, current_cost};
}

/// Adds facilities by maximum cost decrease (ties to the smallest index)
/// until the cost reaches the target opt_k.  The target must be reachable
/// with all facilities open.
template <class Num>
FacilitySet greedy_size_approx(const MedianInstance<Num>& inst, int k, const Num& opt_k) {
  const int n = inst.num_facilities();
  detail::check_k_range(k, n);
  if (cost(inst, FacilitySet::full(n)) > opt_k)
    throw std::domain_error("target unreachable");

  FacilitySet current;
  std::optional<Num> current_cost;  // empty set: treated as above any target
  while (!current_cost || *current_cost > opt_k) {
    int best_f = -1;
    std::optional<Num> best_cost;
    for (int f = 0; f < n; ++f) {
      if (current.contains(f)) continue;
      Num c = cost(inst, current.with(f));
      if (!best_cost || c < *best_cost) {
        best_cost = std::move(c);
        best_f = f;
      }
    }
    current = current.with(best_f);
    current_cost = std::move(best_cost);
  }
  return current;
}

/// Runs the chosen solver for every k in [1..n] and repairs the cost sequence
/// to be non-increasing in k (a cheaper smaller set replaces a pricier larger
/// one), as the chain constructions require.
template <class Num>
OfflineSolution<Num> solve_sequence(const MedianInstance<Num>& inst, SolverTag tag,
                                    const Num& epsilon = Num(1) / Num(10)) {
  const int n = inst.num_facilities();
  OfflineSolution<Num> out;
  out.tag = tag;
  out.sets.reserve(static_cast<std::size_t>(n));
  out.costs.reserve(static_cast<std::size_t>(n));

  std::vector<Num> opts;
  if (tag == SolverTag::GreedySize) {
    for (int k = 1; k <= n; ++k) opts.push_back(exact_kmedian(inst, k).second);
  }

  for (int k = 1; k <= n; ++k) {
    switch (tag) {
      case SolverTag::Exact: {
        auto [set, c] = exact_kmedian(inst, k);
        out.sets.push_back(std::move(set));
        out.costs.push_back(std::move(c));
        break;
      }
      case SolverTag::LocalSearch: {
        auto [set, c] = local_search_kmedian(inst, k, epsilon);
        out.sets.push_back(std::move(set));
        out.costs.push_back(std::move(c));
        break;
      }
      case SolverTag::GreedySize: {
        auto set = greedy_size_approx(inst, k, opts[static_cast<std::size_t>(k - 1)]);
        Num c = cost(inst, set);
        out.sets.push_back(std::move(set));
        out.costs.push_back(std::move(c));
        break;
      }
    }
  }

  for (int k = 1; k < n; ++k) {
    if (out.costs[static_cast<std::size_t>(k)] > out.costs[static_cast<std::size_t>(k - 1)]) {
      out.costs[static_cast<std::size_t>(k)] = out.costs[static_cast<std::size_t>(k - 1)];
      out.sets[static_cast<std::size_t>(k)] = out.sets[static_cast<std::size_t>(k - 1)];
    }
  }
  return out;
}

}  // namespace medbid
