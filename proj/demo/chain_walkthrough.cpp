// Walkthrough of the library: generate a random metric instance, solve the
// offline sequence, run both chain reductions, and print what the guarantees
// say next to what actually happened.

#include <cstdio>

#include "medbid/bidding.hpp"
#include "medbid/generator.hpp"
#include "medbid/hardness.hpp"
#include "medbid/oblivious.hpp"
#include "medbid/solvers.hpp"

using namespace medbid;

int main() {
  auto inst = instance_to_double(generate_random_metric(14, 9, 12345));
  auto offline = solve_sequence(inst, SolverTag::Exact);

  std::printf("offline optima (k: cost):");
  for (int k = 1; k <= offline.n(); ++k)
    std::printf(" %d: %.4f", k, offline.cost_for(k));
  std::printf("\n\n");

  auto cost_chain = build_cost_competitive(inst, offline, BidderSpec{});
  auto cost_report = verify_chain(inst, cost_chain, offline);
  std::printf("cost-competitive chain (|F_k| <= k, cost <= 8 opt_k):\n");
  for (const auto& row : cost_report.rows)
    std::printf("  k=%d size=%d cost=%.4f ratio=%.3f\n", row.k, row.size,
                row.cost_value, row.cost_ratio);
  std::printf("  max ratio %.3f, nested: %s\n\n", cost_report.max_cost_ratio,
              cost_report.nesting_ok ? "yes" : "no");

  auto bids = doubling_bids(Universe<double>::integer_range(offline.n()));
  auto size_chain = build_size_competitive(inst, offline, bids);
  auto size_report = verify_chain(inst, size_chain, offline);
  std::printf("size-competitive chain (cost <= opt_k, |F_k| <= 4k):\n");
  for (const auto& row : size_report.rows)
    std::printf("  k=%d size=%d cost=%.4f size_ratio=%.2f\n", row.k, row.size,
                row.cost_value, row.size_ratio);
  std::printf("  max size ratio %.2f\n\n", size_report.max_size_ratio);

  auto kl = build_kl(4);
  auto two_budget = kl_algorithm(kl.instance, 1, 4);
  std::printf("kl gadget (l=4): two-option algorithm hits %s (target 2 - 1/4)\n",
              format_rational(two_budget.ratio).c_str());
  return 0;
}
