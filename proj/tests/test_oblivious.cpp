#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "medbid/oblivious.hpp"

#include "test_util.hpp"

using namespace medbid;
using testutil::star3;

namespace {
const double kTwoE = 2 * std::exp(1.0);
const BidderSpec kDoubling{BidderSpec::Kind::Doubling, 0};

/// Construction invariant of the cost-competitive chain: for every k, the
/// tail of paid offline costs is at most beta * cost(F*_k) for the measured
/// ratio beta of the bid set on its universe.
template <class Num>
void check_paid_tail_bound(const FacilityChain<Num>& chain,
                           const OfflineSolution<Num>& offline, double beta) {
  for (int k = 1; k <= chain.n(); ++k) {
    Num tail(0);
    int k_minus = 1;
    for (int i : chain.index_set)
      if (i <= k) k_minus = i;
    for (int i : chain.index_set)
      if (i >= k_minus) tail += offline.cost_for(i);
    CHECK(to_double(tail) <= beta * to_double(offline.cost_for(k)) * (1 + 1e-9));
  }
}
}  // namespace

TEST_CASE("cost-competitive chain on the l=3 star") {
  auto inst = star3();
  auto offline = solve_sequence(inst, SolverTag::Exact);
  auto chain = build_cost_competitive(inst, offline, kDoubling);

  // Universe {1, 7/3, 3}; doubling picks {1, 3}; smallest-index map gives
  // K = {1, 3} (index 4 shares cost 1 but index 3 claims the bid first).
  CHECK(chain.bids.bids == std::vector<Rational>{Rational(1), Rational(3)});
  CHECK(chain.index_set == std::vector<int>{1, 3});
  CHECK(chain.set_for(3) == FacilitySet{1, 2, 3});
  CHECK(chain.set_for(1) == FacilitySet{1});  // gamma of the hub into the leaves
  CHECK(chain.set_for(2) == FacilitySet{1});
  CHECK(chain.set_for(4) == FacilitySet{1, 2, 3});

  auto report = verify_chain(inst, chain, offline);
  CHECK(report.nesting_ok);
  CHECK(report.max_cost_ratio <= 8.0);
  for (const auto& row : report.rows) CHECK(row.size <= row.k);
}

TEST_CASE("equal offline costs collapse K to {1}") {
  std::vector<std::vector<Rational>> dist = {{5, 5, 5}};
  auto inst = MedianInstance<Rational>::make({"u"}, {"a", "b", "c"}, std::move(dist));
  auto offline = solve_sequence(inst, SolverTag::Exact);
  auto chain = build_cost_competitive(inst, offline, kDoubling);
  CHECK(chain.index_set == std::vector<int>{1});
  for (int k = 1; k <= 3; ++k) {
    CHECK(chain.set_for(k) == offline.set_for(1));
    CHECK(chain.set_for(k).size() <= 1);
  }
}

TEST_CASE("zero-cost indices join K and keep the chain defined") {
  // Two customers sit exactly on facilities a and b; opt_2 = 0.
  std::vector<std::vector<Rational>> dist = {{0, 2, 1}, {2, 0, 1}};
  auto inst = MedianInstance<Rational>::make({"u", "v"}, {"a", "b", "c"}, std::move(dist));
  auto offline = solve_sequence(inst, SolverTag::Exact);
  REQUIRE(offline.cost_for(2) == Rational(0));
  auto chain = build_cost_competitive(inst, offline, kDoubling);
  CHECK(cost(inst, chain.set_for(2)) == Rational(0));
  CHECK(cost(inst, chain.set_for(3)) == Rational(0));
  auto report = verify_chain(inst, chain, offline);
  CHECK(report.nesting_ok);
  for (const auto& row : report.rows) CHECK(row.size <= row.k);
}

TEST_CASE("non-metric instances are rejected unless asked otherwise") {
  std::vector<std::vector<Rational>> dist = {{1, 0}, {0, 3}};
  auto inst = MedianInstance<Rational>::make({"p", "q"}, {"a", "b"}, std::move(dist));
  auto offline = solve_sequence(inst, SolverTag::Exact);
  CHECK_THROWS_AS(build_cost_competitive(inst, offline, kDoubling), std::domain_error);
  auto chain = build_cost_competitive(inst, offline, kDoubling, false);
  CHECK(verify_chain(inst, chain, offline).nesting_ok);
}

TEST_CASE("offline costs must be non-increasing") {
  auto inst = star3();
  auto offline = solve_sequence(inst, SolverTag::Exact);
  std::swap(offline.costs[0], offline.costs[2]);
  CHECK_THROWS_AS(build_cost_competitive(inst, offline, kDoubling), std::domain_error);
}

TEST_CASE("cost-competitive chains meet the 8x bound on random metric instances") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto inst = testutil::random_metric_double(10, 8, seed + 4000);
    auto offline = solve_sequence(inst, SolverTag::Exact);
    auto chain = build_cost_competitive(inst, offline, kDoubling);
    auto report = verify_chain(inst, chain, offline);
    CHECK(report.nesting_ok);
    CHECK(report.max_cost_ratio <= 8.0 * (1 + 1e-9));
    for (const auto& row : report.rows) CHECK(row.size <= row.k);

    Universe<double> universe = Universe<double>::of([&] {
      std::map<double, int> uniq;
      for (int k = 1; k <= offline.n(); ++k) uniq.try_emplace(offline.cost_for(k), k);
      std::vector<double> v;
      for (auto& [val, idx] : uniq)
        if (val > 0) v.push_back(val);
      return v;
    }());
    const double beta = competitive_ratio(chain.bids, universe);
    CHECK(beta <= 4.0 * (1 + 1e-12));
    check_paid_tail_bound(chain, offline, beta);
    CHECK(report.max_cost_ratio <= 2 * beta * (1 + 1e-9));
  }
}

TEST_CASE("approximate offline solvers stay within 2*beta of their own costs") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    auto inst = testutil::random_metric_double(12, 9, seed + 4600);
    auto oracle = solve_sequence(inst, SolverTag::Exact);
    for (SolverTag tag : {SolverTag::LocalSearch, SolverTag::GreedySize}) {
      auto offline = solve_sequence(inst, tag, 0.1);
      auto chain = build_cost_competitive(inst, offline, kDoubling);
      auto report = verify_chain(inst, chain, oracle);
      CHECK(report.nesting_ok);
      for (const auto& row : report.rows) CHECK(row.size <= row.k);
      for (int k = 1; k <= chain.n(); ++k)
        CHECK(to_double(cost(inst, chain.set_for(k))) <=
              2 * 4.0 * to_double(offline.cost_for(k)) * (1 + 1e-9));
    }
  }
}

TEST_CASE("randomized bidder keeps per-k mean ratios under 2e") {
  auto inst = testutil::random_metric_double(12, 9, 9100);
  auto offline = solve_sequence(inst, SolverTag::Exact);
  const int n = offline.n();
  const int seeds = 300;
  std::vector<double> ratio_sum(static_cast<std::size_t>(n), 0.0);
  for (int s = 0; s < seeds; ++s) {
    BidderSpec bidder{BidderSpec::Kind::Randomized, static_cast<std::uint64_t>(s)};
    auto chain = build_cost_competitive(inst, offline, bidder);
    auto report = verify_chain(inst, chain, offline);
    REQUIRE(report.nesting_ok);
    for (const auto& row : report.rows) {
      REQUIRE(row.size <= row.k);
      ratio_sum[static_cast<std::size_t>(row.k - 1)] += row.cost_ratio;
    }
  }
  for (int k = 1; k <= n; ++k)
    CHECK(ratio_sum[static_cast<std::size_t>(k - 1)] / seeds <= kTwoE * 1.05);
}

TEST_CASE("randomized chains are reproducible per seed") {
  auto inst = testutil::random_metric_double(10, 7, 777);
  auto offline = solve_sequence(inst, SolverTag::Exact);
  BidderSpec bidder{BidderSpec::Kind::Randomized, 42};
  auto a = build_cost_competitive(inst, offline, bidder);
  auto b = build_cost_competitive(inst, offline, bidder);
  CHECK(a.sets == b.sets);
  CHECK(a.bids.bids == b.bids.bids);
}

TEST_CASE("size-competitive chain unions the paid offline sets") {
  auto inst = star3();
  auto offline = solve_sequence(inst, SolverTag::Exact);
  BidSet<Rational> bids{{1, 2, 4}, true};
  auto chain = build_size_competitive(inst, offline, bids);

  CHECK(chain.set_for(1) == offline.set_for(1));
  CHECK(chain.set_for(2) == offline.set_for(1).unite(offline.set_for(2)));
  auto expected3 =
      offline.set_for(1).unite(offline.set_for(2)).unite(offline.set_for(4));
  CHECK(chain.set_for(3) == expected3);
  CHECK(chain.set_for(3).size() <= 7);  // sum of paid bids 1+2+4

  auto report = verify_chain(inst, chain, offline);
  CHECK(report.nesting_ok);
  for (const auto& row : report.rows) CHECK(row.cost_value <= row.opt);
}

TEST_CASE("size-competitive chain on a single facility") {
  std::vector<std::vector<Rational>> dist = {{2}};
  auto inst = MedianInstance<Rational>::make({"u"}, {"a"}, std::move(dist));
  auto offline = solve_sequence(inst, SolverTag::Exact);
  auto chain = build_size_competitive(inst, offline, BidSet<Rational>{{1}, true});
  CHECK(chain.set_for(1) == offline.set_for(1));
}

TEST_CASE("size-competitive rejects non-covering or fractional bids") {
  auto inst = star3();
  auto offline = solve_sequence(inst, SolverTag::Exact);
  CHECK_THROWS_WITH(build_size_competitive(inst, offline, BidSet<Rational>{{1, 2}, true}),
                    "threshold uncovered");
  CHECK_THROWS_AS(
      build_size_competitive(inst, offline, BidSet<Rational>{{Rational(7, 2), Rational(4)}, true}),
      std::domain_error);
}

TEST_CASE("size-competitive chains: exact costs, 4x sizes (rational)") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto inst = generate_random_metric(10, 7, seed + 5200);
    auto offline = solve_sequence(inst, SolverTag::Exact);
    auto bids = doubling_bids(Universe<Rational>::integer_range(offline.n()));
    auto chain = build_size_competitive(inst, offline, bids);
    auto report = verify_chain(inst, chain, offline);
    CHECK(report.nesting_ok);
    for (const auto& row : report.rows) {
      CHECK(row.cost_value <= row.opt);  // exact rational comparison
      CHECK(row.size <= 4 * row.k);
    }
  }
}

TEST_CASE("verify_chain is non-judgmental about bad chains") {
  auto inst = star3();
  auto offline = solve_sequence(inst, SolverTag::Exact);

  FacilityChain<Rational> raw;
  raw.mode = ChainMode::CostCompetitive;
  raw.sets = offline.sets;  // offline sets need not nest
  auto report = verify_chain(inst, raw, offline);
  CHECK_FALSE(report.nesting_ok);  // {f} then {f,g1} then {g1,g2,g3}
  CHECK(report.rows.size() == 4);

  FacilityChain<Rational> everything;
  everything.mode = ChainMode::SizeCompetitive;
  everything.sets.assign(4, FacilitySet::full(4));
  auto full_report = verify_chain(inst, everything, offline);
  CHECK(full_report.nesting_ok);
  CHECK(full_report.max_cost_ratio <= 1.0);
  CHECK(full_report.max_size_ratio == 4.0);  // |F| / 1 at k = 1
}
