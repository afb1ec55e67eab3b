#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "medbid/generator.hpp"
#include "medbid/instance.hpp"
#include "medbid/numeric.hpp"
#include "medbid/random.hpp"

#include "test_util.hpp"

using namespace medbid;
using testutil::star3;

TEST_CASE("cost on the l=3 star") {
  auto inst = star3();
  CHECK(cost(inst, FacilitySet{0}) == Rational(3));
  CHECK(cost(inst, FacilitySet{1}) == Rational(5));  // 1/3 + 2*(2+1/3)
  CHECK(cost(inst, FacilitySet{1, 2, 3}) == Rational(1));
  CHECK(cost(inst, FacilitySet{0, 1, 2, 3}) == Rational(1));
}

TEST_CASE("cost is zero when every customer has a zero-distance facility") {
  std::vector<std::vector<Rational>> dist = {{0, 7}, {5, 0}};
  auto inst = MedianInstance<Rational>::make({"a", "b"}, {"p", "q"}, std::move(dist));
  CHECK(cost(inst, FacilitySet{0, 1}) == Rational(0));
}

TEST_CASE("cost respects customer weights") {
  auto inst = star3();
  inst.weights = {Rational(2), Rational(1), Rational(1)};
  CHECK(cost(inst, FacilitySet{0}) == Rational(4));
  CHECK(cost(inst, FacilitySet{1, 2, 3}) == Rational(4, 3));
}

TEST_CASE("cost of the empty set is a domain error") {
  auto inst = star3();
  CHECK_THROWS_AS(cost(inst, FacilitySet{}), std::domain_error);
  CHECK_THROWS_WITH(cost(inst, FacilitySet{}), "cost of empty facility set undefined");
}

TEST_CASE("instance construction rejects bad shapes") {
  CHECK_THROWS_AS(MedianInstance<Rational>::make({}, {"f"}, {}), std::invalid_argument);
  CHECK_THROWS_AS(MedianInstance<Rational>::make({"a"}, {}, {{}}), std::invalid_argument);
  CHECK_THROWS_AS(MedianInstance<Rational>::make({"a"}, {"f"}, {{Rational(1), Rational(2)}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(MedianInstance<double>::make({"a"}, {"f"}, {{-1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(
      MedianInstance<double>::make({"a"}, {"f"}, {{1.0}}, {1.0, 2.0}),
      std::invalid_argument);
}

TEST_CASE("facility_distance on the l=3 star") {
  auto inst = star3();
  // d'(g1,g2): best path runs through customer 1 or 2: 1/3 + (2+1/3) = 8/3.
  CHECK(facility_distance(inst, 1, 2) == Rational(8, 3));
  CHECK(facility_distance(inst, 2, 1) == Rational(8, 3));
  // d'(f,f) = 2 * min_x d_xf.
  CHECK(facility_distance(inst, 0, 0) == Rational(2));
}

TEST_CASE("facility_distance with a zero-distance customer") {
  std::vector<std::vector<Rational>> dist = {{0, 2}};
  auto inst = MedianInstance<Rational>::make({"a"}, {"p", "q"}, std::move(dist));
  CHECK(facility_distance(inst, 0, 0) == Rational(0));
  CHECK(facility_distance(inst, 0, 1) == Rational(2));
}

TEST_CASE("metric_report on the star and on shortest-path instances") {
  auto inst = star3();
  auto report = metric_report(inst);
  CHECK(report.is_metric);
  REQUIRE(report.lambda_star.has_value());
  CHECK(*report.lambda_star == Rational(1));

  auto generated = generate_random_metric(6, 5, 17);
  auto gen_report = metric_report(generated);
  CHECK(gen_report.is_metric);
}

TEST_CASE("metric_report finds the worst quadruple") {
  // d(p,a)=1, d(p,b)=0, d(q,a)=0, d(q,b)=3: quadruple (b,p,a,q) has
  // lhs d(q,b)=3 against rhs d(p,b)+d(p,a)+d(q,a)=1.
  std::vector<std::vector<Rational>> dist = {{1, 0}, {0, 3}};
  auto inst = MedianInstance<Rational>::make({"p", "q"}, {"a", "b"}, std::move(dist));
  auto report = metric_report(inst);
  CHECK_FALSE(report.is_metric);
  REQUIRE(report.lambda_star.has_value());
  CHECK(*report.lambda_star == Rational(3));
  REQUIRE(report.witness.has_value());
  CHECK(inst.dist[static_cast<std::size_t>(report.witness->y)]
                 [static_cast<std::size_t>(report.witness->f)] == Rational(3));
  CHECK(is_lambda_relaxed(inst, Rational(3)));
  CHECK_FALSE(is_lambda_relaxed(inst, Rational(2)));
}

TEST_CASE("metric_report reports an unbounded lambda") {
  // Customer p sits on both facilities, q is served free by b but pays for a.
  std::vector<std::vector<Rational>> dist = {{0, 0}, {1, 0}};
  auto inst = MedianInstance<Rational>::make({"p", "q"}, {"a", "b"}, std::move(dist));
  auto report = metric_report(inst);
  CHECK_FALSE(report.is_metric);
  CHECK_FALSE(report.lambda_star.has_value());
  CHECK(report.witness.has_value());
}

TEST_CASE("lambda_star is scale invariant") {
  std::vector<std::vector<Rational>> dist = {{1, 0}, {0, 3}};
  auto inst = MedianInstance<Rational>::make({"p", "q"}, {"a", "b"}, std::move(dist));
  auto scaled = inst;
  for (auto& row : scaled.dist)
    for (auto& v : row) v *= Rational(5, 7);
  CHECK(*metric_report(inst).lambda_star == *metric_report(scaled).lambda_star);
}

TEST_CASE("gamma picks the unique nearest element") {
  // d'(f1,g1) = 1 < d'(f1,g2) = 2 by direct construction.
  std::vector<std::vector<Rational>> dist = {
      {Rational(1, 2), Rational(1, 2), Rational(5)},
      {Rational(1), Rational(5), Rational(1)},
  };
  auto inst = MedianInstance<Rational>::make({"a", "b"}, {"f1", "g1", "g2"}, std::move(dist));
  REQUIRE(facility_distance(inst, 0, 1) == Rational(1));
  REQUIRE(facility_distance(inst, 0, 2) == Rational(2));
  CHECK(gamma(inst, FacilitySet{0}, FacilitySet{1, 2}) == FacilitySet{1});
}

TEST_CASE("gamma fixes A when each element is its own nearest") {
  auto inst = star3();
  // d'(gi,gi) = 2/3 < 8/3 = d'(gi,gj), so every leaf forces itself.
  CHECK(gamma(inst, FacilitySet{1, 2}, FacilitySet{1, 2, 3}) == FacilitySet{1, 2});
}

TEST_CASE("gamma preserves nearest distances and stays small") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    auto inst = testutil::random_metric_double(8, 7, seed);
    auto rng = seeded_rng(seed * 977);
    auto A = testutil::random_nonempty_subset(rng, inst.num_facilities());
    auto B = testutil::random_nonempty_subset(rng, inst.num_facilities());
    auto G = gamma(inst, A, B);
    CHECK(G.size() <= A.size());
    CHECK(G.is_subset_of(B));
    for (int mu : A)
      CHECK(facility_set_distance(inst, mu, G) == facility_set_distance(inst, mu, B));
    // Inclusion-minimal: no single element can be dropped.
    for (int g : G) {
      auto trial = G.without(g);
      bool still_ok = !trial.empty();
      for (int mu : A)
        if (still_ok &&
            facility_set_distance(inst, mu, trial) != facility_set_distance(inst, mu, B))
          still_ok = false;
      CHECK_FALSE(still_ok);
    }
  }
}

TEST_CASE("gamma service bound: d_xGamma <= 2 d_xA + d_xB on metric instances") {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    auto inst = testutil::random_metric_double(10, 8, seed + 1000);
    auto rng = seeded_rng(seed * 31 + 7);
    auto A = testutil::random_nonempty_subset(rng, inst.num_facilities());
    auto B = testutil::random_nonempty_subset(rng, inst.num_facilities());
    auto G = gamma(inst, A, B);
    for (int x = 0; x < inst.num_customers(); ++x) {
      const double lhs = service_distance(inst, x, G);
      const double rhs = 2 * service_distance(inst, x, A) + service_distance(inst, x, B);
      CHECK(lhs <= rhs * (1 + 1e-9));
      ++checked;
    }
  }
  CHECK(checked > 0);
}

namespace {
template <class Num>
void check_cost_monotone_exhaustive(const MedianInstance<Num>& inst) {
  const int n = inst.num_facilities();
  REQUIRE(n <= 6);
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> xs;
    for (int f = 0; f < n; ++f)
      if (mask & (1u << f)) xs.push_back(f);
    FacilitySet X(std::move(xs));
    for (unsigned super = mask; super < (1u << n); super = (super + 1) | mask) {
      std::vector<int> ys;
      for (int f = 0; f < n; ++f)
        if (super & (1u << f)) ys.push_back(f);
      FacilitySet Y(std::move(ys));
      CHECK(cost(inst, Y) <= cost(inst, X));
      if (super == (1u << n) - 1) break;
    }
  }
}
}  // namespace

TEST_CASE("cost is monotone under inclusion (exhaustive, up to 6 facilities)") {
  check_cost_monotone_exhaustive(star3());
  check_cost_monotone_exhaustive(generate_random_metric(9, 6, 2024));
}

TEST_CASE("facility_distance satisfies the triangle inequality on metric instances") {
  auto inst = testutil::random_metric_double(9, 6, 404);
  REQUIRE(metric_report(inst).is_metric);
  for (int f = 0; f < inst.num_facilities(); ++f)
    for (int g = 0; g < inst.num_facilities(); ++g)
      for (int h = 0; h < inst.num_facilities(); ++h)
        CHECK(facility_distance(inst, f, h) <=
              (facility_distance(inst, f, g) + facility_distance(inst, g, h)) * (1 + 1e-9));
}

TEST_CASE("rational results are reproducible bit for bit") {
  auto inst = generate_random_metric(7, 6, 99);
  auto again = generate_random_metric(7, 6, 99);
  CHECK(inst.dist == again.dist);
  CHECK(cost(inst, FacilitySet{0, 3}) == cost(again, FacilitySet{0, 3}));
  CHECK(facility_distance(inst, 1, 4) == facility_distance(again, 1, 4));
}
