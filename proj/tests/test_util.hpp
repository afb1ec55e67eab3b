#pragma once

#include <cstdint>
#include <vector>

#include "medbid/generator.hpp"
#include "medbid/instance.hpp"
#include "medbid/numeric.hpp"
#include "medbid/random.hpp"

namespace medbid::testutil {

/// The l=3 two-budget star, written out by hand from its shortest-path
/// closure: customers 1..3, facility 0 is the hub at distance 1 from every
/// customer, facility j in {1,2,3} is customer j's leaf at distance 1/3,
/// and every other customer reaches that leaf through the hub (1 + 1 + 1/3).
inline MedianInstance<Rational> star3() {
  const Rational third(1, 3);
  const Rational far = Rational(2) + third;
  std::vector<std::vector<Rational>> dist = {
      {1, third, far, far},
      {1, far, third, far},
      {1, far, far, third},
  };
  return MedianInstance<Rational>::make({"c1", "c2", "c3"}, {"f", "g1", "g2", "g3"},
                                        std::move(dist));
}

inline FacilitySet random_nonempty_subset(std::mt19937_64& rng, int n_facilities) {
  std::vector<int> members;
  for (int f = 0; f < n_facilities; ++f)
    if (unit_double(rng) < 0.4) members.push_back(f);
  if (members.empty())
    members.push_back(static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n_facilities))));
  return FacilitySet(std::move(members));
}

inline MedianInstance<double> random_metric_double(int n_customers, int n_facilities,
                                                   std::uint64_t seed) {
  return instance_to_double(generate_random_metric(n_customers, n_facilities, seed));
}

}  // namespace medbid::testutil
