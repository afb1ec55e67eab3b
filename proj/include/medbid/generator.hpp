#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "medbid/instance.hpp"
#include "medbid/numeric.hpp"
#include "medbid/random.hpp"

namespace medbid {

/// Random metric instance: customers and facilities sampled uniformly in the
/// unit square, Euclidean distances rounded onto the grid of rationals with
/// denominator 10^6.  Rounding can break the triangle inequality by up to
/// 2e-6, so distances are repaired by metric closure (all-pairs shortest path
/// over customers+facilities) before the instance is emitted; the output
/// always passes metric_report.
inline MedianInstance<Rational> generate_random_metric(int n_customers,
                                                       int n_facilities,
                                                       std::uint64_t seed) {
  if (n_customers < 1 || n_facilities < 1)
    throw std::invalid_argument("generator needs at least one customer and facility");
  auto rng = seeded_rng(seed);
  const int n = n_customers + n_facilities;
  std::vector<double> xs(static_cast<std::size_t>(n)), ys(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    xs[static_cast<std::size_t>(i)] = unit_double(rng);
    ys[static_cast<std::size_t>(i)] = unit_double(rng);
  }

  constexpr long long kDen = 1000000;
  auto grid_dist = [&](int i, int j) {
    const double dx = xs[static_cast<std::size_t>(i)] - xs[static_cast<std::size_t>(j)];
    const double dy = ys[static_cast<std::size_t>(i)] - ys[static_cast<std::size_t>(j)];
    const double d = std::sqrt(dx * dx + dy * dy);
    return Rational(BigInt(std::llround(d * static_cast<double>(kDen))), BigInt(kDen));
  };

  // Floyd-Warshall closure over the joint point set.
  std::vector<std::vector<Rational>> d(static_cast<std::size_t>(n),
                                       std::vector<Rational>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Rational v = grid_dist(i, j);
      d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
      d[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
    }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Rational via = d[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] +
                       d[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
        if (via < d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
          d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = via;
      }

  std::vector<std::string> customers(static_cast<std::size_t>(n_customers));
  std::vector<std::string> facilities(static_cast<std::size_t>(n_facilities));
  for (int u = 0; u < n_customers; ++u) customers[static_cast<std::size_t>(u)] = "c" + std::to_string(u);
  for (int f = 0; f < n_facilities; ++f) facilities[static_cast<std::size_t>(f)] = "f" + std::to_string(f);

  std::vector<std::vector<Rational>> dist(static_cast<std::size_t>(n_customers),
                                          std::vector<Rational>(static_cast<std::size_t>(n_facilities)));
  for (int u = 0; u < n_customers; ++u)
    for (int f = 0; f < n_facilities; ++f)
      dist[static_cast<std::size_t>(u)][static_cast<std::size_t>(f)] =
          d[static_cast<std::size_t>(u)][static_cast<std::size_t>(n_customers + f)];
  return MedianInstance<Rational>::make(std::move(customers), std::move(facilities),
                                        std::move(dist));
}

inline MedianInstance<double> instance_to_double(const MedianInstance<Rational>& in) {
  MedianInstance<double> out;
  out.customers = in.customers;
  out.facilities = in.facilities;
  out.dist.resize(in.dist.size());
  for (std::size_t u = 0; u < in.dist.size(); ++u) {
    out.dist[u].reserve(in.dist[u].size());
    for (const Rational& v : in.dist[u]) out.dist[u].push_back(to_double(v));
  }
  out.weights.reserve(in.weights.size());
  for (const Rational& w : in.weights) out.weights.push_back(to_double(w));
  return out;
}

}  // namespace medbid
