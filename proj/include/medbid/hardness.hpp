#pragma once

#include <bit>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "medbid/bidding.hpp"
#include "medbid/instance.hpp"
#include "medbid/oblivious.hpp"
#include "medbid/solvers.hpp"

namespace medbid {

/// The lower-bound metric space for size-competitive chains: m! customers
/// (one per vector u with u_l in [l]), facility clusters M_1..M_m with
/// |M_l| = l, and an edge of length delta_l = 1 + (m!)^-l from each customer
/// to its cluster-l facility.  Exact rationals are mandatory: the cost gaps
/// shrink like (m!)^-l and underflow float64 by m = 4.
struct AdversarialInstance {
  int m = 0;
  MedianInstance<Rational> instance;
  std::vector<FacilitySet> clusters;  // M_1..M_m, index l-1
  std::vector<Rational> deltas;       // delta_1..delta_m, index l-1
};

namespace detail {

inline long long factorial_ll(int m) {
  long long f = 1;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

/// Customer index of a level vector (u_1..u_m), mixed radix with u_m fastest.
inline long long adversarial_customer_index(const std::vector<int>& u) {
  long long idx = 0;
  for (std::size_t l = 0; l < u.size(); ++l)
    idx = idx * static_cast<long long>(l + 1) + (u[l] - 1);
  return idx;
}

}  // namespace detail

/// Builds the adversarial gadget for 2 <= m <= 6 and validates its two
/// defining identities: cost(M_j) = m! * delta_j (strictly decreasing in j)
/// and metric-ness of the shortest-path distances.
inline AdversarialInstance build_adversarial(int m) {
  if (m < 2 || m > 6) throw std::domain_error("adversarial gadget needs 2 <= m <= 6");
  AdversarialInstance adv;
  adv.m = m;
  const long long mf = detail::factorial_ll(m);

  for (int l = 1; l <= m; ++l)
    adv.deltas.push_back(Rational(1) + Rational(BigInt(1), boost::multiprecision::pow(BigInt(mf), l)));

  std::vector<std::string> facility_ids;
  std::vector<int> cluster_start(static_cast<std::size_t>(m + 1), 0);
  for (int l = 1; l <= m; ++l) {
    cluster_start[static_cast<std::size_t>(l)] = static_cast<int>(facility_ids.size());
    std::vector<int> members;
    for (int i = 1; i <= l; ++i) {
      members.push_back(static_cast<int>(facility_ids.size()));
      facility_ids.push_back("m" + std::to_string(l) + "." + std::to_string(i));
    }
    adv.clusters.emplace_back(std::move(members));
  }

  std::vector<std::string> customer_ids(static_cast<std::size_t>(mf));
  std::vector<std::vector<Rational>> dist(static_cast<std::size_t>(mf),
                                          std::vector<Rational>(facility_ids.size()));
  std::vector<int> u(static_cast<std::size_t>(m));
  for (long long idx = 0; idx < mf; ++idx) {
    long long rest = idx;
    for (int l = m; l >= 1; --l) {
      u[static_cast<std::size_t>(l - 1)] = static_cast<int>(rest % l) + 1;
      rest /= l;
    }
    std::string id = "u";
    for (int l = 1; l <= m; ++l) {
      if (l > 1) id += '.';
      id += std::to_string(u[static_cast<std::size_t>(l - 1)]);
    }
    customer_ids[static_cast<std::size_t>(idx)] = id;
    for (int l = 1; l <= m; ++l) {
      // Detour level for facilities this customer is not wired to: the
      // cheapest second customer hop uses the largest other level.
      const int a = (l == m) ? m - 1 : m;
      const Rational detour = 2 * adv.deltas[static_cast<std::size_t>(a - 1)];
      for (int i = 1; i <= l; ++i) {
        const int f = cluster_start[static_cast<std::size_t>(l)] + i - 1;
        dist[static_cast<std::size_t>(idx)][static_cast<std::size_t>(f)] =
            (u[static_cast<std::size_t>(l - 1)] == i)
                ? adv.deltas[static_cast<std::size_t>(l - 1)]
                : adv.deltas[static_cast<std::size_t>(l - 1)] + detour;
      }
    }
  }
  adv.instance = MedianInstance<Rational>::make(std::move(customer_ids),
                                                std::move(facility_ids), std::move(dist));

  for (int j = 1; j <= m; ++j) {
    const Rational expected = Rational(mf) * adv.deltas[static_cast<std::size_t>(j - 1)];
    if (cost(adv.instance, adv.clusters[static_cast<std::size_t>(j - 1)]) != expected)
      throw std::logic_error("adversarial cluster cost mismatch");
    if (j > 1 && !(expected < Rational(mf) * adv.deltas[static_cast<std::size_t>(j - 2)]))
      throw std::logic_error("adversarial cluster costs must strictly decrease");
  }
  if (!metric_report(adv.instance).is_metric)
    throw std::logic_error("adversarial gadget must be metric");
  return adv;
}

/// Exhaustively verifies, over every non-empty facility subset F with
/// |F| <= max_subset_size, that any F cheaper than cost(M_k) contains some
/// M_l with l >= k, that the witness customer below already pays
/// delta_{j-1}, and that each M_k is the unique optimum among size-k sets.
/// Runs on an integer-scaled copy of the distances; all checks are exact.
inline bool verify_property_ii(const AdversarialInstance& adv, int max_subset_size) {
  const int m = adv.m;
  if (m > 5) throw std::domain_error("subset verification needs m <= 5");
  const int nf = adv.instance.num_facilities();
  const long long nc = adv.instance.num_customers();
  const long long mf = detail::factorial_ll(m);

  // Common denominator (m!)^m scales every distance to an integer.
  const BigInt scale_big = boost::multiprecision::pow(BigInt(mf), m);
  std::vector<std::vector<long long>> sdist(static_cast<std::size_t>(nc),
                                            std::vector<long long>(static_cast<std::size_t>(nf)));
  for (long long uu = 0; uu < nc; ++uu)
    for (int f = 0; f < nf; ++f) {
      Rational scaled = adv.instance.dist[static_cast<std::size_t>(uu)][static_cast<std::size_t>(f)] *
                        Rational(scale_big);
      if (denominator(scaled) != 1) throw std::logic_error("scaling must clear denominators");
      sdist[static_cast<std::size_t>(uu)][static_cast<std::size_t>(f)] =
          numerator(scaled).convert_to<long long>();
    }
  const long long scale = scale_big.convert_to<long long>();

  std::vector<unsigned> cluster_mask(static_cast<std::size_t>(m), 0);
  for (int l = 1; l <= m; ++l)
    for (int f : adv.clusters[static_cast<std::size_t>(l - 1)])
      cluster_mask[static_cast<std::size_t>(l - 1)] |= 1u << f;

  auto scaled_cost = [&](unsigned mask) {
    long long total = 0;
    for (long long uu = 0; uu < nc; ++uu) {
      const auto& row = sdist[static_cast<std::size_t>(uu)];
      long long best = -1;
      for (unsigned bits = mask; bits; bits &= bits - 1) {
        const int f = std::countr_zero(bits);
        if (best < 0 || row[static_cast<std::size_t>(f)] < best)
          best = row[static_cast<std::size_t>(f)];
      }
      total += best;
    }
    return total;
  };

  std::vector<long long> cluster_cost(static_cast<std::size_t>(m));
  for (int l = 1; l <= m; ++l)
    cluster_cost[static_cast<std::size_t>(l - 1)] = scaled_cost(cluster_mask[static_cast<std::size_t>(l - 1)]);
  // delta_j scaled: scale + (m!)^(m-j).
  auto scaled_delta = [&](int j) {
    long long p = 1;
    for (int i = 0; i < m - j; ++i) p *= mf;
    return scale + p;
  };

  for (unsigned mask = 1; mask < (1u << nf); ++mask) {
    if (std::popcount(mask) > max_subset_size) continue;
    int max_contained = 0;
    for (int l = m; l >= 1; --l)
      if ((mask & cluster_mask[static_cast<std::size_t>(l - 1)]) ==
          cluster_mask[static_cast<std::size_t>(l - 1)]) {
        max_contained = l;
        break;
      }
    const long long c = scaled_cost(mask);

    if (max_contained < m) {
      const int j = max_contained + 1;
      // cost(F) must exceed cost(M_j) = m! * delta_j; otherwise property (ii)
      // fails at k = j.
      if (c <= mf * scaled_delta(j)) return false;
      // Witness customer forced far from F: u_l = 1 below j, a missing index above.
      std::vector<int> witness(static_cast<std::size_t>(m), 1);
      for (int l = j; l <= m; ++l) {
        int missing = -1;
        for (int i = 1; i <= m && missing < 0; ++i) {
          if (i > l) break;
          const int f = adv.clusters[static_cast<std::size_t>(l - 1)].members()[static_cast<std::size_t>(i - 1)];
          if (!(mask & (1u << f))) missing = i;
        }
        if (missing < 0) return false;  // contradiction with max_contained
        witness[static_cast<std::size_t>(l - 1)] = missing;
      }
      const long long widx = detail::adversarial_customer_index(witness);
      const auto& row = sdist[static_cast<std::size_t>(widx)];
      long long best = -1;
      for (unsigned bits = mask; bits; bits &= bits - 1) {
        const int f = std::countr_zero(bits);
        if (best < 0 || row[static_cast<std::size_t>(f)] < best)
          best = row[static_cast<std::size_t>(f)];
      }
      if (best < scaled_delta(j - 1)) return false;
    }

    // Unique optimum: any size-k set other than M_k costs strictly more.
    const int k = std::popcount(mask);
    if (k <= m && mask != cluster_mask[static_cast<std::size_t>(k - 1)] &&
        c <= cluster_cost[static_cast<std::size_t>(k - 1)])
      return false;
  }
  return true;
}

/// Reads a bid set off a chain on the adversarial gadget: B = {k : M_k is
/// contained in F_k}.  Presumes the chain is size-competitive (cost(F_k) at
/// most cost(M_k)); then B covers [m] and its competitive ratio on [m] is at
/// most the chain's size ratio.
inline BidSet<Rational> extract_bid_set(const AdversarialInstance& adv,
                                        const FacilityChain<Rational>& chain) {
  if (chain.n() < adv.m)
    throw std::domain_error("chain shorter than the gadget's budget range");
  for (int k = 1; k <= adv.m; ++k) {
    const Rational opt_k =
        cost(adv.instance, adv.clusters[static_cast<std::size_t>(k - 1)]);
    if (cost(adv.instance, chain.set_for(k)) > opt_k)
      throw std::domain_error("chain is not size-competitive at k=" + std::to_string(k));
  }
  BidSet<Rational> bids;
  bids.zero_sentinel = true;
  for (int k = 1; k <= adv.m; ++k)
    if (adv.clusters[static_cast<std::size_t>(k - 1)].is_subset_of(chain.set_for(k)))
      bids.bids.push_back(Rational(k));
  return bids;
}

/// The two-budget lower-bound star: l customers, a hub at distance 1 from
/// everyone, and a private leaf per customer at distance delta = 1/l.
struct KlInstance {
  int l = 0;
  MedianInstance<Rational> instance;
  int hub = 0;
  FacilitySet leaves;
  Rational delta;
};

inline KlInstance build_kl(int l) {
  if (l < 2) throw std::domain_error("kl gadget needs l >= 2");
  KlInstance kl;
  kl.l = l;
  kl.delta = Rational(1, l);
  const Rational far = Rational(2) + kl.delta;

  std::vector<std::string> customers(static_cast<std::size_t>(l));
  std::vector<std::string> facilities(static_cast<std::size_t>(l + 1));
  facilities[0] = "f";
  std::vector<int> leaf_indices;
  for (int j = 1; j <= l; ++j) {
    customers[static_cast<std::size_t>(j - 1)] = "c" + std::to_string(j);
    facilities[static_cast<std::size_t>(j)] = "g" + std::to_string(j);
    leaf_indices.push_back(j);
  }
  kl.leaves = FacilitySet(std::move(leaf_indices));

  std::vector<std::vector<Rational>> dist(static_cast<std::size_t>(l),
                                          std::vector<Rational>(static_cast<std::size_t>(l + 1)));
  for (int j = 1; j <= l; ++j) {
    dist[static_cast<std::size_t>(j - 1)][0] = Rational(1);
    for (int i = 1; i <= l; ++i)
      dist[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i)] =
          (i == j) ? kl.delta : far;
  }
  kl.instance =
      MedianInstance<Rational>::make(std::move(customers), std::move(facilities), std::move(dist));

  // The four cost identities pin the construction down exactly.
  const Rational lr(l);
  if (cost(kl.instance, FacilitySet{0}) != lr) throw std::logic_error("kl: cost(f) != l");
  if (cost(kl.instance, kl.leaves) != Rational(1)) throw std::logic_error("kl: cost(G) != 1");
  if (cost(kl.instance, FacilitySet{1}) != kl.delta + (lr - 1) * (2 + kl.delta))
    throw std::logic_error("kl: cost(g_i) mismatch");
  if (cost(kl.instance, kl.leaves.without(1).with(0)) != (lr - 1) * kl.delta + 1)
    throw std::logic_error("kl: cost(G - g_i + f) mismatch");
  return kl;
}

template <class Num>
struct KlResult {
  FacilitySet f_k;
  FacilitySet f_l;
  Num ratio{};
  int option = 0;  // 1: keep opt_k and repair the l-set; 2: pick inside opt_l
};

namespace detail {

template <class Num>
Num ratio_component(const Num& value, const Num& opt) {
  if (opt > 0) return value / opt;
  if (value == 0) return Num(1);
  throw std::domain_error("zero optimum against positive cost");
}

/// Pads a set to the requested size with the smallest unused indices; cost
/// is monotone, so padding never hurts.
inline FacilitySet pad_to(const FacilitySet& base, int size, int n_facilities) {
  FacilitySet out = base;
  for (int f = 0; f < n_facilities && out.size() < size; ++f)
    if (!out.contains(f)) out = out.with(f);
  return out;
}

}  // namespace detail

/// Better-of-two-options algorithm for the two-budget problem: (1) keep the
/// optimum k-median F and serve budget l with F plus G minus a best
/// cardinality-k slice X of G (X drawn from G - F so F stays inside, padded
/// back up to exactly l); (2) pick the best k-subset of the optimum l-median
/// G and serve budget l with G itself.  Returns the nested pair with the
/// smaller worst ratio.
template <class Num>
KlResult<Num> kl_algorithm(const MedianInstance<Num>& inst, int k, int l) {
  const int n = inst.num_facilities();
  if (k < 1 || k >= l || l > n) throw std::domain_error("kl_algorithm needs 1 <= k < l <= |F|");

  auto [opt_k_set, opt_k] = exact_kmedian(inst, k);
  auto [opt_l_set, opt_l] = exact_kmedian(inst, l);

  // Option 1.
  std::vector<int> removable;
  for (int f : opt_l_set)
    if (!opt_k_set.contains(f)) removable.push_back(f);
  const int x_size = std::min<int>(k, static_cast<int>(removable.size()));
  FacilitySet best_fl;
  std::optional<Num> best_fl_cost;
  detail::for_each_combination(static_cast<int>(removable.size()), x_size,
                               [&](const std::vector<int>& pick) {
                                 FacilitySet candidate = opt_k_set.unite(opt_l_set);
                                 for (int idx : pick)
                                   candidate = candidate.without(removable[static_cast<std::size_t>(idx)]);
                                 Num c = cost(inst, candidate);
                                 if (!best_fl_cost || c < *best_fl_cost) {
                                   best_fl_cost = std::move(c);
                                   best_fl = std::move(candidate);
                                 }
                               });
  FacilitySet fl_1 = detail::pad_to(best_fl, l, n);
  Num ratio_1 = std::max(detail::ratio_component(opt_k, opt_k),
                         detail::ratio_component(cost(inst, fl_1), opt_l));

  // Option 2.
  const auto& leaves = opt_l_set.members();
  FacilitySet best_y;
  std::optional<Num> best_y_cost;
  detail::for_each_combination(static_cast<int>(leaves.size()), k,
                               [&](const std::vector<int>& pick) {
                                 std::vector<int> members;
                                 members.reserve(static_cast<std::size_t>(k));
                                 for (int idx : pick)
                                   members.push_back(leaves[static_cast<std::size_t>(idx)]);
                                 FacilitySet candidate(std::move(members));
                                 Num c = cost(inst, candidate);
                                 if (!best_y_cost || c < *best_y_cost) {
                                   best_y_cost = std::move(c);
                                   best_y = std::move(candidate);
                                 }
                               });
  Num ratio_2 = std::max(detail::ratio_component(*best_y_cost, opt_k),
                         detail::ratio_component(opt_l, opt_l));

  KlResult<Num> result;
  if (ratio_1 <= ratio_2) {
    result.option = 1;
    result.f_k = opt_k_set;
    result.f_l = std::move(fl_1);
    result.ratio = std::move(ratio_1);
  } else {
    result.option = 2;
    result.f_k = std::move(best_y);
    result.f_l = opt_l_set;
    result.ratio = std::move(ratio_2);
  }
  if (result.f_k.size() != k || result.f_l.size() != l ||
      !result.f_k.is_subset_of(result.f_l))
    throw std::logic_error("kl_algorithm produced a malformed pair");
  return result;
}

}  // namespace medbid
