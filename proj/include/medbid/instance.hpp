#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "medbid/numeric.hpp"

namespace medbid {

/// A subset of an instance's facilities, stored as sorted unique indices into
/// the instance's facility list.  Tie-breaking rules throughout the library
/// order facilities by this index.
class FacilitySet {
 public:
  FacilitySet() = default;
  explicit FacilitySet(std::vector<int> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    if (!members_.empty() && members_.front() < 0)
      throw std::invalid_argument("negative facility index");
  }
  FacilitySet(std::initializer_list<int> members)
      : FacilitySet(std::vector<int>(members)) {}

  static FacilitySet full(int n_facilities) {
    std::vector<int> all(static_cast<std::size_t>(n_facilities));
    for (int i = 0; i < n_facilities; ++i) all[static_cast<std::size_t>(i)] = i;
    return FacilitySet(std::move(all));
  }

  bool empty() const { return members_.empty(); }
  int size() const { return static_cast<int>(members_.size()); }
  bool contains(int f) const {
    return std::binary_search(members_.begin(), members_.end(), f);
  }
  bool is_subset_of(const FacilitySet& other) const {
    return std::includes(other.members_.begin(), other.members_.end(),
                         members_.begin(), members_.end());
  }
  FacilitySet with(int f) const {
    auto m = members_;
    m.push_back(f);
    return FacilitySet(std::move(m));
  }
  FacilitySet without(int f) const {
    auto m = members_;
    m.erase(std::remove(m.begin(), m.end(), f), m.end());
    FacilitySet out;
    out.members_ = std::move(m);  // already sorted unique
    return out;
  }
  FacilitySet unite(const FacilitySet& other) const {
    std::vector<int> m;
    m.reserve(members_.size() + other.members_.size());
    std::set_union(members_.begin(), members_.end(), other.members_.begin(),
                   other.members_.end(), std::back_inserter(m));
    FacilitySet out;
    out.members_ = std::move(m);
    return out;
  }

  const std::vector<int>& members() const { return members_; }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }
  friend bool operator==(const FacilitySet&, const FacilitySet&) = default;

 private:
  std::vector<int> members_;
};

/// A k-median instance: customers, facilities, the customer-to-facility
/// distance matrix and optional per-customer weights.  Values are immutable
/// after construction; every operation in the library is a pure function on
/// shared instances.
template <class Num>
struct MedianInstance {
  std::vector<std::string> customers;
  std::vector<std::string> facilities;
  std::vector<std::vector<Num>> dist;  // dist[u][f], |C| x |F|
  std::vector<Num> weights;            // per customer, defaults to 1

  int num_customers() const { return static_cast<int>(customers.size()); }
  int num_facilities() const { return static_cast<int>(facilities.size()); }

  static MedianInstance make(std::vector<std::string> customers,
                             std::vector<std::string> facilities,
                             std::vector<std::vector<Num>> dist,
                             std::vector<Num> weights = {}) {
    MedianInstance inst;
    inst.customers = std::move(customers);
    inst.facilities = std::move(facilities);
    inst.dist = std::move(dist);
    if (weights.empty()) weights.assign(inst.customers.size(), Num(1));
    inst.weights = std::move(weights);
    inst.validate();
    return inst;
  }

  void validate() const {
    if (customers.empty())
      throw std::invalid_argument("instance must have at least one customer");
    if (facilities.empty())
      throw std::invalid_argument("instance must have at least one facility");
    if (dist.size() != customers.size())
      throw std::invalid_argument("dist row count != customer count");
    for (const auto& row : dist) {
      if (row.size() != facilities.size())
        throw std::invalid_argument("dist column count != facility count");
      for (const Num& d : row)
        if (!entry_ok(d)) throw std::invalid_argument("distances must be finite and >= 0");
    }
    if (weights.size() != customers.size())
      throw std::invalid_argument("weights length != customer count");
    for (const Num& w : weights)
      if (!entry_ok(w)) throw std::invalid_argument("weights must be finite and >= 0");
  }

 private:
  static bool entry_ok(const Num& v) {
    if constexpr (numeric_traits<Num>::exact) {
      return v >= 0;
    } else {
      return std::isfinite(v) && v >= 0;
    }
  }
};

/// Service distance d_uX of one customer against a facility set.
template <class Num>
Num service_distance(const MedianInstance<Num>& inst, int customer,
                     const FacilitySet& X) {
  if (X.empty()) throw std::domain_error("cost of empty facility set undefined");
  const auto& row = inst.dist[static_cast<std::size_t>(customer)];
  const int first = *X.begin();
  Num best = row[static_cast<std::size_t>(first)];
  for (int f : X) {
    const Num& d = row[static_cast<std::size_t>(f)];
    if (d < best) best = d;
  }
  return best;
}

/// cost(X) = sum_u w(u) * d_uX.
template <class Num>
Num cost(const MedianInstance<Num>& inst, const FacilitySet& X) {
  if (X.empty()) throw std::domain_error("cost of empty facility set undefined");
  Num total(0);
  for (int u = 0; u < inst.num_customers(); ++u)
    total += inst.weights[static_cast<std::size_t>(u)] * service_distance(inst, u, X);
  return total;
}

/// Facility-to-facility distance through the best customer:
/// d'_{fg} = min_x (d_{xf} + d_{xg}).  Symmetric; d'(f,f) = 2 min_x d_{xf}.
template <class Num>
Num facility_distance(const MedianInstance<Num>& inst, int f, int g) {
  Num best = inst.dist[0][static_cast<std::size_t>(f)] + inst.dist[0][static_cast<std::size_t>(g)];
  for (int x = 1; x < inst.num_customers(); ++x) {
    Num d = inst.dist[static_cast<std::size_t>(x)][static_cast<std::size_t>(f)] +
            inst.dist[static_cast<std::size_t>(x)][static_cast<std::size_t>(g)];
    if (d < best) best = d;
  }
  return best;
}

template <class Num>
Num facility_set_distance(const MedianInstance<Num>& inst, int f,
                          const FacilitySet& S) {
  if (S.empty()) throw std::domain_error("distance to empty facility set undefined");
  Num best = facility_distance(inst, f, *S.begin());
  for (int g : S) {
    Num d = facility_distance(inst, f, g);
    if (d < best) best = d;
  }
  return best;
}

/// Result of the exhaustive relaxed-triangle-inequality scan over quadruples
/// (f, x, g, y) with f, g facilities and x, y customers:
/// checks d_{fy} <= lambda (d_{fx} + d_{xg} + d_{gy}).
template <class Num>
struct MetricReport {
  bool is_metric = false;
  /// Smallest feasible lambda (>= 1); nullopt means unbounded (zero
  /// denominator against a nonzero numerator).
  std::optional<Num> lambda_star;
  /// Quadruple (f, x, g, y) attaining lambda_star when lambda_star > 1
  /// or is unbounded; the witness violates the plain triangle form.
  struct Quad {
    int f, x, g, y;
  };
  std::optional<Quad> witness;
};

template <class Num>
MetricReport<Num> metric_report(const MedianInstance<Num>& inst) {
  MetricReport<Num> report;
  Num best(1);
  std::optional<typename MetricReport<Num>::Quad> arg;
  bool unbounded = false;
  for (int f = 0; f < inst.num_facilities() && !unbounded; ++f)
    for (int x = 0; x < inst.num_customers() && !unbounded; ++x)
      for (int g = 0; g < inst.num_facilities() && !unbounded; ++g)
        for (int y = 0; y < inst.num_customers(); ++y) {
          const Num& lhs = inst.dist[static_cast<std::size_t>(y)][static_cast<std::size_t>(f)];
          Num rhs = inst.dist[static_cast<std::size_t>(x)][static_cast<std::size_t>(f)] +
                    inst.dist[static_cast<std::size_t>(x)][static_cast<std::size_t>(g)] +
                    inst.dist[static_cast<std::size_t>(y)][static_cast<std::size_t>(g)];
          if (rhs == 0) {
            if (lhs > 0) {
              unbounded = true;
              arg = {f, x, g, y};
              break;
            }
            continue;
          }
          Num ratio = lhs / rhs;
          if (ratio > best) {
            best = ratio;
            arg = {f, x, g, y};
          }
        }
  if (unbounded) {
    report.is_metric = false;
    report.lambda_star = std::nullopt;
    report.witness = arg;
    return report;
  }
  report.lambda_star = best;
  report.witness = arg;
  report.is_metric = to_double(best) <= 1.0 + numeric_traits<Num>::tolerance;
  return report;
}

template <class Num>
bool is_lambda_relaxed(const MedianInstance<Num>& inst, const Num& lambda) {
  auto report = metric_report(inst);
  if (!report.lambda_star.has_value()) return false;
  return *report.lambda_star <= lambda;
}

/// Gamma(A, B): an inclusion-minimal subset of B preserving every mu in A's
/// nearest d'-distance into B.  Deterministic: each mu is assigned its
/// d'-nearest element of B with the smallest index (mu processed in ascending
/// index order), then candidates are dropped in descending index order while
/// all nearest distances survive.  |Gamma(A,B)| <= |A|.
template <class Num>
FacilitySet gamma(const MedianInstance<Num>& inst, const FacilitySet& A,
                  const FacilitySet& B) {
  if (A.empty() || B.empty())
    throw std::domain_error("gamma requires non-empty facility sets");

  std::vector<Num> target;  // d'_{mu B} per element of A
  target.reserve(static_cast<std::size_t>(A.size()));
  std::vector<int> chosen;
  for (int mu : A) {
    int best_g = -1;
    Num best_d(0);
    for (int g : B) {
      Num d = facility_distance(inst, mu, g);
      if (best_g < 0 || d < best_d) {
        best_g = g;
        best_d = d;
      }
    }
    target.push_back(best_d);
    chosen.push_back(best_g);
  }
  FacilitySet result{std::vector<int>(chosen)};

  auto preserves_all = [&](const FacilitySet& S) {
    if (S.empty()) return false;
    std::size_t i = 0;
    for (int mu : A) {
      if (facility_set_distance(inst, mu, S) != target[i]) return false;
      ++i;
    }
    return true;
  };

  std::vector<int> order(result.members().rbegin(), result.members().rend());
  for (int g : order) {
    FacilitySet trial = result.without(g);
    if (preserves_all(trial)) result = std::move(trial);
  }
  return result;
}

}  // namespace medbid
