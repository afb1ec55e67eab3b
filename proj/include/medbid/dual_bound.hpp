#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "medbid/numeric.hpp"

namespace medbid {

/// Weights mu, pi on [n] whose feasibility (checked pairwise over all
/// 1 <= t <= b <= n) makes sum(mu)/sum(pi) a lower bound on the competitive
/// ratio of every randomized bidding strategy on U = [n].
template <class Num = double>
struct DualCertificate {
  long long n = 0;
  std::vector<Num> mu;  // size n+1, index 1..n
  std::vector<Num> pi;
  Num alpha = Num(0);
  Num bound = Num(0);
};

struct DualViolation {
  long long t = 0, b = 0;
};

namespace detail {

template <class Num>
struct dual_accum {
  using type = Num;
};
template <>
struct dual_accum<double> {
  using type = long double;  // denser prefix sums keep tight pairs honest
};

}  // namespace detail

/// Exhaustive scan of the feasibility condition
///   sum_{T=t}^{n} pi(T)/T  >=  (1/b) sum_{T=t}^{b} mu(T)   for all t <= b,
/// via prefix sums: O(n) setup and O(n^2) pairs.  Returns the first
/// violating pair, if any.
template <class Num>
std::optional<DualViolation> find_dual_violation(const DualCertificate<Num>& cert) {
  using Acc = typename detail::dual_accum<Num>::type;
  const long long n = cert.n;
  std::vector<Acc> pi_tail(static_cast<std::size_t>(n + 2), Acc(0));
  for (long long t = n; t >= 1; --t)
    pi_tail[static_cast<std::size_t>(t)] = pi_tail[static_cast<std::size_t>(t + 1)] +
                                           Acc(cert.pi[static_cast<std::size_t>(t)]) / Acc(t);
  std::vector<Acc> mu_prefix(static_cast<std::size_t>(n + 1), Acc(0));
  for (long long t = 1; t <= n; ++t)
    mu_prefix[static_cast<std::size_t>(t)] =
        mu_prefix[static_cast<std::size_t>(t - 1)] + Acc(cert.mu[static_cast<std::size_t>(t)]);

  for (long long t = 1; t <= n; ++t) {
    const Acc lhs = pi_tail[static_cast<std::size_t>(t)];
    const Acc base = mu_prefix[static_cast<std::size_t>(t - 1)];
    for (long long b = t; b <= n; ++b) {
      const Acc rhs_sum = mu_prefix[static_cast<std::size_t>(b)] - base;
      if (rhs_sum > lhs * Acc(b)) return DualViolation{t, b};
    }
  }
  return std::nullopt;
}

template <class Num>
bool verify_dual_condition(const DualCertificate<Num>& cert) {
  return !find_dual_violation(cert).has_value();
}

/// The explicit certificate family: on [n] with n = ceil(U^2 ln U),
/// mu(T) = alpha/T for U <= T <= U^2 and pi(T) = 1/T for U <= T <= n.
/// alpha is the largest feasible value; since the condition is linear in
/// alpha, it is the minimum over pairs (t, b) of
///   b * [sum_{T=t}^{n} pi(T)/T] / [sum_{T=t}^{b} 1/T],
/// which only pairs with t, b in the mu support can attain.  A hair of
/// slack (1e-6) keeps the rounded certificate strictly feasible.
inline DualCertificate<double> dual_certificate(double U) {
  if (!(U >= 2)) throw std::domain_error("dual_certificate needs U >= 2");
  DualCertificate<double> cert;
  const long long lo = static_cast<long long>(std::ceil(U));
  const long long hi = static_cast<long long>(std::floor(U * U));
  const long long n = static_cast<long long>(std::ceil(U * U * std::log(U)));
  cert.n = n;

  std::vector<long double> pi_tail(static_cast<std::size_t>(n + 2), 0.0L);
  for (long long t = n; t >= 1; --t) {
    long double term = (t >= lo) ? 1.0L / (static_cast<long double>(t) * t) : 0.0L;
    pi_tail[static_cast<std::size_t>(t)] = pi_tail[static_cast<std::size_t>(t + 1)] + term;
  }
  std::vector<long double> inv_prefix(static_cast<std::size_t>(hi + 1), 0.0L);
  for (long long t = 1; t <= hi; ++t)
    inv_prefix[static_cast<std::size_t>(t)] =
        inv_prefix[static_cast<std::size_t>(t - 1)] +
        ((t >= lo) ? 1.0L / static_cast<long double>(t) : 0.0L);

  long double alpha = -1.0L;
  for (long long t = lo; t <= hi; ++t) {
    const long double lhs = pi_tail[static_cast<std::size_t>(t)];
    const long double base = inv_prefix[static_cast<std::size_t>(t - 1)];
    for (long long b = t; b <= hi; ++b) {
      const long double denom = inv_prefix[static_cast<std::size_t>(b)] - base;
      if (denom <= 0) continue;
      const long double cand = static_cast<long double>(b) * lhs / denom;
      if (alpha < 0 || cand < alpha) alpha = cand;
    }
  }
  alpha *= (1.0L - 1e-6L);

  cert.alpha = static_cast<double>(alpha);
  cert.mu.assign(static_cast<std::size_t>(n + 1), 0.0);
  cert.pi.assign(static_cast<std::size_t>(n + 1), 0.0);
  long double mu_sum = 0.0L, pi_sum = 0.0L;
  for (long long t = lo; t <= n; ++t) {
    if (t <= hi) {
      cert.mu[static_cast<std::size_t>(t)] = static_cast<double>(alpha / t);
      mu_sum += alpha / static_cast<long double>(t);
    }
    cert.pi[static_cast<std::size_t>(t)] = static_cast<double>(1.0L / t);
    pi_sum += 1.0L / static_cast<long double>(t);
  }
  cert.bound = static_cast<double>(mu_sum / pi_sum);
  return cert;
}

}  // namespace medbid
