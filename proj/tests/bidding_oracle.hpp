#pragma once

#include <stdexcept>
#include <vector>

#include "medbid/optimal_ratio.hpp"

namespace medbid::testutil {

/// Independent oracle for optimal_det_ratio: enumerate every bid set in [n]
/// (coverage forces the max bid to be n) and take the best exact worst-case
/// ratio.  Exponential; intended for n <= 20.
inline medbid::Fraction exhaustive_det_ratio(long long n) {
  if (n < 1 || n > 20) throw std::invalid_argument("oracle supports 1 <= n <= 20");
  medbid::Fraction best(0, 1);
  bool have = false;
  const unsigned long long masks = 1ull << (n - 1);
  std::vector<long long> bids;
  for (unsigned long long mask = 0; mask < masks; ++mask) {
    bids.clear();
    for (long long b = 1; b < n; ++b)
      if (mask & (1ull << (b - 1))) bids.push_back(b);
    bids.push_back(n);
    medbid::Fraction r = medbid::bid_set_ratio_exact(bids);
    if (!have || r < best) {
      best = r;
      have = true;
    }
  }
  return best;
}

}  // namespace medbid::testutil
