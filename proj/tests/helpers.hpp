#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "smatch/generate.hpp"
#include "smatch/prefs.hpp"
#include "smatch/random.hpp"
#include "smatch/solve.hpp"

namespace testing_helpers {

using namespace smatch;

/// Integer positions 0..n-1 and half-integer ideals; each chooser's order
/// is a random interleaving of the candidates left and right of its ideal,
/// each side taken nearest first.
inline SinglePeakedMarket random_custom_single_peaked(Rng& rng, std::size_t n) {
  std::vector<double> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[i] = static_cast<double>(i);
  auto ideals = [&] {
    std::vector<double> q(n);
    for (auto& x : q) x = static_cast<double>(rng.between(-1, static_cast<std::int64_t>(n) - 1)) + 0.5;
    return q;
  };
  const auto mi = ideals(), wi = ideals();
  auto ranks = [&](const std::vector<double>& q) {
    std::vector<std::vector<std::size_t>> r(n, std::vector<std::size_t>(n));
    for (std::size_t c = 0; c < n; ++c) {
      std::vector<std::size_t> left, right;
      for (std::size_t i = n; i-- > 0;) {
        if (pos[i] < q[c]) left.push_back(i);
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (pos[i] > q[c]) right.push_back(i);
      }
      std::size_t a = 0, b = 0, k = 0;
      while (a < left.size() || b < right.size()) {
        const bool take_left = b == right.size() || (a < left.size() && rng.coin());
        r[c][take_left ? left[a++] : right[b++]] = k++;
      }
    }
    return r;
  };
  auto mr = ranks(mi), wr = ranks(wi);
  return SinglePeakedMarket(pos, pos, mi, wi, PeakRelation::custom, mr, wr, "custom");
}

/// Every model, with ties where the model allows them when `ties` is set.
inline const std::vector<std::string>& test_models() {
  static const std::vector<std::string> names{"attribute", "one_sided",          "list",
                                              "single_peaked", "single_peaked_custom", "geometric",
                                              "explicit"};
  return names;
}

inline Market make_market(const std::string& model, Rng& rng, std::size_t n, std::size_t d,
                          bool ties) {
  if (model == "single_peaked_custom") return random_custom_single_peaked(rng, n);
  return random_market(model, rng, n, d, ties ? Dist::boolean : Dist::signed_uniform);
}

/// GS output, GS output with two partners swapped, or a random matching.
inline Matching mixed_matching(Rng& rng, const Market& market, int kind) {
  const std::size_t n = market_size(market);
  switch (kind % 3) {
    case 0: return gale_shapley(market, rng.coin() ? Side::men : Side::women).matching;
    case 1: {
      Matching mu = gale_shapley(market, Side::men).matching;
      if (n >= 2) {
        const std::size_t a = rng.below(n);
        std::size_t b = rng.below(n - 1);
        if (b >= a) ++b;
        std::swap(mu.pairs[a], mu.pairs[b]);
      }
      return mu;
    }
    default: return random_matching(rng, n);
  }
}

}  // namespace testing_helpers

namespace smatch {

inline void PrintTo(const Matching& mu, std::ostream* os) {
  *os << "[";
  for (std::size_t i = 0; i < mu.pairs.size(); ++i) *os << (i ? "," : "") << mu.pairs[i];
  *os << "]";
}

}  // namespace smatch
