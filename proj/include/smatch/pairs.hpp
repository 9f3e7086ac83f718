#pragma once

// Stable-pair questions and exhaustive oracles.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "smatch/error.hpp"
#include "smatch/prefs.hpp"
#include "smatch/solve.hpp"

namespace smatch {

inline constexpr std::size_t max_enumeration_size = 10;

namespace detail {

// Depth-first over men 0..n-1, women tried in increasing index, so
// matchings come out in lexicographic order. A partial assignment is cut as
// soon as two already-assigned participants form a blocking pair.
class StableEnumerator {
 public:
  explicit StableEnumerator(const RankTable& t)
      : t_(t), n_(t.n), pairs_(t.n), inv_(t.n, unset), used_(t.n, 0) {}

  std::vector<Matching> run() {
    extend(0);
    return std::move(out_);
  }

 private:
  static constexpr std::size_t unset = static_cast<std::size_t>(-1);

  bool blocks(std::size_t m, std::size_t w) const {
    return t_.man_prefers(m, w, pairs_[m]) && t_.woman_prefers(w, m, inv_[w]);
  }

  bool consistent(std::size_t m) const {
    const std::size_t w = pairs_[m];
    for (std::size_t m2 = 0; m2 < m; ++m2) {
      if (blocks(m, pairs_[m2]) || blocks(m2, w)) return false;
    }
    return true;
  }

  void extend(std::size_t m) {
    if (m == n_) {
      out_.push_back(Matching{pairs_});
      return;
    }
    for (std::size_t w = 0; w < n_; ++w) {
      if (used_[w]) continue;
      pairs_[m] = w;
      inv_[w] = m;
      used_[w] = 1;
      if (consistent(m)) extend(m + 1);
      used_[w] = 0;
      inv_[w] = unset;
    }
  }

  const RankTable& t_;
  std::size_t n_;
  std::vector<std::size_t> pairs_, inv_;
  std::vector<char> used_;
  std::vector<Matching> out_;
};

}  // namespace detail

/// Every weakly stable matching, in lexicographic order of `pairs`.
template <MarketModel M>
std::vector<Matching> enumerate_stable(const M& market) {
  require(market.n() <= max_enumeration_size, Errc::too_large,
          "enumeration supports n <= " + std::to_string(max_enumeration_size) + ", got n = " +
              std::to_string(market.n()));
  const RankTable t = rank_table(market);
  return detail::StableEnumerator(t).run();
}

inline std::vector<Matching> enumerate_stable(const Market& market) {
  return std::visit([](const auto& m) { return enumerate_stable(m); }, market);
}

/// (m, w) is matched in both the man-optimal and the woman-optimal outputs of
/// deferred acceptance. Exact for strict preferences. With ties the answer
/// refers to the index tie-broken refinement (the market `materialize`
/// builds), because a weakly stable matching of another refinement may avoid
/// the pair.
template <MarketModel M>
bool in_all_stable(const M& market, std::size_t m, std::size_t w) {
  detail::check_index(m, market.n(), "man");
  detail::check_index(w, market.n(), "woman");
  return gale_shapley(market, Side::men).matching.pairs[m] == w &&
         gale_shapley(market, Side::women).matching.pairs[m] == w;
}

inline bool in_all_stable(const Market& market, std::size_t m, std::size_t w) {
  return std::visit([&](const auto& mk) { return in_all_stable(mk, m, w); }, market);
}

template <MarketModel M>
bool in_some_stable(const M& market, std::size_t m, std::size_t w) {
  detail::check_index(m, market.n(), "man");
  detail::check_index(w, market.n(), "woman");
  for (const auto& mu : enumerate_stable(market)) {
    if (mu.pairs[m] == w) return true;
  }
  return false;
}

inline bool in_some_stable(const Market& market, std::size_t m, std::size_t w) {
  return std::visit([&](const auto& mk) { return in_some_stable(mk, m, w); }, market);
}

// ---------------------------------------------------------------------------
// Vector-pair oracles

using BitVector = std::vector<std::uint8_t>;
using BitVectors = std::vector<BitVector>;

struct ExtremePair {
  std::int64_t value = 0;
  std::size_t u = 0;  // index into U
  std::size_t v = 0;  // index into V
  friend bool operator==(const ExtremePair&, const ExtremePair&) = default;
};

namespace detail {

inline std::size_t check_vector_sets(const BitVectors& U, const BitVectors& V) {
  require(!U.empty() && !V.empty(), Errc::dimension_mismatch, "vector sets must be nonempty");
  const std::size_t d = U.front().size();
  for (const auto* set : {&U, &V}) {
    for (const auto& x : *set) {
      require(x.size() == d, Errc::dimension_mismatch, "vectors must all have dimension " +
                                                           std::to_string(d));
      for (auto b : x) {
        require(b <= 1, Errc::non_boolean_entry, "vector entries must be 0 or 1");
      }
    }
  }
  return d;
}

}  // namespace detail

/// Largest <u, v>; ties go to the lexicographically smallest (u, v).
inline ExtremePair max_inner_product_brute(const BitVectors& U, const BitVectors& V) {
  const std::size_t d = detail::check_vector_sets(U, V);
  ExtremePair best{-1, 0, 0};
  for (std::size_t i = 0; i < U.size(); ++i) {
    for (std::size_t j = 0; j < V.size(); ++j) {
      std::int64_t s = 0;
      for (std::size_t k = 0; k < d; ++k) s += U[i][k] & V[j][k];
      if (s > best.value) best = {s, i, j};
    }
  }
  return best;
}

/// Smallest Hamming distance; ties go to the lexicographically smallest (u, v).
inline ExtremePair min_hamming_brute(const BitVectors& U, const BitVectors& V) {
  const std::size_t d = detail::check_vector_sets(U, V);
  ExtremePair best{static_cast<std::int64_t>(d) + 1, 0, 0};
  for (std::size_t i = 0; i < U.size(); ++i) {
    for (std::size_t j = 0; j < V.size(); ++j) {
      std::int64_t s = 0;
      for (std::size_t k = 0; k < d; ++k) s += U[i][k] != V[j][k];
      if (s < best.value) best = {s, i, j};
    }
  }
  return best;
}

}  // namespace smatch
