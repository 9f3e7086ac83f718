#pragma once

// Algorithms that find a stable matching.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <queue>
#include <string>
#include <tuple>
#include <vector>

#include "smatch/error.hpp"
#include "smatch/geometry.hpp"
#include "smatch/prefs.hpp"
#include "smatch/timing.hpp"

namespace smatch {

struct SolveReport {
  Matching matching;
  std::uint64_t proposals = 0;
  std::uint64_t runtime_nanos = 0;
  std::string algorithm;
};

namespace detail {

// Hands out each proposer's candidates best first (ties by index) without
// materializing full preference lists where the model allows it.
template <class M>
class ProposalStream {
 public:
  ProposalStream(const M& market, Side side)
      : market_(market), side_(side), orders_(market.n()), next_(market.n(), 0) {}

  std::size_t next(std::size_t p) {
    auto& order = orders_[p];
    if (order.empty()) order = preference_order(market_, side_, p);
    return order[next_[p]++];
  }

 private:
  const M& market_;
  Side side_;
  std::vector<std::vector<std::size_t>> orders_;
  std::vector<std::size_t> next_;
};

template <>
class ProposalStream<ListMarket> {
 public:
  ProposalStream(const ListMarket& market, Side side)
      : market_(market), side_(side), next_(market.n(), 0) {}

  std::size_t next(std::size_t p) {
    if (side_ == Side::men) return market_.women_orders()[market_.men_choice()[p]][next_[p]++];
    return market_.men_orders()[market_.women_choice()[p]][next_[p]++];
  }

 private:
  const ListMarket& market_;
  Side side_;
  std::vector<std::size_t> next_;
};

// Distance relation: walk outwards from the ideal point; custom relation
// falls back to the inverted rank rows.
template <>
class ProposalStream<SinglePeakedMarket> {
 public:
  ProposalStream(const SinglePeakedMarket& market, Side side)
      : market_(market), side_(side), left_(market.n()), right_(market.n()), started_(market.n(), 0),
        orders_(market.n()), next_(market.n(), 0) {}

  std::size_t next(std::size_t p) {
    const std::size_t n = market_.n();
    if (market_.relation() == PeakRelation::custom) {
      auto& order = orders_[p];
      if (order.empty()) order = preference_order(market_, side_, p);
      return order[next_[p]++];
    }
    const auto& pos = market_.positions(other(side_));
    const double q = market_.ideals(side_)[p];
    if (!started_[p]) {
      started_[p] = 1;
      const auto r = static_cast<std::size_t>(std::lower_bound(pos.begin(), pos.end(), q) - pos.begin());
      right_[p] = r;
      left_[p] = r;  // candidates [0, left) remain on the left
    }
    std::size_t& l = left_[p];
    std::size_t& r = right_[p];
    const bool has_left = l > 0, has_right = r < n;
    if (has_left && (!has_right || std::fabs(q - pos[l - 1]) <= std::fabs(q - pos[r]))) {
      return --l;
    }
    return r++;
  }

 private:
  const SinglePeakedMarket& market_;
  Side side_;
  std::vector<std::size_t> left_, right_;
  std::vector<char> started_;
  std::vector<std::vector<std::size_t>> orders_;
  std::vector<std::size_t> next_;
};

// Cardinal models: candidates are released in chunks. Each refill recomputes
// the proposer's n values and selects the next chunk after the last key
// handed out, so memory stays proportional to the proposals made.
template <CardinalModel M>
class CardinalStream {
 public:
  CardinalStream(const M& market, Side side)
      : market_(market), side_(side), chunks_(market.n()), next_(market.n(), 0),
        chunk_size_(market.n(), 0) {}

  std::size_t next(std::size_t p) {
    auto& chunk = chunks_[p];
    if (next_[p] == chunk.size()) refill(p);
    return chunk[next_[p]++].second;
  }

 private:
  using Key = std::pair<double, std::size_t>;  // (value, index), best = larger value, smaller index

  static bool before(const Key& a, const Key& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  }

  void refill(std::size_t p) {
    const std::size_t n = market_.n();
    auto& chunk = chunks_[p];
    const bool have_last = !chunk.empty();
    const Key last = have_last ? chunk.back() : Key{};
    std::vector<Key> rest;
    rest.reserve(n);
    for (std::size_t c = 0; c < n; ++c) {
      Key k{value(market_, side_, p, c), c};
      if (!have_last || before(last, k)) rest.push_back(k);
    }
    chunk_size_[p] = chunk_size_[p] == 0 ? 8 : 2 * chunk_size_[p];
    const std::size_t take = std::min(chunk_size_[p], rest.size());
    std::partial_sort(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(take), rest.end(),
                      before);
    rest.resize(take);
    chunk = std::move(rest);
    next_[p] = 0;
  }

  const M& market_;
  Side side_;
  std::vector<std::vector<Key>> chunks_;
  std::vector<std::size_t> next_;
  std::vector<std::size_t> chunk_size_;
};

template <CardinalModel M>
class ProposalStream<M> : public CardinalStream<M> {
 public:
  using CardinalStream<M>::CardinalStream;
};

// Acceptor side: strict preference, ties to the smaller proposer index.
template <class M>
bool accepts(const M& market, Side side, std::size_t acceptor, std::size_t newcomer,
             std::size_t current) {
  if (prefers(market, side, acceptor, newcomer, current)) return true;
  return newcomer < current && !prefers(market, side, acceptor, current, newcomer);
}

}  // namespace detail

/// Deferred acceptance. With ties broken by index on both sides the
/// preferences are strict, so the result is the proposing side's optimal
/// stable matching of the tie-broken market.
template <MarketModel M>
SolveReport gale_shapley(const M& market, Side proposing) {
  Stopwatch clock;
  const std::size_t n = market.n();
  constexpr std::size_t free = static_cast<std::size_t>(-1);
  const Side accepting = other(proposing);
  detail::ProposalStream<M> stream(market, proposing);
  std::vector<std::size_t> holder(n, free);   // acceptor -> proposer
  std::vector<std::size_t> partner(n, free);  // proposer -> acceptor
  std::vector<std::size_t> unmatched(n);
  for (std::size_t i = 0; i < n; ++i) unmatched[i] = n - 1 - i;
  std::uint64_t proposals = 0;
  while (!unmatched.empty()) {
    const std::size_t p = unmatched.back();
    const std::size_t a = stream.next(p);
    ++proposals;
    const std::size_t cur = holder[a];
    if (cur == free) {
      holder[a] = p;
      partner[p] = a;
      unmatched.pop_back();
    } else if (detail::accepts(market, accepting, a, p, cur)) {
      holder[a] = p;
      partner[p] = a;
      partner[cur] = free;
      unmatched.back() = cur;
    }
  }
  SolveReport report;
  report.matching.pairs = proposing == Side::men ? partner : holder;
  report.proposals = proposals;
  report.algorithm = proposing == Side::men ? "gs-men" : "gs-women";
  report.runtime_nanos = clock.nanos();
  return report;
}

inline SolveReport gale_shapley(const Market& market, Side proposing) {
  return std::visit([&](const auto& m) { return gale_shapley(m, proposing); }, market);
}

/// Occupied woman types of an attribute market: women with identical
/// (attributes, weights) share a type; types are numbered by first appearance.
struct WomanTypes {
  std::vector<std::size_t> type_of;                 // per woman
  std::vector<std::vector<std::size_t>> members;    // per type, ascending woman index
  std::vector<std::size_t> representative;          // per type, its smallest woman
};

inline WomanTypes woman_types(const AttributeMarket& am) {
  WomanTypes t;
  t.type_of.resize(am.n());
  std::map<std::vector<double>, std::size_t> ids;
  for (std::size_t w = 0; w < am.n(); ++w) {
    std::vector<double> key(am.women_attrs().row(w).begin(), am.women_attrs().row(w).end());
    key.insert(key.end(), am.women_weights().row(w).begin(), am.women_weights().row(w).end());
    auto [it, inserted] = ids.emplace(std::move(key), t.members.size());
    if (inserted) {
      t.members.emplace_back();
      t.representative.push_back(w);
    }
    t.type_of[w] = it->second;
    t.members[it->second].push_back(w);
  }
  return t;
}

/// Distinct values appearing in the women's attributes and weights.
inline std::vector<double> women_value_universe(const AttributeMarket& am) {
  std::vector<double> u(am.women_attrs().data());
  u.insert(u.end(), am.women_weights().data().begin(), am.women_weights().data().end());
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  return u;
}

/// Many-to-one deferred acceptance over woman types. Men propose to types in
/// order of value (ties by type number); a type holds up to |members| men in
/// a min-heap keyed by (its value of the man, -man index) and evicts the
/// minimum when a better man arrives. Accepted men are paired with the type's
/// members in index order.
inline SolveReport find_small_universe(const AttributeMarket& am,
                                       std::vector<double> value_universe) {
  Stopwatch clock;
  std::sort(value_universe.begin(), value_universe.end());
  value_universe.erase(std::unique(value_universe.begin(), value_universe.end()),
                       value_universe.end());
  auto in_universe = [&](double x) {
    return std::binary_search(value_universe.begin(), value_universe.end(), x);
  };
  for (std::size_t w = 0; w < am.n(); ++w) {
    for (std::size_t i = 0; i < am.d(); ++i) {
      require(in_universe(am.women_attrs()(w, i)) && in_universe(am.women_weights()(w, i)),
              Errc::universe_violation,
              "woman " + std::to_string(w) + " has an entry outside the value universe");
    }
  }

  const std::size_t n = am.n();
  const WomanTypes types = woman_types(am);
  const std::size_t T = types.members.size();

  // Each man's list of types, best first.
  std::vector<std::vector<std::size_t>> lists(n);
  std::vector<double> vals(T);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t t = 0; t < T; ++t) {
      vals[t] = dot(am.men_weights().row(m), am.women_attrs().row(types.representative[t]));
    }
    auto& list = lists[m];
    list.resize(T);
    std::iota(list.begin(), list.end(), std::size_t{0});
    std::stable_sort(list.begin(), list.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
  }

  using Key = std::pair<double, std::int64_t>;  // (type's value of man, -man)
  using Heap = std::priority_queue<Key, std::vector<Key>, std::greater<Key>>;
  std::vector<Heap> heaps(T);
  std::vector<std::size_t> cursor(n, 0);
  std::vector<std::size_t> unmatched(n);
  for (std::size_t i = 0; i < n; ++i) unmatched[i] = n - 1 - i;
  std::uint64_t proposals = 0;
  while (!unmatched.empty()) {
    const std::size_t m = unmatched.back();
    const std::size_t t = lists[m][cursor[m]++];
    ++proposals;
    const Key key{dot(am.women_weights().row(types.representative[t]), am.men_attrs().row(m)),
                  -static_cast<std::int64_t>(m)};
    auto& heap = heaps[t];
    if (heap.size() < types.members[t].size()) {
      heap.push(key);
      unmatched.pop_back();
    } else if (heap.top() < key) {
      const auto evicted = static_cast<std::size_t>(-heap.top().second);
      heap.pop();
      heap.push(key);
      unmatched.back() = evicted;
    }
  }

  SolveReport report;
  report.matching.pairs.assign(n, 0);
  for (std::size_t t = 0; t < T; ++t) {
    std::vector<std::size_t> men;
    for (auto& heap = heaps[t]; !heap.empty(); heap.pop()) {
      men.push_back(static_cast<std::size_t>(-heap.top().second));
    }
    std::sort(men.begin(), men.end());
    for (std::size_t i = 0; i < men.size(); ++i) report.matching.pairs[men[i]] = types.members[t][i];
  }
  report.proposals = proposals;
  report.algorithm = "small-universe";
  report.runtime_nanos = clock.nanos();
  return report;
}

inline SolveReport find_small_universe(const AttributeMarket& am) {
  return find_small_universe(am, women_value_universe(am));
}

/// Men ordered by their scalar attribute, highest first, ties by index.
inline std::vector<std::size_t> men_by_attr(const OneSidedMarket& osm) {
  std::vector<std::size_t> order(osm.n());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return osm.men_attr()[a] > osm.men_attr()[b];
  });
  return order;
}

/// Stable matching for the one-sided model. The k women who like a high
/// attribute are matched among the top k men and the rest among the bottom
/// n - k men. Inside each block all women share one order over men, so the
/// block is solved by letting its men choose in that order, each taking his
/// favourite remaining woman from a max-inner-product index.
inline SolveReport find_one_sided(const OneSidedMarket& osm) {
  Stopwatch clock;
  const std::size_t n = osm.n(), d = osm.d();
  std::vector<std::size_t> pos_women, neg_women;
  for (std::size_t w = 0; w < n; ++w) (osm.women_sign()[w] > 0 ? pos_women : neg_women).push_back(w);
  const std::size_t k = pos_women.size();

  const std::vector<std::size_t> ranked = men_by_attr(osm);
  std::vector<std::size_t> top(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k));
  std::vector<std::size_t> bottom(ranked.begin() + static_cast<std::ptrdiff_t>(k), ranked.end());
  // Negative women rank men by ascending attribute, ties by index.
  std::stable_sort(bottom.begin(), bottom.end(), [&](std::size_t a, std::size_t b) {
    return osm.men_attr()[a] < osm.men_attr()[b];
  });

  SolveReport report;
  report.matching.pairs.assign(n, 0);
  auto run_block = [&](const std::vector<std::size_t>& women, const std::vector<std::size_t>& men) {
    Matrix pts(women.size(), d);
    for (std::size_t i = 0; i < women.size(); ++i) {
      for (std::size_t j = 0; j < d; ++j) pts(i, j) = osm.women_attrs()(women[i], j);
    }
    HalfspaceMaxIndex index(pts);
    for (std::size_t m : men) {
      const std::size_t i = *index.query_max(osm.men_weights().row(m));
      index.erase(i);
      report.matching.pairs[m] = women[i];
      ++report.proposals;
    }
  };
  run_block(pos_women, top);
  run_block(neg_women, bottom);
  report.algorithm = "one-sided";
  report.runtime_nanos = clock.nanos();
  return report;
}

}  // namespace smatch
