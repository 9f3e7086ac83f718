#pragma once

// Small hand-built markets with known stable matchings. Participants are
// 0-indexed: man m_k of the tables is index k-1.

#include <optional>
#include <string>
#include <vector>

#include "smatch/error.hpp"
#include "smatch/prefs.hpp"

namespace smatch {

struct Fixture {
  std::string name;
  std::string title;
  Market market;
  std::vector<Matching> stable;  // every stable matching, lexicographic
  std::optional<Matching> man_optimal;
  std::optional<Matching> woman_optimal;
  // Strategy fixtures: the market after one woman misreports, and its
  // stable matchings.
  std::optional<Market> manipulated;
  std::string manipulation;
  std::vector<Matching> manipulated_stable;
};

inline const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names{"two_list_no_top", "two_list_greedy", "list_strategy",
                                              "single_peaked_no_top", "geometric_strategy"};
  return names;
}

namespace detail {

inline Matching pairs_of(std::vector<std::size_t> p) { return Matching{std::move(p)}; }

inline Fixture two_list_no_top() {
  // sigma_1 = m1..m5, sigma_2 = m3 m5 m1 m4 m2; pi_1 = w1..w5, pi_2 = w3 w5 w1 w4 w2.
  ListMarket lm({{0, 1, 2, 3, 4}, {2, 4, 0, 3, 1}}, {{0, 1, 2, 3, 4}, {2, 4, 0, 3, 1}},
                {0, 0, 1, 0, 1}, {1, 1, 0, 1, 0}, "two_list_no_top");
  Fixture f{"two_list_no_top", "Two-list preferences where no participant receives their top choice",
            lm, {pairs_of({1, 2, 4, 3, 0})}, {}, {}, {}, {}, {}};
  f.man_optimal = f.stable.front();
  f.woman_optimal = f.stable.front();
  return f;
}

inline Fixture two_list_greedy() {
  // sigma_1 = m1 m2 m3, sigma_2 = m2 m1 m3; pi_1 = w1 w2 w3, pi_2 = w3 w2 w1.
  ListMarket lm({{0, 1, 2}, {2, 1, 0}}, {{0, 1, 2}, {1, 0, 2}}, {1, 0, 0}, {0, 1, 1},
                "two_list_greedy");
  Fixture f{"two_list_greedy", "Two-list preferences where a greedy approach will not work", lm,
            {pairs_of({2, 0, 1})}, {}, {}, {}, {}, {}};
  f.man_optimal = f.stable.front();
  f.woman_optimal = f.stable.front();
  return f;
}

inline Fixture list_strategy() {
  // sigma_1 = m1..m4, sigma_2 = m3 m1 m4 m2; pi_1 = w1..w4, pi_2 = w3 w1 w2 w4.
  const std::vector<ListMarket::Order> pis{{0, 1, 2, 3}, {2, 0, 1, 3}};
  const std::vector<ListMarket::Order> sigmas{{0, 1, 2, 3}, {2, 0, 3, 1}};
  ListMarket truthful(pis, sigmas, {0, 0, 1, 1}, {1, 0, 0, 0}, "list_strategy");
  ListMarket misreport(pis, sigmas, {0, 0, 1, 1}, {1, 1, 0, 0}, "list_strategy:w2_uses_sigma2");
  Fixture f{"list_strategy", "Two-list preferences that can be manipulated", truthful,
            {pairs_of({0, 1, 2, 3}), pairs_of({1, 2, 0, 3})}, {}, {}, {}, {}, {}};
  f.man_optimal = pairs_of({0, 1, 2, 3});
  f.woman_optimal = pairs_of({1, 2, 0, 3});
  f.manipulated = Market(misreport);
  f.manipulation = "w2 uses sigma_2 instead of sigma_1";
  f.manipulated_stable = {pairs_of({1, 2, 0, 3})};
  return f;
}

inline Fixture single_peaked_no_top() {
  // Positions 1..4 on both sides; each ideal sits on the top choice.
  // men_rank[m][w] = position of w in m's list.
  const std::vector<std::vector<std::size_t>> men_rank{
      {3, 1, 0, 2},   // m1: w3 w2 w4 w1
      {3, 1, 0, 2},   // m2: w3 w2 w4 w1
      {3, 2, 1, 0},   // m3: w4 w3 w2 w1
      {1, 0, 2, 3}};  // m4: w2 w1 w3 w4
  const std::vector<std::vector<std::size_t>> women_rank{
      {3, 1, 0, 2},   // w1: m3 m2 m4 m1
      {3, 1, 0, 2},   // w2: m3 m2 m4 m1
      {3, 2, 1, 0},   // w3: m4 m3 m2 m1
      {1, 0, 2, 3}};  // w4: m2 m1 m3 m4
  SinglePeakedMarket spm({1, 2, 3, 4}, {1, 2, 3, 4}, {3, 3, 4, 2}, {3, 3, 4, 2},
                         PeakRelation::custom, men_rank, women_rank, "single_peaked_no_top");
  Fixture f{"single_peaked_no_top",
            "Single-peaked preferences where no participant receives their top choice", spm,
            {pairs_of({3, 1, 2, 0})}, {}, {}, {}, {}, {}};
  f.man_optimal = f.stable.front();
  f.woman_optimal = f.stable.front();
  return f;
}

inline Fixture geometric_strategy() {
  auto col = [](std::vector<double> v) {
    const std::size_t rows = v.size();
    return Matrix(rows, 1, std::move(v));
  };
  const Matrix loc = col({1, 2, 3});
  GeometricMarket truthful(loc, col({7.0 / 3.0, 1, 5.0 / 3.0}), loc, col({3, 7.0 / 3.0, 3}),
                           "geometric_strategy");
  GeometricMarket misreport(loc, col({7.0 / 3.0, 1, 5.0 / 3.0}), loc, col({3, 5.0 / 3.0, 3}),
                            "geometric_strategy:w2_ideal_5/3");
  Fixture f{"geometric_strategy", "Geometric preferences that can be manipulated", truthful,
            {pairs_of({2, 0, 1}), pairs_of({2, 1, 0})}, {}, {}, {}, {}, {}};
  f.man_optimal = pairs_of({2, 0, 1});
  f.woman_optimal = pairs_of({2, 1, 0});
  f.manipulated = Market(misreport);
  f.manipulation = "w2 reports ideal 5/3 instead of 7/3";
  f.manipulated_stable = {pairs_of({2, 1, 0})};
  return f;
}

}  // namespace detail

/// Known names plus the alias two_list_manipulable for list_strategy.
inline Fixture fixture(const std::string& name) {
  if (name == "two_list_no_top") return detail::two_list_no_top();
  if (name == "two_list_greedy") return detail::two_list_greedy();
  if (name == "list_strategy" || name == "two_list_manipulable") return detail::list_strategy();
  if (name == "single_peaked_no_top") return detail::single_peaked_no_top();
  if (name == "geometric_strategy") return detail::geometric_strategy();
  throw Error(Errc::unknown_fixture, "no fixture named '" + name + "'");
}

}  // namespace smatch
