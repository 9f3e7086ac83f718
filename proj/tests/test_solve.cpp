#include <gtest/gtest.h>

#include "helpers.hpp"
#include "oracles.hpp"
#include "smatch/fixtures.hpp"
#include "smatch/solve.hpp"

using namespace smatch;
using testing_helpers::make_market;
using testing_helpers::test_models;

TEST(GaleShapley, OutputIsStableOnEveryModel) {
  Rng rng(21);
  for (const auto& model : test_models()) {
    for (int rep = 0; rep < 40; ++rep) {
      const std::size_t n = 1 + rng.below(40);
      const Market market = make_market(model, rng, n, 1 + rng.below(4), rep % 2 == 0);
      const auto s = oracle::scores(market);
      for (Side side : {Side::men, Side::women}) {
        const SolveReport r = gale_shapley(market, side);
        ASSERT_TRUE(oracle::is_perfect_matching(r.matching.pairs));
        ASSERT_TRUE(oracle::stable(s, r.matching)) << model << " rep " << rep;
        ASSERT_LE(r.proposals, n * n);
      }
    }
  }
}

TEST(GaleShapley, ProposingSideGetsItsOptimalMatching) {
  Rng rng(22);
  for (const auto& model : test_models()) {
    for (int rep = 0; rep < 15; ++rep) {
      const std::size_t n = 1 + rng.below(6);
      const Market market = make_market(model, rng, n, 2, false);
      const auto s = oracle::scores(market);
      const auto stables = oracle::all_stable(s);
      const auto mo = oracle::side_optimal(s, stables, Side::men);
      const auto wo = oracle::side_optimal(s, stables, Side::women);
      ASSERT_TRUE(mo && wo);
      EXPECT_EQ(gale_shapley(market, Side::men).matching, *mo) << model;
      EXPECT_EQ(gale_shapley(market, Side::women).matching, *wo) << model;
    }
  }
}

TEST(GaleShapley, FixtureOptima) {
  for (const auto& name : fixture_names()) {
    const Fixture f = fixture(name);
    EXPECT_EQ(gale_shapley(f.market, Side::men).matching, *f.man_optimal) << name;
    EXPECT_EQ(gale_shapley(f.market, Side::women).matching, *f.woman_optimal) << name;
  }
}

TEST(SmallUniverse, StableOnBooleanMarkets) {
  Rng rng(23);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 1 + rng.below(60), d = 1 + rng.below(3);
    const AttributeMarket am = random_attribute(rng, n, d, Dist::boolean);
    const SolveReport r = find_small_universe(am, {0.0, 1.0});
    ASSERT_TRUE(oracle::is_perfect_matching(r.matching.pairs));
    ASSERT_TRUE(oracle::stable(oracle::scores(am), r.matching)) << rep;
  }
}

TEST(SmallUniverse, StableOnSmallIntegerUniverse) {
  Rng rng(24);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t n = 1 + rng.below(50), d = 2;
    auto ints = [&] {
      Matrix m(n, d);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < d; ++c) m(r, c) = static_cast<double>(rng.between(-1, 1));
      }
      return m;
    };
    // Men may use any reals; only the women's side is restricted.
    const AttributeMarket am(random_matrix(rng, n, d, Dist::signed_uniform),
                             random_matrix(rng, n, d, Dist::signed_uniform), ints(), ints());
    const SolveReport r = find_small_universe(am, {-1.0, 0.0, 1.0});
    ASSERT_TRUE(oracle::stable(oracle::scores(am), r.matching)) << rep;
    EXPECT_EQ(find_small_universe(am).matching, r.matching);
  }
}

TEST(SmallUniverse, RejectsEntriesOutsideUniverse) {
  Rng rng(25);
  const AttributeMarket am = random_attribute(rng, 4, 2, Dist::uniform);
  try {
    find_small_universe(am, {0.0, 1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::universe_violation);
  }
}

namespace {

void check_one_sided(const OneSidedMarket& osm, bool compare_with_gs) {
  const SolveReport r = find_one_sided(osm);
  ASSERT_TRUE(oracle::is_perfect_matching(r.matching.pairs));
  ASSERT_TRUE(oracle::stable(oracle::scores(osm), r.matching));
  if (compare_with_gs) {
    ASSERT_EQ(r.matching, gale_shapley(materialize(osm), Side::women).matching);
  }
  // Men matched to positive women all have attribute >= men matched to negative women.
  double lowest_pos = INFINITY, highest_neg = -INFINITY;
  for (std::size_t m = 0; m < osm.n(); ++m) {
    const double a = osm.men_attr()[m];
    if (osm.women_sign()[r.matching.pairs[m]] > 0) {
      lowest_pos = std::min(lowest_pos, a);
    } else {
      highest_neg = std::max(highest_neg, a);
    }
  }
  ASSERT_GE(lowest_pos, highest_neg);
}

}  // namespace

TEST(OneSided, MatchesWomanProposingGsAndSeparatesTopK) {
  Rng rng(26);
  for (int rep = 0; rep < 150; ++rep) {
    const std::size_t n = 1 + rng.below(60), d = 1 + rng.below(4);
    check_one_sided(random_one_sided(rng, n, d, Dist::signed_uniform), true);
  }
}

// With tied men's attributes index tie-breaking no longer makes the negative
// women's order the reverse of the positive one, so only stability and the
// separation are required.
TEST(OneSided, TiedAttributes) {
  Rng rng(27);
  for (int rep = 0; rep < 150; ++rep) {
    const std::size_t n = 1 + rng.below(30), d = 1 + rng.below(3);
    check_one_sided(random_one_sided(rng, n, d, Dist::boolean), false);
  }
}

TEST(OneSided, TiedWeightsDistinctAttributes) {
  Rng rng(29);
  for (int rep = 0; rep < 150; ++rep) {
    const std::size_t n = 1 + rng.below(30), d = 1 + rng.below(3);
    std::vector<double> attr(n);
    for (std::size_t i = 0; i < n; ++i) attr[i] = static_cast<double>(i);
    rng.shuffle(attr);
    std::vector<int> sign(n);
    for (auto& s : sign) s = rng.coin() ? 1 : -1;
    check_one_sided(OneSidedMarket(random_matrix(rng, n, d, Dist::boolean),
                                   random_matrix(rng, n, d, Dist::boolean), attr, sign),
                    true);
  }
}

TEST(OneSided, AllSameSign) {
  Rng rng(28);
  for (int sign : {1, -1}) {
    const std::size_t n = 20;
    OneSidedMarket osm(random_matrix(rng, n, 2, Dist::uniform), random_matrix(rng, n, 2, Dist::uniform),
                       random_vector(rng, n, Dist::uniform), std::vector<int>(n, sign));
    check_one_sided(osm, true);
  }
}
