#include <gtest/gtest.h>

#include <functional>

#include "helpers.hpp"
#include "oracles.hpp"
#include "smatch/fixtures.hpp"
#include "smatch/verify.hpp"

using namespace smatch;
using testing_helpers::make_market;
using testing_helpers::mixed_matching;

namespace {

using Verifier = std::function<VerifyReport(const Market&, const Matching&)>;

void expect_agrees(const Market& market, const Matching& mu, const Verifier& verify,
                   const std::string& label) {
  const auto s = oracle::scores(market);
  const auto blocking = oracle::blocking_pairs(s, mu);
  const VerifyReport r = verify(market, mu);
  ASSERT_EQ(r.stable, blocking.empty()) << label;
  if (!r.stable) {
    ASSERT_TRUE(r.witness);
    ASSERT_TRUE(oracle::is_blocking(s, mu, r.witness->man, r.witness->woman)) << label;
  } else {
    ASSERT_FALSE(r.witness);
  }
}

// Entries from {-1, 0, 1}: many ties, zero weights and short trailing-zero classes.
AttributeMarket ternary_attribute(Rng& rng, std::size_t n, std::size_t d) {
  auto m = [&] {
    Matrix x(n, d);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < d; ++c) x(r, c) = static_cast<double>(rng.between(-1, 1));
    }
    return x;
  };
  return AttributeMarket(m(), m(), m(), m());
}

template <class Make>
void run_against_oracle(std::uint64_t seed, int reps, Make make, const Verifier& verify,
                        const std::string& label) {
  Rng rng(seed);
  for (int rep = 0; rep < reps; ++rep) {
    const Market market = make(rng, rep);
    const Matching mu = mixed_matching(rng, market, rep);
    expect_agrees(market, mu, verify, label + " rep " + std::to_string(rep));
  }
}

Verifier via(const std::string& name) {
  return [name](const Market& market, const Matching& mu) -> VerifyReport {
    if (name == "attribute") return verify_attribute(std::get<AttributeMarket>(market), mu);
    if (name == "bitset") return verify_boolean_bitset(std::get<AttributeMarket>(market), mu);
    if (name == "list") return verify_list(std::get<ListMarket>(market), mu);
    if (name == "single-peaked") return verify_single_peaked(std::get<SinglePeakedMarket>(market), mu);
    if (name == "geometric") return verify_geometric(std::get<GeometricMarket>(market), mu);
    return verify_brute(market, mu);
  };
}

}  // namespace

TEST(VerifyBrute, WitnessIsLexicographicallyFirst) {
  Rng rng(31);
  for (const auto& model : testing_helpers::test_models()) {
    for (int rep = 0; rep < 30; ++rep) {
      const Market market = make_market(model, rng, 1 + rng.below(15), 2, rep % 2 == 0);
      const Matching mu = mixed_matching(rng, market, rep);
      const auto blocking = oracle::blocking_pairs(oracle::scores(market), mu);
      const VerifyReport r = verify_brute(market, mu);
      ASSERT_EQ(r.stable, blocking.empty());
      if (!r.stable) {
        EXPECT_EQ(r.witness->man, blocking.front().first);
        EXPECT_EQ(r.witness->woman, blocking.front().second);
      }
    }
  }
}

TEST(VerifyAttribute, AgreesWithOracleOnRealData) {
  run_against_oracle(
      32, 300,
      [](Rng& rng, int rep) -> Market {
        return random_attribute(rng, 1 + rng.below(80), 1 + rng.below(4),
                                rep % 2 ? Dist::signed_uniform : Dist::uniform);
      },
      via("attribute"), "attribute real");
}

TEST(VerifyAttribute, AgreesWithOracleOnTiedData) {
  run_against_oracle(
      33, 300,
      [](Rng& rng, int rep) -> Market {
        if (rep % 2) return random_attribute(rng, 1 + rng.below(60), 1 + rng.below(4), Dist::boolean);
        return ternary_attribute(rng, 1 + rng.below(60), 1 + rng.below(4));
      },
      via("attribute"), "attribute tied");
}

TEST(VerifyBitset, AgreesWithOracle) {
  run_against_oracle(
      34, 300,
      [](Rng& rng, int) -> Market {
        return random_attribute(rng, 1 + rng.below(60), 1 + rng.below(130), Dist::boolean);
      },
      via("bitset"), "bitset");
}

TEST(VerifyBitset, Errors) {
  Rng rng(35);
  const AttributeMarket real = random_attribute(rng, 3, 2, Dist::uniform);
  try {
    verify_boolean_bitset(real, Matching::identity(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::non_boolean_entry);
  }
  const AttributeMarket wide = random_attribute(rng, 2, max_bitset_dimension + 1, Dist::boolean);
  try {
    verify_boolean_bitset(wide, Matching::identity(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::too_large);
  }
}

TEST(VerifyList, AgreesWithOracle) {
  run_against_oracle(
      36, 400,
      [](Rng& rng, int) -> Market { return random_list(rng, 1 + rng.below(80), 1 + rng.below(6)); },
      via("list"), "list");
}

TEST(VerifyList, NeverReportsAMatchedPair) {
  // One list on each side and the identity: every man is with the woman he ranks
  // equal to himself at the same place, and nobody strictly prefers anyone else
  // who would accept.
  ListMarket lm({{0, 1, 2}}, {{0, 1, 2}}, {0, 0, 0}, {0, 0, 0});
  EXPECT_TRUE(verify_list(lm, Matching::identity(3)).stable);
}

TEST(VerifyList, FixtureWithSwappedPartners) {
  const Fixture f = fixture("two_list_no_top");
  EXPECT_TRUE(verify_list(std::get<ListMarket>(f.market), f.stable.front()).stable);
  // m1 and m2 exchange partners. Frozen from the oracle: blocking pairs (m1,w2), (m4,w2).
  const Matching swapped{{2, 1, 4, 3, 0}};
  const auto blocking = oracle::blocking_pairs(oracle::scores(f.market), swapped);
  const std::vector<std::pair<std::size_t, std::size_t>> frozen{{0, 1}, {3, 1}};
  EXPECT_EQ(blocking, frozen);
  const VerifyReport r = verify_list(std::get<ListMarket>(f.market), swapped);
  ASSERT_FALSE(r.stable);
  EXPECT_TRUE(std::find(frozen.begin(), frozen.end(),
                        std::pair{r.witness->man, r.witness->woman}) != frozen.end());
}

TEST(VerifySinglePeaked, AgreesWithOracle) {
  run_against_oracle(
      37, 400,
      [](Rng& rng, int rep) -> Market {
        const std::size_t n = 1 + rng.below(80);
        if (rep % 2) return testing_helpers::random_custom_single_peaked(rng, n);
        return random_single_peaked(rng, n);
      },
      via("single-peaked"), "single-peaked");
}

TEST(VerifySinglePeaked, EquidistantCandidates) {
  // Integer positions and integer ideals give many exact distance ties.
  run_against_oracle(
      38, 300,
      [](Rng& rng, int) -> Market {
        const std::size_t n = 1 + rng.below(30);
        std::vector<double> pos(n), mi(n), wi(n);
        for (std::size_t i = 0; i < n; ++i) pos[i] = static_cast<double>(i);
        for (auto& x : mi) x = static_cast<double>(rng.below(n));
        for (auto& x : wi) x = static_cast<double>(rng.below(n));
        return SinglePeakedMarket(pos, pos, mi, wi);
      },
      via("single-peaked"), "single-peaked ties");
}

TEST(VerifySinglePeaked, PreferenceIntervalIsExact) {
  Rng rng(39);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 1 + rng.below(25);
    const SinglePeakedMarket spm = rep % 2 ? testing_helpers::random_custom_single_peaked(rng, n)
                                           : random_single_peaked(rng, n);
    for (Side side : {Side::men, Side::women}) {
      for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t p = 0; p < n; ++p) {
          std::vector<std::size_t> better;
          for (std::size_t x = 0; x < n; ++x) {
            if (prefers(spm, side, c, x, p)) better.push_back(x);
          }
          const auto iv = strict_preference_interval(spm, side, c, p);
          if (better.empty()) {
            ASSERT_FALSE(iv);
          } else {
            ASSERT_TRUE(iv);
            EXPECT_EQ(iv->first, better.front());
            EXPECT_EQ(iv->second, better.back());
            EXPECT_EQ(better.size(), iv->second - iv->first + 1);
          }
        }
      }
    }
  }
}

TEST(VerifySinglePeaked, FixtureWitness) {
  const Fixture f = fixture("single_peaked_no_top");
  const auto& spm = std::get<SinglePeakedMarket>(f.market);
  EXPECT_TRUE(verify_single_peaked(spm, f.stable.front()).stable);
  // Reversed matching; frozen from the oracle: the only blocking pair is (m3, w3).
  const Matching reversed{{3, 2, 1, 0}};
  const VerifyReport r = verify_single_peaked(spm, reversed);
  ASSERT_FALSE(r.stable);
  EXPECT_EQ(r.witness->man, 2u);
  EXPECT_EQ(r.witness->woman, 2u);
}

TEST(VerifyGeometric, AgreesWithOracle) {
  run_against_oracle(
      40, 300,
      [](Rng& rng, int rep) -> Market {
        return random_geometric(rng, 1 + rng.below(60), 1 + rng.below(4),
                                rep % 2 ? Dist::boolean : Dist::signed_uniform);
      },
      via("geometric"), "geometric");
}

TEST(Verify, MalformedMatchingIsRejected) {
  Rng rng(41);
  const Market market = random_list(rng, 4, 2);
  for (const auto& name : {"brute", "list"}) {
    try {
      via(name)(market, Matching{{0, 0, 1, 2}});
      FAIL() << name;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::malformed_matching);
    }
  }
}
