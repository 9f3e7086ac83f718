#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "smatch/bench.hpp"
#include "smatch/fixtures.hpp"
#include "smatch/generate.hpp"
#include "smatch/io.hpp"
#include "smatch/solve.hpp"

using namespace smatch;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out, err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("smatch_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  Outcome run(const std::string& args) const {
    const std::string out = path("stdout.txt"), err = path("stderr.txt");
    const std::string cmd = std::string(SMATCH_CLI) + " " + args + " > " + out + " 2> " + err;
    const int status = std::system(cmd.c_str());
    Outcome r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = read_text(out);
    r.err = read_text(err);
    return r;
  }

  void write(const std::string& name, const std::string& text) const { write_text(path(name), text); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, GenIsDeterministic) {
  const Outcome a = run("gen --model attribute --n 4 --d 2 --seed 7");
  const Outcome b = run("gen --model attribute --n 4 --d 2 --seed 7");
  const Outcome c = run("gen --model attribute --n 4 --d 2 --seed 8");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
  ASSERT_EQ(run("--seed 7 gen --model attribute --n 4 --d 2 --out " + path("x.json")).code, 0);
  EXPECT_EQ(read_text(path("x.json")), a.out);
}

TEST_F(Cli, GenRoundTripMatchesInProcessMarket) {
  for (const std::string model : {"attribute", "one_sided", "list", "single_peaked", "geometric",
                                  "explicit"}) {
    const Outcome r = run("gen --model " + model + " --n 12 --d 3 --dist signed --seed 5");
    ASSERT_EQ(r.code, 0) << r.err;
    const Market parsed = market_from_json(parse_json(r.out, model));
    Rng rng(5);
    const Market direct = random_market(model, rng, 12, 3, Dist::signed_uniform);
    EXPECT_EQ(dump(to_json(parsed)), dump(to_json(direct))) << model;
    const auto s1 = oracle::scores(parsed), s2 = oracle::scores(direct);
    EXPECT_EQ(s1.men, s2.men);
    EXPECT_EQ(s1.women, s2.women);
    EXPECT_EQ(gale_shapley(parsed, Side::men).matching, gale_shapley(direct, Side::men).matching);
  }
}

TEST_F(Cli, GenReductionRecordsParameters) {
  const Outcome r = run("gen --reduction verify-hardness --n 8 --d 6 --l 3 --seed 1");
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = parse_json(r.out, "reduction");
  const Json& red = j.at("reduction");
  EXPECT_EQ(red.at("family"), "verify-hardness");
  EXPECT_EQ(red.at("l"), 3);
  const auto U = red.at("U").get<BitVectors>(), V = red.at("V").get<BitVectors>();
  ASSERT_EQ(U.size(), 8u);
  ASSERT_EQ(U.front().size(), 6u);
  EXPECT_EQ(red.at("oracle_answer").get<bool>(), oracle::max_ip(U, V) >= 3);
  EXPECT_NE(j.at("provenance").get<std::string>().find("l=3"), std::string::npos);
  EXPECT_EQ(market_size(market_from_json(j)), 16u);
}

TEST_F(Cli, GenFixture) {
  const Outcome r = run("gen --fixture list_strategy");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, dump(to_json(fixture("list_strategy").market)));
  EXPECT_EQ(run("gen --fixture nope").code, 2);
}

TEST_F(Cli, GenUsageErrors) {
  EXPECT_EQ(run("gen").code, 2);
  EXPECT_EQ(run("gen --model attribute --fixture list_strategy").code, 2);
  EXPECT_EQ(run("gen --model nope --n 3").code, 2);
  EXPECT_EQ(run("gen --model attribute --n 3 --dist weird").code, 2);
  EXPECT_EQ(run("gen --reduction stable-pair --n 3 --d 3 --l 0").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("").code, 2);
}

TEST_F(Cli, SolveManOptimalOnManipulableFixture) {
  ASSERT_EQ(run("gen --fixture two_list_manipulable --out " + path("f.json")).code, 0);
  const Outcome r = run("solve " + path("f.json") + " --algo gs-men");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(matching_from_json(parse_json(r.out, "m")), *fixture("list_strategy").man_optimal);
  EXPECT_NE(r.err.find("proposals="), std::string::npos);
  EXPECT_NE(r.err.find("runtime_nanos="), std::string::npos);
  EXPECT_EQ(run("--quiet solve " + path("f.json")).err, "");
}

TEST_F(Cli, SolveSmallUniverseThenVerify) {
  ASSERT_EQ(run("gen --model attribute --n 30 --d 2 --dist bool --seed 3 --out " + path("b.json")).code, 0);
  ASSERT_EQ(run("solve " + path("b.json") + " --algo small-universe --out " + path("m.json")).code, 0);
  EXPECT_EQ(run("verify " + path("b.json") + " " + path("m.json") + " --algo brute").code, 0);
  EXPECT_EQ(run("verify " + path("b.json") + " " + path("m.json") + " --algo boolean-bitset").code, 0);
  EXPECT_EQ(run("verify " + path("b.json") + " " + path("m.json") + " --algo attribute").code, 0);
}

TEST_F(Cli, SolveIncompatibleAlgorithm) {
  ASSERT_EQ(run("gen --model attribute --n 5 --seed 1 --out " + path("a.json")).code, 0);
  const Outcome r = run("solve " + path("a.json") + " --algo one-sided");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("IncompatibleAlgorithm"), std::string::npos);
  EXPECT_EQ(run("solve " + path("missing.json")).code, 2);
  write("bad.json", "{\"model\": \"attribute\", \"n\": 2}");
  EXPECT_EQ(run("solve " + path("bad.json")).code, 2);
}

TEST_F(Cli, VerifyExitStatus) {
  ASSERT_EQ(run("gen --model geometric --n 20 --d 2 --seed 2 --out " + path("g.json")).code, 0);
  ASSERT_EQ(run("solve " + path("g.json") + " --out " + path("m.json")).code, 0);
  EXPECT_EQ(run("verify " + path("g.json") + " " + path("m.json")).code, 0);
  EXPECT_EQ(run("verify " + path("g.json") + " " + path("m.json") + " --algo geometric").code, 0);
  EXPECT_EQ(run("verify " + path("g.json") + " " + path("m.json") + " --algo list").code, 2);
  write("broken.json", "{\"pairs\": [0, 0]}");
  EXPECT_EQ(run("verify " + path("g.json") + " " + path("broken.json")).code, 2);
  EXPECT_EQ(run("verify " + path("g.json")).code, 2);
}

TEST_F(Cli, VerifyHardnessDesignatedMatchingIsUnstable) {
  int found = 0;
  for (int seed = 1; seed <= 20 && found < 3; ++seed) {
    const std::string inst = path("v.json"), mu = path("mu.json");
    ASSERT_EQ(run("gen --reduction verify-hardness --n 6 --d 5 --l 2 --seed " + std::to_string(seed) +
                  " --out " + inst + " --matching-out " + mu)
                  .code,
              0);
    const Json j = parse_json(read_text(inst), "v");
    const bool answer = j.at("reduction").at("oracle_answer").get<bool>();
    const Outcome r = run("verify " + inst + " " + mu + " --algo attribute");
    EXPECT_EQ(r.code, answer ? 1 : 0);
    if (answer) {
      ++found;
      std::istringstream is(r.out);
      std::string word;
      std::size_t m = 0, w = 0;
      is >> word >> m >> w;
      EXPECT_EQ(word, "unstable");
      const Market market = market_from_json(j);
      EXPECT_TRUE(oracle::is_blocking(oracle::scores(market), read_matching(mu), m, w));
    }
  }
  EXPECT_GT(found, 0);
}

TEST_F(Cli, VerifyListOnFixture) {
  ASSERT_EQ(run("gen --fixture two_list_no_top --out " + path("f.json")).code, 0);
  write("m.json", "{\"pairs\": [1, 2, 4, 3, 0]}");
  EXPECT_EQ(run("verify " + path("f.json") + " " + path("m.json") + " --algo list").code, 0);
  write("s.json", "{\"pairs\": [2, 1, 4, 3, 0]}");
  const Outcome r = run("verify " + path("f.json") + " " + path("s.json") + " --algo list");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out.rfind("unstable ", 0), 0u);
}

TEST_F(Cli, PairQueries) {
  for (int seed = 1; seed <= 6; ++seed) {
    const std::string inst = path("p.json");
    ASSERT_EQ(run("gen --reduction stable-pair --n 3 --d 4 --l 2 --seed " + std::to_string(seed) +
                  " --out " + inst)
                  .code,
              0);
    const Json j = parse_json(read_text(inst), "p");
    const auto dp = j.at("reduction").at("designated_pair").get<std::vector<std::size_t>>();
    const bool answer = j.at("reduction").at("oracle_answer").get<bool>();
    const std::string args = inst + " " + std::to_string(dp[0]) + " " + std::to_string(dp[1]);
    EXPECT_EQ(run("pair " + args + " --mode all").code, answer ? 0 : 1);
    EXPECT_EQ(run("pair " + args + " --mode some").code, answer ? 0 : 1);
  }
  ASSERT_EQ(run("gen --model list --n 8 --d 2 --seed 4 --out " + path("l.json")).code, 0);
  const Market market = read_market(path("l.json"));
  const Matching mu = gale_shapley(market, Side::men).matching;
  EXPECT_EQ(run("pair " + path("l.json") + " 3 " + std::to_string(mu.pairs[3]) + " --mode some").code, 0);
  ASSERT_EQ(run("gen --model list --n 50 --d 2 --seed 4 --out " + path("big.json")).code, 0);
  const Outcome big = run("pair " + path("big.json") + " 0 0 --mode some");
  EXPECT_EQ(big.code, 2);
  EXPECT_NE(big.err.find("TooLarge"), std::string::npos);
  EXPECT_EQ(run("pair " + path("l.json") + " 9 0").code, 2);
  EXPECT_EQ(run("pair " + path("l.json") + " 0 0 --mode maybe").code, 2);
}

TEST_F(Cli, BenchHeaderOnlyAndOracleChecks) {
  write("zero.json", R"({"model": "list", "n": [16], "d": [2], "algorithms": ["verify-list"],
                         "repetitions": 0, "seed": 1})");
  const Outcome zero = run("bench " + path("zero.json"));
  ASSERT_EQ(zero.code, 0) << zero.err;
  EXPECT_EQ(zero.out, std::string(bench_csv_header) + "\n");

  write("grid.json", R"({"model": ["list", "attribute"], "n": [16, 8], "d": [2],
                         "algorithms": ["verify-brute", "gs-men", "verify-list"],
                         "repetitions": 2, "seed": 9, "oracle_check": 1.0})");
  // verify-list does not apply to attribute markets.
  EXPECT_EQ(run("bench " + path("grid.json")).code, 2);

  write("ok.json", R"({"model": ["list", "explicit"], "n": [16, 8], "d": [2],
                       "algorithms": ["verify-brute", "gs-men", "gs-women"],
                       "repetitions": 2, "seed": 9, "oracle_check": 1.0, "matching": "random"})");
  const Outcome a = run("bench " + path("ok.json"));
  ASSERT_EQ(a.code, 0) << a.err;
  std::istringstream is(a.out);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, bench_csv_header);
  std::vector<std::vector<std::string>> rows;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    ASSERT_EQ(cells.size(), 9u);
    EXPECT_EQ(cells[8], "true");
    rows.push_back(cells);
  }
  EXPECT_EQ(rows.size(), 2u * 2 * 3 * 2);
  auto key = [](const std::vector<std::string>& r) {
    return std::tuple{r[1], std::stoul(r[2]), std::stoul(r[3]), r[4], std::stoull(r[5])};
  };
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(key(rows[i - 1]), key(rows[i]));

  // Same config, same CSV apart from runtimes.
  const Outcome b = run("bench " + path("ok.json"));
  auto strip = [](const std::string& csv) {
    std::istringstream s(csv);
    std::string out, l;
    while (std::getline(s, l)) {
      std::vector<std::string> c;
      std::stringstream ls(l);
      for (std::string x; std::getline(ls, x, ',');) c.push_back(x);
      c[6] = "";
      for (const auto& x : c) out += x + ",";
      out += "\n";
    }
    return out;
  };
  EXPECT_EQ(strip(a.out), strip(b.out));
  // --seed overrides the config seed.
  EXPECT_NE(strip(run("--seed 10 bench " + path("ok.json")).out), strip(a.out));
}

TEST_F(Cli, BenchConfigErrors) {
  write("bad.json", "{not json");
  EXPECT_EQ(run("bench " + path("bad.json")).code, 2);
  write("missing.json", R"({"model": "list", "n": [4]})");
  EXPECT_EQ(run("bench " + path("missing.json")).code, 2);
  write("frac.json", R"({"model": "list", "n": [4], "algorithms": ["gs-men"], "repetitions": 1,
                         "oracle_check": 2})");
  EXPECT_EQ(run("bench " + path("frac.json")).code, 2);
  write("algo.json", R"({"model": "list", "n": [4], "algorithms": ["magic"], "repetitions": 1})");
  EXPECT_EQ(run("bench " + path("algo.json")).code, 2);
}

TEST_F(Cli, FixtureListing) {
  const Outcome list = run("fixture --list");
  ASSERT_EQ(list.code, 0);
  for (const auto& name : fixture_names()) EXPECT_NE(list.out.find(name), std::string::npos);
  const Outcome one = run("fixture geometric_strategy");
  ASSERT_EQ(one.code, 0);
  const Json j = parse_json(one.out, "fixture");
  EXPECT_EQ(j.at("stable").size(), 2u);
  EXPECT_EQ(j.at("manipulated_stable").size(), 1u);
  EXPECT_EQ(run("fixture unknown").code, 2);
}
