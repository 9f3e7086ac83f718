// smatch: generate, solve and verify stable matching instances.
//
// Exit status: 0 success / stable / yes, 1 unstable / no / oracle mismatch,
// 2 usage, parse or model errors.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smatch/bench.hpp"
#include "smatch/fixtures.hpp"
#include "smatch/generate.hpp"
#include "smatch/io.hpp"
#include "smatch/pairs.hpp"
#include "smatch/reductions.hpp"

namespace {

using namespace smatch;

struct Globals {
  std::uint64_t seed = 0;
  std::string out;
  bool quiet = false;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty() || g.out == "-") {
    std::cout << text << std::flush;
  } else {
    write_text(g.out, text);
  }
}

void note(const Globals& g, const std::string& line) {
  if (!g.quiet) std::cerr << line << "\n";
}

Json matchings_json(const std::vector<Matching>& ms) {
  Json a = Json::array();
  for (const auto& m : ms) a.push_back(m.pairs);
  return a;
}

Json fixture_json(const Fixture& f) {
  Json j;
  j["name"] = f.name;
  j["title"] = f.title;
  j["instance"] = to_json(f.market);
  j["stable"] = matchings_json(f.stable);
  if (f.man_optimal) j["man_optimal"] = f.man_optimal->pairs;
  if (f.woman_optimal) j["woman_optimal"] = f.woman_optimal->pairs;
  if (f.manipulated) {
    j["manipulation"] = f.manipulation;
    j["manipulated_instance"] = to_json(*f.manipulated);
    j["manipulated_stable"] = matchings_json(f.manipulated_stable);
  }
  return j;
}

struct GenArgs {
  std::string model, reduction, fixture, dist = "uniform", matching_out;
  std::size_t n = 0, d = 2;
  std::int64_t l = 1;
  double density = 0.5;
};

int cmd_gen(const Globals& g, const GenArgs& a) {
  const int sources = !a.model.empty() + !a.reduction.empty() + !a.fixture.empty();
  require(sources == 1, Errc::parse_error, "gen needs exactly one of --model, --reduction, --fixture");
  if (!a.fixture.empty()) {
    emit(g, dump(to_json(fixture(a.fixture).market)));
    return 0;
  }
  require(a.n >= 1, Errc::parse_error, "--n must be >= 1");
  Rng rng(g.seed);
  if (!a.model.empty()) {
    emit(g, dump(to_json(random_market(a.model, rng, a.n, a.d, parse_dist(a.dist)))));
    return 0;
  }
  const BitVectors U = random_bit_vectors(rng, a.n, a.d, a.density);
  const BitVectors V = random_bit_vectors(rng, a.n, a.d, a.density);
  const ReductionInstance inst = gen_reduction(a.reduction, U, V, a.l);
  emit(g, dump(to_json(inst)));
  if (!a.matching_out.empty()) {
    const auto* mu = std::get_if<Matching>(&inst.designated);
    require(mu != nullptr, Errc::parse_error,
            "--matching-out: family '" + a.reduction + "' has no designated matching");
    write_text(a.matching_out, dump(to_json(*mu)));
  }
  return 0;
}

int cmd_solve(const Globals& g, const std::string& path, const std::string& algo,
              const std::vector<double>& universe) {
  const Market market = read_market(path);
  const SolveReport r = solve_with(algo, market, universe);
  emit(g, dump(to_json(r.matching)));
  note(g, "algorithm=" + r.algorithm + " n=" + std::to_string(r.matching.size()) +
              " proposals=" + std::to_string(r.proposals) +
              " runtime_nanos=" + std::to_string(r.runtime_nanos));
  return 0;
}

int cmd_verify(const Globals& g, const std::string& instance, const std::string& matching,
               const std::string& algo) {
  const Market market = read_market(instance);
  const Matching mu = read_matching(matching);
  const VerifyReport r = verify_with(algo, market, mu);
  if (r.stable) {
    emit(g, "stable\n");
  } else {
    emit(g, "unstable " + std::to_string(r.witness->man) + " " + std::to_string(r.witness->woman) +
                "\n");
  }
  note(g, "algorithm=" + r.algorithm + " comparisons=" + std::to_string(r.comparisons) +
              " runtime_nanos=" + std::to_string(r.runtime_nanos));
  return r.stable ? 0 : 1;
}

int cmd_pair(const Globals& g, const std::string& path, std::size_t m, std::size_t w,
             const std::string& mode) {
  const Market market = read_market(path);
  const bool yes = mode == "all" ? in_all_stable(market, m, w) : in_some_stable(market, m, w);
  emit(g, yes ? "yes\n" : "no\n");
  return yes ? 0 : 1;
}

int cmd_bench(const Globals& g, const std::string& path, bool seed_given) {
  BenchConfig c = bench_config_from_json(parse_json(read_text(path), path));
  if (seed_given) c.seed = g.seed;
  const BenchResult r = run_bench(c);
  emit(g, to_csv(r.records));
  for (const auto& msg : r.oracle_mismatches) std::cerr << "oracle mismatch: " << msg << "\n";
  return r.oracle_mismatches.empty() ? 0 : 1;
}

int cmd_fixture(const Globals& g, const std::string& name, bool list) {
  if (list || name.empty()) {
    std::string text;
    for (const auto& f : fixture_names()) text += f + "\n";
    emit(g, text);
    return 0;
  }
  emit(g, dump(fixture_json(fixture(name))));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stable matching under succinct preferences"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  auto* seed_opt = app.add_option("--seed", g.seed, "seed (unsigned 64-bit)");
  app.add_option("--out", g.out, "output path (default stdout)");
  app.add_flag("--quiet", g.quiet, "suppress report lines on stderr");

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "write a random, reduction or fixture instance");
  gen->add_option("--model", ga.model, "attribute|one_sided|list|single_peaked|geometric|explicit");
  gen->add_option("--n", ga.n, "market size, or |U| = |V| for reductions");
  gen->add_option("--d", ga.d, "dimension / number of lists / vector length");
  gen->add_option("--dist", ga.dist, "bool|uniform|signed");
  gen->add_option("--reduction", ga.reduction, "reduction family");
  gen->add_option("--l", ga.l, "threshold for reduction families");
  gen->add_option("--density", ga.density, "bit density of random U, V");
  gen->add_option("--fixture", ga.fixture, "fixture name");
  gen->add_option("--matching-out", ga.matching_out, "also write the designated matching here");

  std::string instance, matching, algo = "gs-men";
  std::vector<double> universe;
  auto* solve = app.add_subcommand("solve", "compute a stable matching");
  solve->add_option("instance", instance, "instance file")->required();
  solve->add_option("--algo", algo, "gs-men|gs-women|small-universe|one-sided");
  solve->add_option("--universe", universe, "value universe for small-universe");

  std::string valgo = "brute";
  auto* verify = app.add_subcommand("verify", "check a matching for blocking pairs");
  verify->add_option("instance", instance, "instance file")->required();
  verify->add_option("matching", matching, "matching file")->required();
  verify->add_option("--algo", valgo,
                     "brute|attribute|list|single-peaked|geometric|boolean-bitset");

  std::size_t pm = 0, pw = 0;
  std::string mode = "all";
  auto* pair = app.add_subcommand("pair", "is (m, w) in all / some stable matchings");
  pair->add_option("instance", instance, "instance file")->required();
  pair->add_option("m", pm, "man index")->required();
  pair->add_option("w", pw, "woman index")->required();
  pair->add_option("--mode", mode, "all|some")->check(CLI::IsMember({"all", "some"}));

  std::string config;
  auto* bench = app.add_subcommand("bench", "run a benchmark grid, CSV on output");
  bench->add_option("config", config, "bench config JSON")->required();

  std::string fname;
  bool flist = false;
  auto* fix = app.add_subcommand("fixture", "print a fixture with its known matchings");
  fix->add_option("name", fname, "fixture name");
  fix->add_flag("--list", flist, "list fixture names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) return cmd_gen(g, ga);
    if (*solve) return cmd_solve(g, instance, algo, universe);
    if (*verify) return cmd_verify(g, instance, matching, valgo);
    if (*pair) return cmd_pair(g, instance, pm, pw, mode);
    if (*bench) return cmd_bench(g, config, seed_opt->count() > 0);
    if (*fix) return cmd_fixture(g, fname, flist);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
