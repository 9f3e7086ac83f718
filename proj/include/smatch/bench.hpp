#pragma once

// Algorithm dispatch by name and the benchmark grid runner.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "smatch/error.hpp"
#include "smatch/generate.hpp"
#include "smatch/io.hpp"
#include "smatch/prefs.hpp"
#include "smatch/solve.hpp"
#include "smatch/verify.hpp"

namespace smatch {

inline const std::vector<std::string>& solver_names() {
  static const std::vector<std::string> names{"gs-men", "gs-women", "small-universe", "one-sided"};
  return names;
}

inline const std::vector<std::string>& verifier_names() {
  static const std::vector<std::string> names{"brute",     "attribute", "list", "single-peaked",
                                              "geometric", "boolean-bitset"};
  return names;
}

namespace detail {

[[noreturn]] inline void incompatible(const std::string& algo, const Market& market) {
  throw Error(Errc::incompatible_algorithm,
              "'" + algo + "' does not apply to " + std::string(model_name(market)) + " markets");
}

}  // namespace detail

/// `universe` is only used by small-universe; empty means "the women's
/// distinct values".
inline SolveReport solve_with(const std::string& algo, const Market& market,
                              const std::vector<double>& universe = {}) {
  if (algo == "gs-men") return gale_shapley(market, Side::men);
  if (algo == "gs-women") return gale_shapley(market, Side::women);
  if (algo == "small-universe") {
    const auto* am = std::get_if<AttributeMarket>(&market);
    if (!am) detail::incompatible(algo, market);
    return universe.empty() ? find_small_universe(*am) : find_small_universe(*am, universe);
  }
  if (algo == "one-sided") {
    const auto* osm = std::get_if<OneSidedMarket>(&market);
    if (!osm) detail::incompatible(algo, market);
    return find_one_sided(*osm);
  }
  throw Error(Errc::incompatible_algorithm, "unknown solver '" + algo + "'");
}

inline VerifyReport verify_with(const std::string& algo, const Market& market, const Matching& mu) {
  if (algo == "brute") return verify_brute(market, mu);
  if (algo == "attribute" || algo == "boolean-bitset") {
    const auto* am = std::get_if<AttributeMarket>(&market);
    if (!am) detail::incompatible(algo, market);
    return algo == "attribute" ? verify_attribute(*am, mu) : verify_boolean_bitset(*am, mu);
  }
  if (algo == "list") {
    const auto* lm = std::get_if<ListMarket>(&market);
    if (!lm) detail::incompatible(algo, market);
    return verify_list(*lm, mu);
  }
  if (algo == "single-peaked") {
    const auto* spm = std::get_if<SinglePeakedMarket>(&market);
    if (!spm) detail::incompatible(algo, market);
    return verify_single_peaked(*spm, mu);
  }
  if (algo == "geometric") {
    const auto* gm = std::get_if<GeometricMarket>(&market);
    if (!gm) detail::incompatible(algo, market);
    return verify_geometric(*gm, mu);
  }
  throw Error(Errc::incompatible_algorithm, "unknown verifier '" + algo + "'");
}

/// FNV-1a over the partner indices, each as 8 little-endian bytes.
inline std::uint64_t matching_hash(const Matching& mu) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t w : mu.pairs) {
    auto x = static_cast<std::uint64_t>(w);
    for (int b = 0; b < 8; ++b) {
      h ^= (x >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct BenchConfig {
  std::vector<std::string> models;
  std::vector<std::size_t> n;
  std::vector<std::size_t> d;
  std::vector<std::string> algorithms;  // solver names or "verify-<verifier>"
  std::size_t repetitions = 1;
  std::uint64_t seed = 0;
  double oracle_check = 0.0;  // fraction of rows rechecked by verify_brute
  Dist dist = Dist::uniform;
  std::string matching = "gs";  // what verifiers are given: "gs" (gs-men output) or "random"
};

inline BenchConfig bench_config_from_json(const Json& j) {
  require(j.is_object(), Errc::parse_error, "bench config must be a JSON object");
  BenchConfig c;
  if (j.contains("model") && j.at("model").is_string()) {
    c.models = {detail::get_field<std::string>(j, "model")};
  } else {
    c.models = detail::get_field<std::vector<std::string>>(j, "model");
  }
  c.n = detail::get_field<std::vector<std::size_t>>(j, "n");
  c.d = j.contains("d") ? detail::get_field<std::vector<std::size_t>>(j, "d")
                        : std::vector<std::size_t>{1};
  c.algorithms = detail::get_field<std::vector<std::string>>(j, "algorithms");
  c.repetitions = detail::get_field<std::size_t>(j, "repetitions");
  if (j.contains("seed")) c.seed = detail::get_field<std::uint64_t>(j, "seed");
  if (j.contains("oracle_check")) c.oracle_check = detail::get_field<double>(j, "oracle_check");
  if (j.contains("dist")) c.dist = parse_dist(detail::get_field<std::string>(j, "dist"));
  if (j.contains("matching")) c.matching = detail::get_field<std::string>(j, "matching");
  require(c.oracle_check >= 0.0 && c.oracle_check <= 1.0, Errc::parse_error,
          "oracle_check must be a fraction in [0, 1]");
  require(c.matching == "gs" || c.matching == "random", Errc::parse_error,
          "matching must be 'gs' or 'random'");
  for (const auto& m : c.models) {
    require(std::find(model_names().begin(), model_names().end(), m) != model_names().end(),
            Errc::parse_error, "unknown model '" + m + "'");
  }
  for (const auto& a : c.algorithms) {
    const bool solver =
        std::find(solver_names().begin(), solver_names().end(), a) != solver_names().end();
    const bool verifier = a.rfind("verify-", 0) == 0 &&
                          std::find(verifier_names().begin(), verifier_names().end(), a.substr(7)) !=
                              verifier_names().end();
    require(solver || verifier, Errc::parse_error, "unknown algorithm '" + a + "'");
  }
  for (std::size_t x : c.n) require(x >= 1, Errc::parse_error, "n values must be >= 1");
  for (std::size_t x : c.d) require(x >= 1, Errc::parse_error, "d values must be >= 1");
  return c;
}

struct BenchRecord {
  std::string instance_id;
  std::string model;
  std::size_t n = 0;
  std::size_t d = 0;
  std::string algorithm;
  std::uint64_t seed = 0;
  std::uint64_t runtime_nanos = 0;
  std::string verdict_or_hash;
  bool oracle_checked = false;
};

struct BenchResult {
  std::vector<BenchRecord> records;
  std::vector<std::string> oracle_mismatches;
};

inline std::string hex64(std::uint64_t x) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(x));
  return buf;
}

/// Repetition r of grid cell (model, n, d) uses instance seed `seed + r`.
inline BenchResult run_bench(const BenchConfig& c) {
  BenchResult out;
  for (const auto& model : c.models) {
    for (std::size_t n : c.n) {
      for (std::size_t d : c.d) {
        for (std::size_t rep = 0; rep < c.repetitions; ++rep) {
          const std::uint64_t seed = c.seed + rep;
          Rng rng(seed);
          const Market market = random_market(model, rng, n, d, c.dist);
          const std::string id = model + "-n" + std::to_string(n) + "-d" + std::to_string(d) +
                                 "-s" + std::to_string(seed);
          std::optional<Matching> given;
          for (const auto& algo : c.algorithms) {
            BenchRecord rec{id, model, n, d, algo, seed, 0, "", false};
            Rng pick(fnv1a(id + "/" + algo));
            const bool check = c.oracle_check >= 1.0 || pick.uniform() < c.oracle_check;
            if (algo.rfind("verify-", 0) == 0) {
              if (!given) {
                given = c.matching == "gs" ? gale_shapley(market, Side::men).matching
                                           : random_matching(rng, n);
              }
              const VerifyReport r = verify_with(algo.substr(7), market, *given);
              rec.runtime_nanos = r.runtime_nanos;
              rec.verdict_or_hash = r.stable ? "stable" : "unstable";
              if (check) {
                rec.oracle_checked = true;
                if (verify_brute(market, *given).stable != r.stable) {
                  out.oracle_mismatches.push_back(id + " " + algo + ": verdict differs from brute");
                }
              }
            } else {
              const SolveReport r = solve_with(algo, market);
              rec.runtime_nanos = r.runtime_nanos;
              rec.verdict_or_hash = hex64(matching_hash(r.matching));
              if (check) {
                rec.oracle_checked = true;
                if (!verify_brute(market, r.matching).stable) {
                  out.oracle_mismatches.push_back(id + " " + algo + ": output is not stable");
                }
              }
            }
            out.records.push_back(std::move(rec));
          }
        }
      }
    }
  }
  std::stable_sort(out.records.begin(), out.records.end(),
                   [](const BenchRecord& a, const BenchRecord& b) {
                     return std::tie(a.model, a.n, a.d, a.algorithm, a.seed) <
                            std::tie(b.model, b.n, b.d, b.algorithm, b.seed);
                   });
  return out;
}

inline constexpr const char* bench_csv_header =
    "instance_id,model,n,d,algorithm,seed,runtime_nanos,verdict_or_hash,oracle_checked";

inline std::string to_csv(const std::vector<BenchRecord>& records) {
  std::ostringstream os;
  os << bench_csv_header << "\n";
  for (const auto& r : records) {
    os << r.instance_id << "," << r.model << "," << r.n << "," << r.d << "," << r.algorithm << ","
       << r.seed << "," << r.runtime_nanos << "," << r.verdict_or_hash << ","
       << (r.oracle_checked ? "true" : "false") << "\n";
  }
  return os.str();
}

}  // namespace smatch
