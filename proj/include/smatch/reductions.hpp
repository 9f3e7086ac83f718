#pragma once

// Markets built from two sets of boolean vectors U and V whose stability
// questions encode maximum inner product (attribute families) or minimum
// Hamming distance (geometric families). Each instance carries the answer of
// the brute-force vector oracle, so the market-side algorithms can be
// checked against it.
//
// Families and what the designated object certifies:
//   finding-hardness     every stable matching contains a pair (m_u, w_v) of maximum <u, v>
//   verify-hardness      designated matching stable  <=>  max <u, v> < l
//   stable-pair          (m*, w*) in all stable matchings  <=>  max <u, v> >= l
//   stable-pair-co       (m*, w*) in all stable matchings  <=>  max <u, v> < l
//   geo-finding          every stable matching contains a pair of minimum Hamming distance
//   geo-verify           designated matching stable  <=>  min Hamming >= l
//   geo-stable-pair      (m*, w*) in all stable matchings  <=>  min Hamming < l
//   geo-stable-pair-co   (m*, w*) in all stable matchings  <=>  min Hamming >= l
// For the stable-pair families "in all" and "in some" coincide.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "smatch/error.hpp"
#include "smatch/pairs.hpp"
#include "smatch/prefs.hpp"

namespace smatch {

struct DesignatedPair {
  std::size_t man = 0;
  std::size_t woman = 0;
  friend bool operator==(const DesignatedPair&, const DesignatedPair&) = default;
};

using Designated = std::variant<std::monostate, Matching, DesignatedPair>;

struct ReductionParams {
  std::string family;
  BitVectors U, V;
  std::int64_t l = 0;  // unused by the finding families
};

struct ReductionInstance {
  Market market = ExplicitMarket({{0}}, {{0}});  // replaced by every generator
  Designated designated;
  /// Threshold families: the oracle predicate (max >= l, or min Hamming < l).
  /// Finding families: always true; the certified quantity is oracle.value.
  bool oracle_answer = false;
  ExtremePair oracle;  // extreme value and its lexicographically first argpair
  ReductionParams params;
};

inline const std::vector<std::string>& reduction_families() {
  static const std::vector<std::string> names{
      "finding-hardness", "verify-hardness",   "stable-pair",     "stable-pair-co",
      "geo-finding",      "geo-verify",        "geo-stable-pair", "geo-stable-pair-co"};
  return names;
}

namespace detail {

inline void check_threshold(std::int64_t l) {
  require(l >= 1, Errc::invalid_threshold, "threshold l must be >= 1, got " + std::to_string(l));
}

inline void check_equal_sizes(const BitVectors& U, const BitVectors& V) {
  require(U.size() == V.size(), Errc::dimension_mismatch, "U and V must have the same size");
}

// Row builder: concatenation of blocks.
class RowBuilder {
 public:
  RowBuilder& bits(const BitVector& x, std::size_t times = 1) {
    for (std::size_t t = 0; t < times; ++t) {
      for (auto b : x) row_.push_back(b);
    }
    return *this;
  }
  RowBuilder& complement(const BitVector& x) {
    for (auto b : x) row_.push_back(1 - b);
    return *this;
  }
  RowBuilder& fill(double v, std::size_t count) {
    row_.insert(row_.end(), count, v);
    return *this;
  }
  RowBuilder& pattern(const char* s) {
    for (; *s; ++s) row_.push_back(*s == '1' ? 1.0 : 0.0);
    return *this;
  }
  std::vector<double> take() { return std::move(row_); }

 private:
  std::vector<double> row_;
};

inline std::string params_text(const ReductionParams& p) {
  auto set = [](const BitVectors& s) {
    std::string out = "[";
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i) out += ",";
      for (auto b : s[i]) out += static_cast<char>('0' + b);
    }
    return out + "]";
  };
  std::string out = p.family + "(U=" + set(p.U) + ",V=" + set(p.V);
  if (p.l > 0) out += ",l=" + std::to_string(p.l);
  return out + ")";
}

// Same vectors serve as attributes and weights (attribute families) or as
// location and ideal (narcissistic geometric families).
inline Market symmetric_attribute(const std::vector<std::vector<double>>& men,
                                  const std::vector<std::vector<double>>& women,
                                  std::string provenance) {
  Matrix m = Matrix::from_rows(men), w = Matrix::from_rows(women);
  return AttributeMarket(m, m, w, w, std::move(provenance));
}

inline Market narcissistic(const std::vector<std::vector<double>>& men,
                           const std::vector<std::vector<double>>& women, std::string provenance) {
  Matrix m = Matrix::from_rows(men), w = Matrix::from_rows(women);
  return GeometricMarket(m, m, w, w, std::move(provenance));
}

}  // namespace detail

inline ReductionInstance gen_finding_hardness(const BitVectors& U, const BitVectors& V) {
  detail::check_vector_sets(U, V);
  detail::check_equal_sizes(U, V);
  ReductionInstance inst;
  inst.params = {"finding-hardness", U, V, 0};
  inst.oracle = max_inner_product_brute(U, V);
  inst.oracle_answer = true;
  std::vector<std::vector<double>> men, women;
  for (const auto& u : U) men.push_back(detail::RowBuilder().bits(u).take());
  for (const auto& v : V) women.push_back(detail::RowBuilder().bits(v).take());
  inst.market = detail::symmetric_attribute(men, women, detail::params_text(inst.params));
  return inst;
}

/// Men: m_u for u in U, then dummies m'_v for v in V. Women: dummies w'_u,
/// then w_v. The designated matching is the identity (m_u, w'_u), (m'_v, w_v).
inline ReductionInstance gen_verify_hardness(const BitVectors& U, const BitVectors& V,
                                             std::int64_t l) {
  detail::check_threshold(l);
  const std::size_t d = detail::check_vector_sets(U, V);
  detail::check_equal_sizes(U, V);
  const auto L = static_cast<std::size_t>(l - 1);
  const BitVector zero(d, 0);
  ReductionInstance inst;
  inst.params = {"verify-hardness", U, V, l};
  inst.oracle = max_inner_product_brute(U, V);
  inst.oracle_answer = inst.oracle.value >= l;
  std::vector<std::vector<double>> men, women;
  for (const auto& u : U) men.push_back(detail::RowBuilder().bits(u).fill(1, L).fill(0, L).take());
  for (std::size_t i = 0; i < V.size(); ++i) {
    men.push_back(detail::RowBuilder().bits(zero).fill(0, L).fill(1, L).take());
  }
  for (std::size_t i = 0; i < U.size(); ++i) {
    women.push_back(detail::RowBuilder().bits(zero).fill(1, L).fill(0, L).take());
  }
  for (const auto& v : V) women.push_back(detail::RowBuilder().bits(v).fill(0, L).fill(1, L).take());
  inst.market = detail::symmetric_attribute(men, women, detail::params_text(inst.params));
  inst.designated = Matching::identity(men.size());
  return inst;
}

/// Men: m_u (|U|), dummies m_i, then m*. Women: w_v (|V|), dummies w_j, then
/// w*. The standard variant has |U| - 1 dummies per side, the co-variant |U|.
inline ReductionInstance gen_stable_pair(const BitVectors& U, const BitVectors& V, std::int64_t l,
                                         bool co = false) {
  detail::check_threshold(l);
  const std::size_t d = detail::check_vector_sets(U, V);
  detail::check_equal_sizes(U, V);
  const std::size_t n = U.size();
  const std::size_t dummies = co ? n : n - 1;
  const std::size_t L = 7 * static_cast<std::size_t>(l - 1);
  ReductionInstance inst;
  inst.params = {co ? "stable-pair-co" : "stable-pair", U, V, l};
  inst.oracle = max_inner_product_brute(U, V);
  inst.oracle_answer = inst.oracle.value >= l;
  using detail::RowBuilder;
  std::vector<std::vector<double>> men, women;
  for (const auto& u : U) {
    men.push_back(RowBuilder().bits(u, 7).fill(1, L).fill(0, L).pattern("111111000000000000").take());
  }
  for (std::size_t i = 0; i < dummies; ++i) {
    men.push_back(RowBuilder().fill(0, 7 * d).fill(1, L).fill(1, L).pattern("000000111111000000").take());
  }
  men.push_back(RowBuilder().fill(0, 7 * d).fill(1, L).fill(1, L).pattern("000000000000111111").take());
  for (const auto& v : V) {
    women.push_back(RowBuilder().bits(v, 7).fill(0, L).fill(1, L).pattern("000000111111100000").take());
  }
  for (std::size_t j = 0; j < dummies; ++j) {
    women.push_back(RowBuilder().fill(0, 7 * d).fill(1, L).fill(0, L)
                        .pattern(co ? "111111111000000000" : "111111111110000000").take());
  }
  women.push_back(RowBuilder().fill(0, 7 * d).fill(1, L).fill(0, L).pattern("111000111100110000").take());
  inst.market = detail::symmetric_attribute(men, women, detail::params_text(inst.params));
  inst.designated = DesignatedPair{men.size() - 1, women.size() - 1};
  return inst;
}

inline ReductionInstance gen_stable_pair_co(const BitVectors& U, const BitVectors& V,
                                            std::int64_t l) {
  return gen_stable_pair(U, V, l, true);
}

inline ReductionInstance gen_geo_finding(const BitVectors& U, const BitVectors& V) {
  detail::check_vector_sets(U, V);
  detail::check_equal_sizes(U, V);
  ReductionInstance inst;
  inst.params = {"geo-finding", U, V, 0};
  inst.oracle = min_hamming_brute(U, V);
  inst.oracle_answer = true;
  std::vector<std::vector<double>> men, women;
  for (const auto& u : U) men.push_back(detail::RowBuilder().bits(u).take());
  for (const auto& v : V) women.push_back(detail::RowBuilder().bits(v).take());
  inst.market = detail::narcissistic(men, women, detail::params_text(inst.params));
  return inst;
}

/// Narcissistic: m_u at u.0^l, dummy w'_u at u.1^l, w_v at v.0^l, dummy m'_v
/// at v.1^l. Orders and designated matching as in gen_verify_hardness.
inline ReductionInstance gen_geo_verify(const BitVectors& U, const BitVectors& V, std::int64_t l) {
  detail::check_threshold(l);
  detail::check_vector_sets(U, V);
  detail::check_equal_sizes(U, V);
  const auto L = static_cast<std::size_t>(l);
  ReductionInstance inst;
  inst.params = {"geo-verify", U, V, l};
  inst.oracle = min_hamming_brute(U, V);
  inst.oracle_answer = inst.oracle.value < l;
  std::vector<std::vector<double>> men, women;
  for (const auto& u : U) men.push_back(detail::RowBuilder().bits(u).fill(0, L).take());
  for (const auto& v : V) men.push_back(detail::RowBuilder().bits(v).fill(1, L).take());
  for (const auto& u : U) women.push_back(detail::RowBuilder().bits(u).fill(1, L).take());
  for (const auto& v : V) women.push_back(detail::RowBuilder().bits(v).fill(0, L).take());
  inst.market = detail::narcissistic(men, women, detail::params_text(inst.params));
  inst.designated = Matching::identity(men.size());
  return inst;
}

/// Pads U and V so that "Hamming distance < l" becomes "distance <= D/2"
/// for the padded dimension D: either b shared zero coordinates (when
/// 2l - 2 >= d) or a coordinates where u has 1 and v has 0.
inline std::pair<BitVectors, BitVectors> pad_to_half_threshold(const BitVectors& U,
                                                               const BitVectors& V,
                                                               std::int64_t l) {
  const auto d = static_cast<std::int64_t>(detail::check_vector_sets(U, V));
  BitVectors pu = U, pv = V;
  if (2 * l - 2 >= d) {
    const auto b = static_cast<std::size_t>(2 * l - 2 - d);
    for (auto& u : pu) u.insert(u.end(), b, 0);
    for (auto& v : pv) v.insert(v.end(), b, 0);
  } else {
    const auto a = static_cast<std::size_t>(d + 2 - 2 * l);
    for (auto& u : pu) u.insert(u.end(), a, 1);
    for (auto& v : pv) v.insert(v.end(), a, 0);
  }
  return {pu, pv};
}

/// Narcissistic realisation of the stable-pair scheme over the padded
/// vectors; participant order as in gen_stable_pair.
inline ReductionInstance gen_geo_stable_pair(const BitVectors& U, const BitVectors& V,
                                             std::int64_t l, bool co = false) {
  detail::check_threshold(l);
  detail::check_vector_sets(U, V);
  detail::check_equal_sizes(U, V);
  const auto [pu, pv] = pad_to_half_threshold(U, V, l);
  const std::size_t D = pu.front().size();
  const std::size_t n = U.size();
  const std::size_t dummies = co ? n : n - 1;
  ReductionInstance inst;
  inst.params = {co ? "geo-stable-pair-co" : "geo-stable-pair", U, V, l};
  inst.oracle = min_hamming_brute(U, V);
  inst.oracle_answer = inst.oracle.value < l;
  using detail::RowBuilder;
  auto quad = [](RowBuilder& r, const BitVector& x) {
    for (int t = 0; t < 3; ++t) r.bits(x).complement(x).bits(x).complement(x);
  };
  auto half_block = [&](RowBuilder& r) {
    for (int t = 0; t < 3; ++t) r.fill(0, 2 * D).fill(1, 2 * D);
  };
  const char* ext = co ? "00" : "";
  std::vector<std::vector<double>> men, women;
  for (const auto& u : pu) {
    RowBuilder r;
    quad(r, u);
    men.push_back(r.pattern("000000000").pattern(ext).take());
  }
  for (std::size_t i = 0; i < dummies; ++i) {
    men.push_back(RowBuilder().fill(0, 12 * D).pattern("100000000").pattern(ext).take());
  }
  men.push_back(RowBuilder().fill(0, 12 * D).pattern("001111111").pattern(ext).take());
  for (const auto& v : pv) {
    RowBuilder r;
    quad(r, v);
    women.push_back(r.pattern("000000000").pattern(ext).take());
  }
  for (std::size_t j = 0; j < dummies; ++j) {
    RowBuilder r;
    half_block(r);
    women.push_back(r.pattern("010000000").pattern(co ? "11" : "").take());
  }
  {
    RowBuilder r;
    half_block(r);
    women.push_back(r.pattern("101110000").pattern(ext).take());
  }
  inst.market = detail::narcissistic(men, women, detail::params_text(inst.params));
  inst.designated = DesignatedPair{men.size() - 1, women.size() - 1};
  return inst;
}

inline ReductionInstance gen_geo_stable_pair_co(const BitVectors& U, const BitVectors& V,
                                                std::int64_t l) {
  return gen_geo_stable_pair(U, V, l, true);
}

/// Dispatch by family name.
inline ReductionInstance gen_reduction(const std::string& family, const BitVectors& U,
                                       const BitVectors& V, std::int64_t l) {
  if (family == "finding-hardness") return gen_finding_hardness(U, V);
  if (family == "verify-hardness") return gen_verify_hardness(U, V, l);
  if (family == "stable-pair") return gen_stable_pair(U, V, l);
  if (family == "stable-pair-co") return gen_stable_pair_co(U, V, l);
  if (family == "geo-finding") return gen_geo_finding(U, V);
  if (family == "geo-verify") return gen_geo_verify(U, V, l);
  if (family == "geo-stable-pair") return gen_geo_stable_pair(U, V, l);
  if (family == "geo-stable-pair-co") return gen_geo_stable_pair_co(U, V, l);
  throw Error(Errc::invalid_market, "unknown reduction family '" + family + "'");
}

// ---------------------------------------------------------------------------
// Construction self-checks

namespace detail {

// Preference tier of a candidate in the printed scheme: lower is better;
// equal tiers must be exact ties.
using Tier = std::pair<int, std::int64_t>;

template <class M>
void compare_with_scheme(const M& market, Side side, std::size_t chooser, const char* who,
                         const std::function<Tier(std::size_t)>& tier,
                         std::vector<std::string>& out) {
  const std::size_t n = market.n();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      const bool expect = tier(a) < tier(b);
      if (prefers(market, side, chooser, a, b) != expect) {
        out.push_back(std::string(who) + " " + std::to_string(chooser) + ": candidates " +
                      std::to_string(a) + " vs " + std::to_string(b) + " expected " +
                      (expect ? "strict preference" : "no strict preference"));
      }
    }
  }
}

}  // namespace detail

/// Checks a stable-pair instance (attribute or geometric, either variant)
/// against the preference scheme it is meant to realise:
///   m_u: {w_v : good} > {w_j} > w* > {w_v : bad}      (w_v by closeness)
///   m_i: {w_v} > {w_j} > w*          (co-variant: {w_v} > w* > {w_j})
///   m*:  w* > {w_v} > {w_j}
///   w_v: {m_u : good} > {m_i} > m* > {m_u : bad}
///   w_j: {m_u} > {m_i} > m*
///   w*:  {m_i} > {m_u} > m*
/// "good" means <u, v> >= l (resp. Hamming distance < l) and closeness is
/// the inner product (resp. negated distance). Returns one line per
/// disagreement; an empty result means the construction is faithful.
inline std::vector<std::string> stable_pair_scheme_discrepancies(const ReductionInstance& inst) {
  const auto& p = inst.params;
  const bool geo = p.family.rfind("geo-", 0) == 0;
  const bool co = p.family.size() > 3 && p.family.substr(p.family.size() - 3) == "-co";
  require(p.family.find("stable-pair") != std::string::npos, Errc::invalid_market,
          "not a stable-pair instance");
  const std::size_t n = p.U.size();
  const std::size_t dummies = co ? n : n - 1;
  const std::size_t star = n + dummies;
  auto closeness = [&](std::size_t u, std::size_t v) -> std::int64_t {
    std::int64_t s = 0;
    for (std::size_t k = 0; k < p.U[u].size(); ++k) {
      s += geo ? -static_cast<std::int64_t>(p.U[u][k] != p.V[v][k]) : (p.U[u][k] & p.V[v][k]);
    }
    return s;
  };
  auto good = [&](std::int64_t c) { return geo ? -c < p.l : c >= p.l; };
  enum Kind { real, dummy, special };
  auto kind = [&](std::size_t i) { return i < n ? real : (i < star ? dummy : special); };

  std::vector<std::string> out;
  std::visit(
      [&](const auto& market) {
        using M = std::decay_t<decltype(market)>;
        if constexpr (MarketModel<M>) {
          for (std::size_t m = 0; m <= star; ++m) {
            std::function<detail::Tier(std::size_t)> tier;
            if (kind(m) == real) {
              tier = [&, m](std::size_t w) -> detail::Tier {
                if (kind(w) == dummy) return {1, 0};
                if (kind(w) == special) return {2, 0};
                const auto c = closeness(m, w);
                return {good(c) ? 0 : 3, -c};
              };
            } else if (kind(m) == dummy) {
              tier = [&](std::size_t w) -> detail::Tier {
                if (kind(w) == real) return {0, 0};
                if (kind(w) == dummy) return {co ? 2 : 1, 0};
                return {co ? 1 : 2, 0};
              };
            } else {
              tier = [&](std::size_t w) -> detail::Tier {
                return {kind(w) == special ? 0 : (kind(w) == real ? 1 : 2), 0};
              };
            }
            detail::compare_with_scheme(market, Side::men, m, "man", tier, out);
          }
          for (std::size_t w = 0; w <= star; ++w) {
            std::function<detail::Tier(std::size_t)> tier;
            if (kind(w) == real) {
              tier = [&, w](std::size_t m) -> detail::Tier {
                if (kind(m) == dummy) return {1, 0};
                if (kind(m) == special) return {2, 0};
                const auto c = closeness(m, w);
                return {good(c) ? 0 : 3, -c};
              };
            } else if (kind(w) == dummy) {
              tier = [&](std::size_t m) -> detail::Tier {
                return {kind(m) == real ? 0 : (kind(m) == dummy ? 1 : 2), 0};
              };
            } else {
              tier = [&](std::size_t m) -> detail::Tier {
                return {kind(m) == dummy ? 0 : (kind(m) == real ? 1 : 2), 0};
              };
            }
            detail::compare_with_scheme(market, Side::women, w, "woman", tier, out);
          }
        }
      },
      inst.market);
  return out;
}

/// Verification families: every designated pair must have symmetric value
/// l - 1 (attribute) or distance l (geometric).
inline std::vector<std::string> verify_designated_discrepancies(const ReductionInstance& inst) {
  std::vector<std::string> out;
  const auto* mu = std::get_if<Matching>(&inst.designated);
  require(mu != nullptr, Errc::invalid_market, "instance has no designated matching");
  const bool geo = inst.params.family == "geo-verify";
  const double expect = geo ? -static_cast<double>(inst.params.l)
                            : static_cast<double>(inst.params.l - 1);
  for (std::size_t m = 0; m < mu->size(); ++m) {
    const std::size_t w = mu->pairs[m];
    const double vm = value(inst.market, Side::men, m, w);
    const double vw = value(inst.market, Side::women, w, m);
    if (vm != expect || vw != expect) {
      out.push_back("pair (" + std::to_string(m) + ", " + std::to_string(w) + ") has values " +
                    std::to_string(vm) + " / " + std::to_string(vw) + ", expected " +
                    std::to_string(expect));
    }
  }
  return out;
}

}  // namespace smatch
