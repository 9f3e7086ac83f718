#pragma once

// JSON instance and matching files.
//
//   {"model": "attribute" | "one_sided" | "list" | "single_peaked" | "geometric" | "explicit",
//    "n": ..., "d": ..., <model arrays>, "provenance": "..."}
//   {"pairs": [w_0, ..., w_{n-1}]}
//
// Doubles are written with a round-trip representation, so parsing a
// written file reproduces every value bit for bit.

#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "smatch/error.hpp"
#include "smatch/prefs.hpp"
#include "smatch/reductions.hpp"

namespace smatch {

using Json = nlohmann::ordered_json;

namespace detail {

inline Json matrix_json(const Matrix& m) { return m.to_rows(); }

template <class T>
T get_field(const Json& j, const char* key) {
  if (!j.contains(key)) throw Error(Errc::parse_error, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, std::string("field '") + key + "': " + e.what());
  }
}

inline Matrix get_matrix(const Json& j, const char* key, std::size_t n, std::size_t d) {
  auto rows = get_field<std::vector<std::vector<double>>>(j, key);
  require(rows.size() == n, Errc::dimension_mismatch,
          std::string(key) + " has " + std::to_string(rows.size()) + " rows, n = " + std::to_string(n));
  for (const auto& r : rows) {
    require(r.size() == d, Errc::dimension_mismatch,
            std::string(key) + " has a row of length " + std::to_string(r.size()) + ", d = " +
                std::to_string(d));
  }
  return n == 0 ? Matrix(0, d) : Matrix::from_rows(rows);
}

template <class T>
std::vector<T> get_vector(const Json& j, const char* key, std::size_t n) {
  auto v = get_field<std::vector<T>>(j, key);
  require(v.size() == n, Errc::dimension_mismatch,
          std::string(key) + " has " + std::to_string(v.size()) + " entries, expected " +
              std::to_string(n));
  return v;
}

}  // namespace detail

inline Json to_json(const AttributeMarket& am) {
  Json j;
  j["model"] = "attribute";
  j["n"] = am.n();
  j["d"] = am.d();
  j["men_attrs"] = detail::matrix_json(am.men_attrs());
  j["men_weights"] = detail::matrix_json(am.men_weights());
  j["women_attrs"] = detail::matrix_json(am.women_attrs());
  j["women_weights"] = detail::matrix_json(am.women_weights());
  return j;
}

inline Json to_json(const OneSidedMarket& osm) {
  Json j;
  j["model"] = "one_sided";
  j["n"] = osm.n();
  j["d"] = osm.d();
  j["women_attrs"] = detail::matrix_json(osm.women_attrs());
  j["men_weights"] = detail::matrix_json(osm.men_weights());
  j["men_attr"] = osm.men_attr();
  j["women_sign"] = osm.women_sign();
  return j;
}

inline Json to_json(const ListMarket& lm) {
  Json j;
  j["model"] = "list";
  j["n"] = lm.n();
  j["d"] = lm.d();
  j["women_orders"] = lm.women_orders();
  j["men_orders"] = lm.men_orders();
  j["men_choice"] = lm.men_choice();
  j["women_choice"] = lm.women_choice();
  return j;
}

inline Json to_json(const SinglePeakedMarket& spm) {
  Json j;
  j["model"] = "single_peaked";
  j["n"] = spm.n();
  j["d"] = 1;
  j["women_pos"] = spm.women_pos();
  j["men_pos"] = spm.men_pos();
  j["men_ideal"] = spm.men_ideal();
  j["women_ideal"] = spm.women_ideal();
  j["relation"] = spm.relation() == PeakRelation::distance ? "distance" : "custom";
  if (spm.relation() == PeakRelation::custom) {
    j["men_rank"] = spm.custom_ranks(Side::men);
    j["women_rank"] = spm.custom_ranks(Side::women);
  }
  return j;
}

inline Json to_json(const GeometricMarket& gm) {
  Json j;
  j["model"] = "geometric";
  j["n"] = gm.n();
  j["d"] = gm.d();
  j["men_loc"] = detail::matrix_json(gm.men_loc());
  j["men_ideal"] = detail::matrix_json(gm.men_ideal());
  j["women_loc"] = detail::matrix_json(gm.women_loc());
  j["women_ideal"] = detail::matrix_json(gm.women_ideal());
  return j;
}

inline Json to_json(const ExplicitMarket& em) {
  Json j;
  j["model"] = "explicit";
  j["n"] = em.n();
  j["d"] = 0;
  j["men_rank"] = em.ranks(Side::men);
  j["women_rank"] = em.ranks(Side::women);
  return j;
}

inline Json to_json(const Market& market) {
  Json j = std::visit([](const auto& m) { return to_json(m); }, market);
  if (!provenance(market).empty()) j["provenance"] = provenance(market);
  return j;
}

inline Market market_from_json(const Json& j) {
  require(j.is_object(), Errc::parse_error, "instance must be a JSON object");
  const auto model = detail::get_field<std::string>(j, "model");
  const auto n = detail::get_field<std::size_t>(j, "n");
  const std::string prov = j.contains("provenance") ? detail::get_field<std::string>(j, "provenance")
                                                    : std::string();
  auto dim = [&] { return detail::get_field<std::size_t>(j, "d"); };
  using detail::get_matrix;
  using detail::get_vector;
  if (model == "attribute") {
    const auto d = dim();
    return AttributeMarket(get_matrix(j, "men_attrs", n, d), get_matrix(j, "men_weights", n, d),
                           get_matrix(j, "women_attrs", n, d), get_matrix(j, "women_weights", n, d),
                           prov);
  }
  if (model == "one_sided") {
    const auto d = dim();
    return OneSidedMarket(get_matrix(j, "women_attrs", n, d), get_matrix(j, "men_weights", n, d),
                          get_vector<double>(j, "men_attr", n), get_vector<int>(j, "women_sign", n),
                          prov);
  }
  if (model == "list") {
    const auto d = dim();
    return ListMarket(get_vector<ListMarket::Order>(j, "women_orders", d),
                      get_vector<ListMarket::Order>(j, "men_orders", d),
                      get_vector<std::size_t>(j, "men_choice", n),
                      get_vector<std::size_t>(j, "women_choice", n), prov);
  }
  if (model == "single_peaked") {
    const std::string rel =
        j.contains("relation") ? detail::get_field<std::string>(j, "relation") : "distance";
    require(rel == "distance" || rel == "custom", Errc::parse_error,
            "relation must be 'distance' or 'custom'");
    if (rel == "distance") {
      return SinglePeakedMarket(get_vector<double>(j, "women_pos", n),
                                get_vector<double>(j, "men_pos", n),
                                get_vector<double>(j, "men_ideal", n),
                                get_vector<double>(j, "women_ideal", n), prov);
    }
    return SinglePeakedMarket(
        get_vector<double>(j, "women_pos", n), get_vector<double>(j, "men_pos", n),
        get_vector<double>(j, "men_ideal", n), get_vector<double>(j, "women_ideal", n),
        PeakRelation::custom, get_vector<std::vector<std::size_t>>(j, "men_rank", n),
        get_vector<std::vector<std::size_t>>(j, "women_rank", n), prov);
  }
  if (model == "geometric") {
    const auto d = dim();
    return GeometricMarket(get_matrix(j, "men_loc", n, d), get_matrix(j, "men_ideal", n, d),
                           get_matrix(j, "women_loc", n, d), get_matrix(j, "women_ideal", n, d),
                           prov);
  }
  if (model == "explicit") {
    return ExplicitMarket(get_vector<std::vector<std::size_t>>(j, "men_rank", n),
                          get_vector<std::vector<std::size_t>>(j, "women_rank", n), prov);
  }
  throw Error(Errc::parse_error, "unknown model '" + model + "'");
}

inline Json to_json(const Matching& mu) {
  Json j;
  j["pairs"] = mu.pairs;
  return j;
}

inline Matching matching_from_json(const Json& j) {
  require(j.is_object(), Errc::parse_error, "matching must be a JSON object");
  return Matching{detail::get_field<std::vector<std::size_t>>(j, "pairs")};
}

/// Instance JSON plus a "reduction" object recording the generator inputs,
/// the oracle's answer and the designated matching or pair.
inline Json to_json(const ReductionInstance& inst) {
  Json j = to_json(inst.market);
  Json r;
  r["family"] = inst.params.family;
  r["U"] = inst.params.U;
  r["V"] = inst.params.V;
  if (inst.params.l > 0) r["l"] = inst.params.l;
  r["oracle_answer"] = inst.oracle_answer;
  r["oracle_value"] = inst.oracle.value;
  r["oracle_pair"] = {inst.oracle.u, inst.oracle.v};
  if (const auto* mu = std::get_if<Matching>(&inst.designated)) r["designated_matching"] = mu->pairs;
  if (const auto* p = std::get_if<DesignatedPair>(&inst.designated)) {
    r["designated_pair"] = {p->man, p->woman};
  }
  j["reduction"] = r;
  return j;
}

inline Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, what + ": " + e.what());
  }
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), Errc::parse_error, "cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), Errc::parse_error, "cannot write '" + path + "'");
  out << text;
}

inline std::string dump(const Json& j) { return j.dump() + "\n"; }

inline Market read_market(const std::string& path) {
  return market_from_json(parse_json(read_text(path), path));
}

inline Matching read_matching(const std::string& path) {
  return matching_from_json(parse_json(read_text(path), path));
}

}  // namespace smatch
