#pragma once

// Random markets and matchings.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "smatch/error.hpp"
#include "smatch/pairs.hpp"
#include "smatch/prefs.hpp"
#include "smatch/random.hpp"

namespace smatch {

enum class Dist {
  boolean,         // {0, 1} with probability 1/2 each
  uniform,         // [0, 1)
  signed_uniform,  // [-1, 1)
};

inline Dist parse_dist(const std::string& s) {
  if (s == "bool" || s == "boolean") return Dist::boolean;
  if (s == "uniform") return Dist::uniform;
  if (s == "signed") return Dist::signed_uniform;
  throw Error(Errc::parse_error, "unknown distribution '" + s + "' (bool, uniform, signed)");
}

inline std::string to_string(Dist d) {
  switch (d) {
    case Dist::boolean: return "bool";
    case Dist::uniform: return "uniform";
    case Dist::signed_uniform: return "signed";
  }
  return "uniform";
}

inline double draw(Rng& rng, Dist dist) {
  switch (dist) {
    case Dist::boolean: return rng.coin() ? 1.0 : 0.0;
    case Dist::uniform: return rng.uniform();
    case Dist::signed_uniform: return rng.uniform(-1.0, 1.0);
  }
  return 0.0;
}

inline Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, Dist dist) {
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = draw(rng, dist);
  }
  return m;
}

inline std::vector<double> random_vector(Rng& rng, std::size_t n, Dist dist) {
  std::vector<double> v(n);
  for (auto& x : v) x = draw(rng, dist);
  return v;
}

inline AttributeMarket random_attribute(Rng& rng, std::size_t n, std::size_t d, Dist dist) {
  Matrix a = random_matrix(rng, n, d, dist);
  Matrix b = random_matrix(rng, n, d, dist);
  Matrix c = random_matrix(rng, n, d, dist);
  Matrix e = random_matrix(rng, n, d, dist);
  return AttributeMarket(std::move(a), std::move(b), std::move(c), std::move(e), "random");
}

inline OneSidedMarket random_one_sided(Rng& rng, std::size_t n, std::size_t d, Dist dist) {
  Matrix attrs = random_matrix(rng, n, d, dist);
  Matrix weights = random_matrix(rng, n, d, dist);
  std::vector<double> men_attr = random_vector(rng, n, dist);
  std::vector<int> sign(n);
  for (auto& s : sign) s = rng.coin() ? 1 : -1;
  return OneSidedMarket(std::move(attrs), std::move(weights), std::move(men_attr), std::move(sign),
                        "random");
}

inline ListMarket random_list(Rng& rng, std::size_t n, std::size_t d) {
  std::vector<ListMarket::Order> pis(d), sigmas(d);
  for (auto& p : pis) p = rng.permutation(n);
  for (auto& s : sigmas) s = rng.permutation(n);
  std::vector<std::size_t> mc(n), wc(n);
  for (auto& c : mc) c = rng.below(d);
  for (auto& c : wc) c = rng.below(d);
  return ListMarket(std::move(pis), std::move(sigmas), std::move(mc), std::move(wc), "random");
}

/// Sorted uniform positions (nudged apart in the unlikely case of equal
/// draws) and uniform ideals in [0, 1).
inline SinglePeakedMarket random_single_peaked(Rng& rng, std::size_t n) {
  auto positions = [&] {
    std::vector<double> p = random_vector(rng, n, Dist::uniform);
    std::sort(p.begin(), p.end());
    for (std::size_t i = 1; i < n; ++i) {
      if (p[i] <= p[i - 1]) p[i] = std::nextafter(p[i - 1], 2.0);
    }
    return p;
  };
  std::vector<double> wp = positions();
  std::vector<double> mp = positions();
  std::vector<double> mi = random_vector(rng, n, Dist::uniform);
  std::vector<double> wi = random_vector(rng, n, Dist::uniform);
  return SinglePeakedMarket(std::move(wp), std::move(mp), std::move(mi), std::move(wi), "random");
}

inline GeometricMarket random_geometric(Rng& rng, std::size_t n, std::size_t d, Dist dist) {
  Matrix a = random_matrix(rng, n, d, dist);
  Matrix b = random_matrix(rng, n, d, dist);
  Matrix c = random_matrix(rng, n, d, dist);
  Matrix e = random_matrix(rng, n, d, dist);
  return GeometricMarket(std::move(a), std::move(b), std::move(c), std::move(e), "random");
}

inline ExplicitMarket random_explicit(Rng& rng, std::size_t n) {
  std::vector<std::vector<std::size_t>> men(n), women(n);
  for (auto& r : men) r = rng.permutation(n);
  for (auto& r : women) r = rng.permutation(n);
  return ExplicitMarket(men, women, "random");
}

inline const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names{"attribute", "one_sided", "list",
                                              "single_peaked", "geometric", "explicit"};
  return names;
}

/// `d` is ignored by the single_peaked and explicit models.
inline Market random_market(const std::string& model, Rng& rng, std::size_t n, std::size_t d,
                            Dist dist) {
  require(n >= 1, Errc::invalid_market, "n must be >= 1");
  if (model == "attribute") return random_attribute(rng, n, d, dist);
  if (model == "one_sided") return random_one_sided(rng, n, d, dist);
  if (model == "list") return random_list(rng, n, d);
  if (model == "single_peaked") return random_single_peaked(rng, n);
  if (model == "geometric") return random_geometric(rng, n, d, dist);
  if (model == "explicit") return random_explicit(rng, n);
  throw Error(Errc::parse_error, "unknown model '" + model + "'");
}

inline Matching random_matching(Rng& rng, std::size_t n) { return Matching{rng.permutation(n)}; }

/// `count` vectors of dimension d, each bit set with probability `density`.
inline BitVectors random_bit_vectors(Rng& rng, std::size_t count, std::size_t d,
                                     double density = 0.5) {
  BitVectors out(count, BitVector(d, 0));
  for (auto& v : out) {
    for (auto& b : v) b = rng.uniform() < density ? 1 : 0;
  }
  return out;
}

}  // namespace smatch
