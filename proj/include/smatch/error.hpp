#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace smatch {

enum class Errc {
  ordinal_model,
  index_out_of_range,
  dimension_mismatch,
  already_deleted,
  universe_violation,
  malformed_matching,
  non_boolean_entry,
  too_large,
  invalid_threshold,
  unknown_fixture,
  incompatible_algorithm,
  invalid_market,
  parse_error,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::ordinal_model: return "OrdinalModel";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::already_deleted: return "AlreadyDeleted";
    case Errc::universe_violation: return "UniverseViolation";
    case Errc::malformed_matching: return "MalformedMatching";
    case Errc::non_boolean_entry: return "NonBooleanEntry";
    case Errc::too_large: return "TooLarge";
    case Errc::invalid_threshold: return "InvalidThreshold";
    case Errc::unknown_fixture: return "UnknownFixture";
    case Errc::incompatible_algorithm: return "IncompatibleAlgorithm";
    case Errc::invalid_market: return "InvalidMarket";
    case Errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline void require(bool condition, Errc code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

namespace detail {

inline void check_index(std::size_t i, std::size_t n, const char* what) {
  if (i >= n) {
    throw Error(Errc::index_out_of_range,
                std::string(what) + " index " + std::to_string(i) + " not in [0, " +
                    std::to_string(n) + ")");
  }
}

}  // namespace detail

}  // namespace smatch
