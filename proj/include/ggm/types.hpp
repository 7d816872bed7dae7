#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace ggm {

/// Number of i.i.d. samples (rows of a dataset).
using SampleCount = std::int64_t;

/// Raised when a numerical routine cannot proceed (e.g. a covariance that is
/// not positive definite).
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for inputs that are well formed but have no supported evaluation.
class Unsupported : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Unordered node pair, stored with first < second. Nodes are 0-indexed.
struct NodePair {
  int first = 0;
  int second = 0;

  NodePair() = default;
  NodePair(int a, int b) : first(a < b ? a : b), second(a < b ? b : a) {}

  bool contains(int v) const { return first == v || second == v; }
  auto operator<=>(const NodePair&) const = default;
};

/// How the fusion center interprets received columns.
enum class Mode { continuous, quantized };

inline std::string to_string(Mode m) {
  return m == Mode::continuous ? "continuous" : "quantized";
}

inline Mode parse_mode(const std::string& s) {
  if (s == "continuous") return Mode::continuous;
  if (s == "quantized") return Mode::quantized;
  throw std::invalid_argument("unknown mode '" + s + "'");
}

}  // namespace ggm
