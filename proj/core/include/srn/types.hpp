#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace srn {

using Count = std::int64_t;
using State = std::vector<Count>;

// Base error for model construction and precondition violations.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a rate cannot be evaluated at a state (unbound symbol,
// division by zero, state outside a table's domain, negative value).
class EvalError : public Error {
 public:
  explicit EvalError(const std::string& what) : Error(what) {}
};

struct StateHash {
  std::size_t operator()(const State& s) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (Count v : s) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

template <typename V>
using StateMap = std::unordered_map<State, V, StateHash>;

inline bool nonnegative(std::span<const Count> x) {
  for (Count v : x) {
    if (v < 0) return false;
  }
  return true;
}

// Componentwise x >= y.
inline bool dominates(std::span<const Count> x, std::span<const Count> y) {
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < y[i]) return false;
  }
  return true;
}

inline State add(std::span<const Count> x, std::span<const Count> y) {
  State r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
  return r;
}

inline State sub(std::span<const Count> x, std::span<const Count> y) {
  State r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
  return r;
}

// Falling factorial product over species: prod_i x_i (x_i-1) ... (x_i-y_i+1).
// Zero when x does not dominate y.
inline double falling_factorial(std::span<const Count> x, std::span<const Count> y) {
  if (!dominates(x, y)) return 0.0;
  double p = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (Count k = 0; k < y[i]; ++k) p *= static_cast<double>(x[i] - k);
  }
  return p;
}

// Lexicographic order on count vectors; shorter vectors first on prefix ties.
inline bool lex_less(std::span<const Count> a, std::span<const Count> b) {
  std::size_t n = a.size() < b.size() ? a.size() : b.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return a.size() < b.size();
}

std::string to_string(std::span<const Count> x);

}  // namespace srn
