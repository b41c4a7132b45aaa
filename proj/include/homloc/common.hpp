#pragma once

#include <cstddef>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace homloc {

// Absolute tolerance for every "<=" on path-length sums (ball thresholds,
// bound checks).
inline constexpr double kTolerance = 1e-9;

// Malformed input: bad ids, dimension mismatches, parse failures.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An exhaustive oracle or enumeration would exceed its configured cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The query class is trivial (null-homologous) where a nontrivial class is required,
// or a subcomplex does not carry the requested class.
class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A mathematical invariant failed at runtime. Always a bug.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void check_invariant(bool ok, const char* what) {
  if (!ok) throw InvariantViolation(what);
}

struct Limits {
  // Exhaustive class enumeration is allowed while n_{d+1} stays at or below this.
  std::size_t max_enum_bits = 20;
  // Optimal-basis construction enumerates 2^beta - 1 classes; this bounds that count.
  std::size_t max_classes = 4095;
  // Worker threads for per-center and per-trial parallel maps.
  std::size_t jobs = 1;

  // HOMLOC_MAX_ENUM overrides max_enum_bits when set to a valid integer.
  static Limits from_env() {
    Limits l;
    if (const char* v = std::getenv("HOMLOC_MAX_ENUM")) {
      try {
        l.max_enum_bits = static_cast<std::size_t>(std::stoul(v));
      } catch (const std::exception&) {
        throw InputError(std::string("HOMLOC_MAX_ENUM is not an integer: ") + v);
      }
    }
    return l;
  }
};

}  // namespace homloc
