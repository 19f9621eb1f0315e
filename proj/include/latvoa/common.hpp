// Shared scalar types, error taxonomy and content hashing.
#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace latvoa {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

inline constexpr const char* kCodeVersion = "latvoa 0.1.0";
// Bumping this invalidates every cache entry; it pins the canonical mode
// order, the cocycle (-1)^{m.n1} and the creation-modes-positive-powers
// expansion the matrices depend on.
inline constexpr const char* kConventionVersion = "conv-1";

// Bad user input: malformed files, side/rank mismatches, violated preconditions.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Valid input outside the supported range (e.g. double description above rank 4).
struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A mathematical consistency check failed (nilpotency, pipeline disagreement).
struct MathError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotGorensteinError : InputError {
  using InputError::InputError;
};

struct NotReflexiveError : InputError {
  using InputError::InputError;
};

// Regular-sequence solve failed: the chosen f (or g) is not generic.
struct GenericityError : MathError {
  using MathError::MathError;
};

std::string rational_to_string(const Rational& r);
Rational parse_rational(const std::string& s);  // "p" or "p/q", throws InputError

// FNV-1a 64-bit. Stable across runs; used for problem hashes and cache keys.
class Fnv64 {
 public:
  void feed_bytes(const void* data, std::size_t n);
  void feed(const std::string& s);
  void feed(int64_t v);
  void feed(uint64_t v);
  std::string hex() const;

 private:
  uint64_t h_ = 1469598103934665603ull;
};

}  // namespace latvoa
