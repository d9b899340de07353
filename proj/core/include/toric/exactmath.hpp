#pragma once

// Exact integer/rational kernel shared by every other module.

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace toric {

using Int = mpz_class;
using Rat = mpq_class;

/// Count vectors (tables, margins, lattice nodes).
using Count = std::int64_t;
using CountVec = std::vector<Count>;
using RatVec = std::vector<Rat>;

/// Base class for all library errors. Subclasses map to CLI exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad dimensions, invalid model, unsupported family.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input whose fiber is empty or whose move is infeasible.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

Int factorial(Count n);
Int binomial(Count n, Count k);
Rat pochhammer(const Rat& a, Count n);
Int multinomial(std::span<const Count> counts);

/// Raises a rational to an integer power; negative exponents invert.
Rat pow(const Rat& base, Count exponent);

/// Rational from "p/q", "p" or a decimal integer literal.
Rat parse_rational(std::string_view text);
std::string to_string(const Rat& value);
std::string to_string(const Int& value);

/// Least common multiple of the denominators.
Int common_denominator(std::span<const Rat> values);

inline Rat make_rat(Int num, Int den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace toric
