#include "toric/exactmath.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>

namespace toric {
namespace {

// Factorials up to this bound are memoized; larger ones are built on top of
// the last memoized value.
constexpr Count kFactorialMemoLimit = 4096;

class FactorialMemo {
 public:
  Int get(Count n) {
    std::scoped_lock lock(mutex_);
    if (n < static_cast<Count>(table_.size())) return table_[n];
    const Count limit = std::min(n, kFactorialMemoLimit);
    while (static_cast<Count>(table_.size()) <= limit) {
      const Count k = static_cast<Count>(table_.size());
      table_.push_back(table_.back() * k);
    }
    if (n <= kFactorialMemoLimit) return table_[n];
    Int result = table_.back();
    for (Count k = kFactorialMemoLimit + 1; k <= n; ++k) result *= k;
    return result;
  }

 private:
  std::mutex mutex_;
  std::vector<Int> table_{Int(1)};
};

FactorialMemo& memo() {
  static FactorialMemo instance;
  return instance;
}

}  // namespace

Int factorial(Count n) {
  if (n < 0) throw ModelError("factorial of negative number " + std::to_string(n));
  return memo().get(n);
}

Int binomial(Count n, Count k) {
  if (k < 0 || n < 0 || k > n) return 0;
  Int r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

Rat pochhammer(const Rat& a, Count n) {
  if (n < 0) throw ModelError("pochhammer with negative length");
  Rat r(1);
  Rat factor = a;
  for (Count i = 0; i < n; ++i) {
    if (factor == 0) return Rat(0);
    r *= factor;
    factor += 1;
  }
  return r;
}

Int multinomial(std::span<const Count> counts) {
  Count total = 0;
  Int denom(1);
  for (Count c : counts) {
    if (c < 0) throw ModelError("multinomial with negative count");
    total += c;
    denom *= factorial(c);
  }
  return factorial(total) / denom;
}

Rat pow(const Rat& base, Count exponent) {
  if (exponent == 0) return Rat(1);
  if (base == 0) {
    if (exponent < 0) throw ModelError("zero raised to a negative power");
    return Rat(0);
  }
  const unsigned long e = static_cast<unsigned long>(exponent < 0 ? -exponent : exponent);
  Int num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  return exponent > 0 ? make_rat(num, den) : make_rat(den, num);
}

Rat parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) throw ModelError("empty rational literal");
  Rat r;
  if (r.set_str(s, 10) != 0) throw ModelError("invalid rational literal '" + std::string(text) + "'");
  if (r.get_den() == 0) throw ModelError("zero denominator in '" + std::string(text) + "'");
  r.canonicalize();
  return r;
}

std::string to_string(const Rat& value) {
  if (value.get_den() == 1) return value.get_num().get_str() + "/1";
  return value.get_str();
}

std::string to_string(const Int& value) { return value.get_str(); }

Int common_denominator(std::span<const Rat> values) {
  Int l(1);
  for (const Rat& v : values) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  }
  return l;
}

}  // namespace toric
