#pragma once
// Exact rational scalars and a deterministic random source.

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace pdiff {

using Q = mpq_class;

inline Q make_q(long num, long den = 1) {
  Q r(num, den);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Q& q) { return q.get_str(); }

// Accepts "p", "p/q" and plain decimal integers with an optional sign.
inline Q parse_q(const std::string& s) {
  Q r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("not a rational: '" + s + "'");
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: '" + s + "'");
  r.canonicalize();
  return r;
}

inline Q factorial_q(int n) {
  mpz_class f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return Q(f);
}

// Every randomized routine takes one of these so results depend only on the seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(eng_);
  }
  // A random rational with numerator in [-box, box] and small positive denominator.
  Q rational(std::int64_t box = 1000000, std::int64_t den_box = 97) {
    Q r(mpz_class(std::to_string(uniform(-box, box))), mpz_class(std::to_string(uniform(1, den_box))));
    r.canonicalize();
    return r;
  }
  Q nonzero_rational(std::int64_t box = 50, std::int64_t den_box = 7) {
    for (;;) {
      Q r = rational(box, den_box);
      if (r != 0) return r;
    }
  }
  std::uint64_t next() { return eng_(); }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace pdiff
