#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace walpert {

// Exact rational scalar used for measure data, grid endpoints and the
// exact-arithmetic moment paths.
using Rat = mpq_class;

inline double to_double(const Rat& q) { return q.get_d(); }

inline Rat rat_pow(const Rat& base, unsigned e) {
  Rat r(1);
  Rat b = base;
  unsigned n = e;
  while (n) {
    if (n & 1u) r *= b;
    b *= b;
    n >>= 1u;
  }
  return r;
}

// Bit size of the larger of numerator and denominator; the budget check for
// the exact-mode fall-through.
inline std::size_t rat_bits(const Rat& q) {
  std::size_t nb = mpz_sizeinbase(q.get_num_mpz_t(), 2);
  std::size_t db = mpz_sizeinbase(q.get_den_mpz_t(), 2);
  return nb > db ? nb : db;
}

inline Rat rat_pow2(int e) {
  mpz_class p = mpz_class(1) << (e >= 0 ? e : -e);
  return e >= 0 ? Rat(p) : Rat(1, p);
}

// Accepts "p/q", integers, and plain decimal strings ("-0.125", "3e-2").
Rat rat_from_string(const std::string& s);

struct ExactOverflow : std::runtime_error {
  explicit ExactOverflow(std::size_t bits)
      : std::runtime_error("exact rational exceeded bit budget (" +
                           std::to_string(bits) + " bits)") {}
};

}  // namespace walpert
