#pragma once

// Exact integer / modular arithmetic on 64-bit values with 128-bit
// intermediates.  Fits every modulus product used elsewhere (guarded).

#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "gl3/errors.hpp"

namespace gl3 {

using i64 = std::int64_t;
using i128 = __int128;

// Least nonnegative residue of a modulo m (m >= 1), for any sign of a.
inline i64 mod_floor(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

inline i64 mod_floor128(i128 a, i64 m) {
  i128 r = a % m;
  return static_cast<i64>(r < 0 ? r + m : r);
}

inline i64 mulmod(i64 a, i64 b, i64 m) { return mod_floor128(i128(a) * b, m); }
inline i64 addmod(i64 a, i64 b, i64 m) { return mod_floor128(i128(a) + b, m); }
inline i64 submod(i64 a, i64 b, i64 m) { return mod_floor128(i128(a) - b, m); }

i64 powmod(i64 base, i64 exp, i64 m);

// g = gcd(a,b) together with x, y such that a*x + b*y = g.
struct Egcd {
  i64 g, x, y;
};
Egcd egcd(i64 a, i64 b);

inline i64 gcd3(i64 a, i64 b, i64 c) { return std::gcd(std::gcd(a, b), c); }

inline i64 lcm_checked(i64 a, i64 b) {
  i128 l = i128(a) / std::gcd(a, b) * b;
  if (l > std::numeric_limits<i64>::max() / 4) throw Overflow("lcm overflow");
  return static_cast<i64>(l);
}

// Residue class a mod m with 0 <= value < modulus.
struct Residue {
  i64 value = 0;
  i64 modulus = 1;
  Residue() = default;
  Residue(i64 v, i64 m) : value(mod_floor(v, m)), modulus(m) {}
};

// Multiplicative inverse of a modulo m; throws NotCoprime.
// invmod(a, 1) == 0 by convention (the zero ring).
Residue invmod(i64 a, i64 m);

// q-adic order with order == Valuation::kInf for n == 0, so that
// min(v(0), v(n)) == v(n) without special-casing.
struct Valuation {
  i64 prime = 2;
  i64 order = 0;
  static constexpr i64 kInf = std::numeric_limits<i64>::max();
  bool is_infinite() const { return order == kInf; }
};
Valuation valuation(i64 n, i64 q);

bool is_prime(i64 n);

// Prime factorization (p, e) with p ascending.
std::vector<std::pair<i64, i64>> factorize(i64 n);

i64 euler_phi(i64 n);
int moebius(i64 n);

// Least primitive root modulo a prime p.
i64 primitive_root(i64 p);

// Ramanujan sum r_q(n) = sum over units a mod q of e(an/q), as an exact
// integer via the divisor form sum_{d | (q,n)} d mu(q/d).
i64 ramanujan_sum(i64 q, i64 n);

// Number of ordered triples (a,b,c) with a*b*c = n.
i64 tau3(i64 n);

// Deterministic solution (Y, Z) of Y*B + Z*C == 1 (mod D) for
// gcd(B,C,D) == 1: the lexicographically least pair with 0 <= Y,Z < D.
// Throws NoSolution when gcd(B,C,D) > 1.
std::pair<Residue, Residue> solve_unimodular(i64 B, i64 C, i64 D);

}  // namespace gl3
