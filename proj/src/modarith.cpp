#include "gl3/modarith.hpp"

#include <algorithm>

namespace gl3 {

i64 powmod(i64 base, i64 exp, i64 m) {
  if (m == 1) return 0;
  i64 r = 1;
  i64 b = mod_floor(base, m);
  while (exp > 0) {
    if (exp & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    exp >>= 1;
  }
  return r;
}

Egcd egcd(i64 a, i64 b) {
  i64 old_r = a, r = b;
  i64 old_s = 1, s = 0;
  i64 old_t = 0, t = 1;
  while (r != 0) {
    i64 q = old_r / r;
    std::swap(old_r, r), r -= q * old_r;
    std::swap(old_s, s), s -= q * old_s;
    std::swap(old_t, t), t -= q * old_t;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  return {old_r, old_s, old_t};
}

Residue invmod(i64 a, i64 m) {
  if (m == 1) return Residue(0, 1);
  a = mod_floor(a, m);
  Egcd e = egcd(a, m);
  if (e.g != 1) throw NotCoprime("invmod: arguments not coprime");
  return Residue(e.x, m);
}

Valuation valuation(i64 n, i64 q) {
  if (q < 2) throw NotPrime("valuation: q must be a prime >= 2");
  if (n == 0) return {q, Valuation::kInf};
  if (n < 0) n = -n;
  i64 k = 0;
  while (n % q == 0) {
    n /= q;
    ++k;
  }
  return {q, k};
}

namespace {

bool miller_rabin(i64 n, i64 a) {
  if (a % n == 0) return true;
  i64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  i64 x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace

bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  // Deterministic for all 64-bit inputs with this base set.
  for (i64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (!miller_rabin(n, a)) return false;
  }
  return true;
}

std::vector<std::pair<i64, i64>> factorize(i64 n) {
  if (n < 1) throw std::invalid_argument("factorize: n must be positive");
  std::vector<std::pair<i64, i64>> out;
  for (i64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    i64 e = 0;
    while (n % p == 0) n /= p, ++e;
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

i64 euler_phi(i64 n) {
  i64 r = n;
  for (auto [p, e] : factorize(n)) r -= r / p;
  return r;
}

int moebius(i64 n) {
  int sign = 1;
  for (auto [p, e] : factorize(n)) {
    if (e > 1) return 0;
    sign = -sign;
  }
  return sign;
}

i64 primitive_root(i64 p) {
  if (!is_prime(p)) throw NotPrime("primitive_root: p not prime");
  if (p == 2) return 1;
  auto fac = factorize(p - 1);
  for (i64 g = 2; g < p; ++g) {
    bool ok = true;
    for (auto [q, e] : fac) {
      if (powmod(g, (p - 1) / q, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw NotPrime("primitive_root: none found");
}

i64 ramanujan_sum(i64 q, i64 n) {
  if (q < 1) throw std::invalid_argument("ramanujan_sum: q >= 1 required");
  n = n % q;
  if (n < 0) n += q;
  i64 g = (n == 0) ? q : std::gcd(q, n);
  i64 sum = 0;
  for (i64 d = 1; d * d <= g; ++d) {
    if (g % d) continue;
    sum += d * moebius(q / d);
    i64 d2 = g / d;
    if (d2 != d) sum += d2 * moebius(q / d2);
  }
  return sum;
}

i64 tau3(i64 n) {
  i64 r = 1;
  for (auto [p, e] : factorize(n)) r *= (e + 1) * (e + 2) / 2;
  return r;
}

std::pair<Residue, Residue> solve_unimodular(i64 B, i64 C, i64 D) {
  if (D < 1) throw std::invalid_argument("solve_unimodular: D >= 1");
  if (D == 1) return {Residue(0, 1), Residue(0, 1)};
  i64 b = mod_floor(B, D), c = mod_floor(C, D);
  if (gcd3(b, c, D) != 1) throw NoSolution("solve_unimodular: gcd(B,C,D) > 1");
  // Least Y >= 0 making C*Z == 1 - Y*B (mod D) solvable: the condition is
  // Y*B == 1 (mod gcd(C,D)), and gcd(B, gcd(C,D)) = 1.
  i64 g2 = (c == 0) ? D : std::gcd(c, D);
  i64 Y = (g2 == 1) ? 0 : invmod(b % g2, g2).value;
  i64 rhs = mod_floor128(i128(1) - i128(Y) * b, D);
  // Least Z >= 0 with c*Z == rhs (mod D).
  i64 gc = (c == 0) ? D : std::gcd(c, D);
  if (rhs % gc != 0) throw NoSolution("solve_unimodular: internal");
  i64 Z;
  if (c == 0) {
    Z = 0;  // rhs must be 0 here
  } else {
    i64 Dq = D / gc;
    Z = (Dq == 1) ? 0 : mulmod(invmod((c / gc) % Dq, Dq).value, (rhs / gc) % Dq, Dq);
  }
  return {Residue(Y, D), Residue(Z, D)};
}

}  // namespace gl3
