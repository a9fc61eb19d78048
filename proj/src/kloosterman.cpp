#include "gl3/kloosterman.hpp"

#include <cmath>
#include <cstdlib>

#include "gl3/parallel.hpp"

namespace gl3 {

ExpSumValue classical_kloosterman(i64 m, i64 n, i64 c, SumMode mode) {
  if (c < 1) throw BadModuli("classical_kloosterman: c >= 1 required");
  ExpAccumulator acc(c, mode);
  for (i64 x = 0; x < c; ++x) {
    if (std::gcd(x == 0 ? c : x, c) != 1) continue;
    i64 xbar = invmod(x, c).value;
    acc.add(mod_floor128(i128(m) * x + i128(n) * xbar, c));
  }
  return acc.finish();
}

ExpSumValue s_tilde(i64 m1, i64 n1, i64 n2, i64 D1, i64 D2, SumMode mode) {
  if (D1 < 1 || D2 < 1 || D2 % D1 != 0)
    throw BadModuli("s_tilde: D1 | D2 required");
  i64 q2 = D2 / D1;
  i64 Q = lcm_checked(D1, q2);
  ExpAccumulator acc(Q, mode);
  for (i64 C1 = 0; C1 < D1; ++C1) {
    if (D1 > 1 && std::gcd(C1, D1) != 1) continue;
    i64 C1bar = invmod(C1, D1).value;
    for (i64 C2 = 0; C2 < D2; ++C2) {
      if (q2 > 1 && std::gcd(C2 % q2, q2) != 1) continue;
      i64 C2bar = invmod(C2 % q2, q2).value;
      i64 a1 = mod_floor128(i128(n1) * C1bar * C2 + i128(m1) * C1, D1);
      i64 a2 = mod_floor128(i128(n2) * C2bar, q2);
      acc.add(a1 * (Q / D1) + a2 * (Q / q2));
    }
  }
  return acc.finish();
}

std::vector<OuterPair> admissible_outer_pairs(i64 level, i64 D1) {
  std::vector<OuterPair> out;
  for (i64 B1 = level; B1 <= D1; B1 += level) {
    for (i64 C1 = 0; C1 < D1; ++C1) {
      if (gcd3(B1, C1 == 0 ? D1 : C1, D1) != 1) continue;
      auto [Y1, Z1] = solve_unimodular(B1, C1, D1);
      out.push_back({B1, C1, Y1.value, Z1.value});
    }
  }
  return out;
}

namespace {

void check_level(i64 level, i64 D1, i64 D2) {
  if (level < 1 || D1 < 1 || D2 < 1 || D1 % level != 0 || D2 % level != 0)
    throw BadLevel("s_gl3: level must divide both moduli");
}

}  // namespace

void enumerate_quadruples(
    i64 level, i64 D1, i64 D2,
    const std::function<void(const AdmissibleQuadruple&)>& emit) {
  check_level(level, D1, D2);
  for (const OuterPair& op : admissible_outer_pairs(level, D1)) {
    for (i64 B2 = 1; B2 <= D2; ++B2) {
      i128 t = i128(op.B1) * B2 + i128(D2) * op.C1;
      if (t % D1 != 0) continue;
      i64 C2 = mod_floor128(-(t / D1), D2);
      if (gcd3(B2, C2 == 0 ? D2 : C2, D2) != 1) continue;
      auto [Y2, Z2] = solve_unimodular(B2, C2, D2);
      emit({op.B1, op.C1, B2, C2, op.Y1, op.Z1, Y2.value, Z2.value});
    }
  }
}

i64 count_quadruples(i64 level, i64 D1, i64 D2) {
  i64 n = 0;
  enumerate_quadruples(level, D1, D2, [&](const AdmissibleQuadruple&) { ++n; });
  return n;
}

ExpSumValue s_gl3(const KloostermanSpec& s, const SumOptions& opt) {
  check_level(s.level, s.D1, s.D2);
  const i64 D1 = s.D1, D2 = s.D2;
  const i64 Q = lcm_checked(D1, D2);
  auto outer = admissible_outer_pairs(s.level, D1);

  auto chunk = [&](long long lo, long long hi) {
    ExpAccumulator acc(Q, opt.mode);
    for (long long i = lo; i < hi; ++i) {
      const OuterPair& op = outer[size_t(i)];
      for (i64 B2 = 1; B2 <= D2; ++B2) {
        i128 t = i128(op.B1) * B2 + i128(D2) * op.C1;
        if (t % D1 != 0) continue;
        i64 C2 = mod_floor128(-(t / D1), D2);
        if (gcd3(B2, C2 == 0 ? D2 : C2, D2) != 1) continue;
        auto [Y2, Z2] = solve_unimodular(B2, C2, D2);
        i64 a1 = mod_floor128(
            i128(s.m1) * op.B1 + i128(s.n1) * (i128(op.Y1) * D2 - i128(op.Z1) * B2),
            D1);
        i64 a2 = mod_floor128(
            i128(s.m2) * B2 + i128(s.n2) * (i128(Y2.value) * D1 - i128(Z2.value) * op.B1),
            D2);
        acc.add(a1 * (Q / D1) + a2 * (Q / D2));
      }
    }
    return acc;
  };
  if (opt.threads <= 1) return chunk(0, (long long)outer.size()).finish();
  auto merged = parallel_chunk_reduce<ExpAccumulator>(
      (long long)outer.size(), opt.threads, chunk,
      [](ExpAccumulator& a, const ExpAccumulator& b) { a.merge(b); });
  return merged.finish();
}

// ---------------------------------------------------------------------------
// Abstract Bruhat-cell sums.
//
// The long-element sum reads its phases off of the decomposition
//   gamma = b . diag(1/A2, A2/A1, A1) . w6 . b'
// with b upper-triangular carrying ((Y1 A2 - Z1 B2)/A1, (Z2 B1 - Y2 A1)/A2)
// and b' carrying (B1/A1, -B2/A2).  The auxiliaries here are deliberately a
// different solution of the unimodular equations than the one s_gl3 picks
// (shifted by (C, -B)), and the enumeration solves for C1 from (B2, C2, B1)
// rather than for C2 — an independent route to the same set of terms.

namespace {

ExpSumValue cell_w6(const CellSumSpec& s, SumMode mode) {
  const i64 A1 = s.c1, A2 = s.c2, N = s.level;
  const i64 Q = lcm_checked(A1, A2);
  ExpAccumulator acc(Q, mode);
  if (A1 % N != 0) return acc.finish();  // no Pluecker points: empty sum
  for (i64 B2 = 1; B2 <= A2; ++B2) {
    for (i64 C2 = 0; C2 < A2; ++C2) {
      if (gcd3(B2, C2 == 0 ? A2 : C2, A2) != 1) continue;
      auto [Y2c, Z2c] = solve_unimodular(B2, C2, A2);
      i64 Y2 = addmod(Y2c.value, C2, A2), Z2 = submod(Z2c.value, B2, A2);
      for (i64 B1 = N; B1 <= A1; B1 += N) {
        i128 t = i128(A1) * C2 + i128(B1) * B2;
        if (t % A2 != 0) continue;
        i64 C1 = mod_floor128(-(t / A2), A1);
        if (gcd3(B1, C1 == 0 ? A1 : C1, A1) != 1) continue;
        auto [Y1c, Z1c] = solve_unimodular(B1, C1, A1);
        i64 Y1 = addmod(Y1c.value, C1, A1), Z1 = submod(Z1c.value, B1, A1);
        i64 a1 = mod_floor128(
            i128(s.n1) * (i128(Y1) * A2 - i128(Z1) * B2) + i128(s.m2) * B1, A1);
        i64 a2 = mod_floor128(
            i128(s.n2) * (i128(Z2) * B1 - i128(Y2) * A1) - i128(s.m1) * B2, A2);
        acc.add(a1 * (Q / A1) + a2 * (Q / A2));
      }
    }
  }
  return acc.finish();
}

// w5 cell: A1 = 0, moduli (B1, A2) with B1 | A2.  Nonzero only under the
// compatibility condition n1 A2 = m2 B1^2 and N | B1 | A2.
ExpSumValue cell_w5(const CellSumSpec& s, SumMode mode) {
  const i64 B1 = s.c1, A2 = s.c2, N = s.level;
  bool compatible = (i128(s.n1) * A2 == i128(s.m2) * B1 * B1);
  bool divisible = (B1 % N == 0) && (A2 % B1 == 0);
  i64 q2 = divisible ? A2 / B1 : 1;
  i64 Q = divisible ? lcm_checked(B1, q2) : 1;
  ExpAccumulator acc(Q, mode);
  if (!compatible || !divisible) return acc.finish();
  for (i64 C1 = 0; C1 < B1; ++C1) {
    if (B1 > 1 && std::gcd(C1, B1) != 1) continue;
    i64 Z1 = invmod(C1, B1).value;
    for (i64 C2 = 0; C2 < A2; ++C2) {
      if (q2 > 1 && std::gcd(C2 % q2, q2) != 1) continue;
      i64 Z2 = invmod(C2 % q2, q2).value;
      i64 a1 = mod_floor128(i128(s.n1) * Z1 * C2 + i128(s.m1) * C1, B1);
      i64 a2 = mod_floor128(i128(s.n2) * Z2, q2);
      acc.add(a1 * (Q / B1) + a2 * (Q / q2));
    }
  }
  return acc.finish();
}

// w4 cell: A2 = 0, moduli (A1, B2) with (N B2) | A1; compatibility
// n2 A1 = m1 B2^2.
ExpSumValue cell_w4(const CellSumSpec& s, SumMode mode) {
  const i64 A1 = s.c1, B2 = s.c2, N = s.level;
  bool compatible = (i128(s.n2) * A1 == i128(s.m1) * B2 * B2);
  bool divisible = (A1 % (N * B2) == 0);
  i64 q1 = divisible ? A1 / B2 : 1;
  i64 Q = divisible ? lcm_checked(q1, B2) : 1;
  ExpAccumulator acc(Q, mode);
  if (!compatible || !divisible) return acc.finish();
  for (i64 C1 = 0; C1 < A1; ++C1) {
    if (q1 > 1 && std::gcd(C1 % q1, q1) != 1) continue;
    i64 Z1 = invmod(C1 % q1, q1).value;
    for (i64 C2 = 0; C2 < B2; ++C2) {
      if (B2 > 1 && std::gcd(C2, B2) != 1) continue;
      i64 Z2 = invmod(C2, B2).value;
      i64 a1 = mod_floor128(-i128(s.n1) * Z1, q1);
      i64 a2 = mod_floor128(-i128(s.n2) * Z2 * C1 - i128(s.m2) * C2, B2);
      acc.add(a1 * (Q / q1) + a2 * (Q / B2));
    }
  }
  return acc.finish();
}

}  // namespace

ExpSumValue cell_sum_plucker(const CellSumSpec& spec, SumMode mode) {
  switch (spec.weyl) {
    case Weyl::w6:
      return cell_w6(spec, mode);
    case Weyl::w5:
      return cell_w5(spec, mode);
    case Weyl::w4:
      return cell_w4(spec, mode);
    default:
      throw UnsupportedCell("cell_sum_plucker: only w4, w5, w6");
  }
}

CellConversion convert_cell(const CellSumSpec& s) {
  CellConversion out;
  switch (s.weyl) {
    case Weyl::w6: {
      out.is_gl3 = true;
      out.nonzero = (s.c1 % s.level == 0);
      out.gl3 = {s.level, s.m2, -s.m1, s.n1, -s.n2, s.c1, s.c2};
      // Negating the (m2-slot, n2-slot) pair is an exact symmetry.
      out.gl3_normalized = {s.level, s.m2, s.m1, s.n1, s.n2, s.c1, s.c2};
      return out;
    }
    case Weyl::w5: {
      out.is_gl3 = false;
      out.nonzero = (i128(s.n1) * s.c2 == i128(s.m2) * s.c1 * s.c1) &&
                    (s.c1 % s.level == 0) && (s.c2 % s.c1 == 0);
      out.t_m1 = s.m1, out.t_n1 = s.n1, out.t_n2 = s.n2;
      out.t_D1 = s.c1, out.t_D2 = s.c2;
      out.tn_m1 = s.m1, out.tn_n1 = s.n1, out.tn_n2 = s.n2;
      return out;
    }
    case Weyl::w4: {
      out.is_gl3 = false;
      out.nonzero = (i128(s.n2) * s.c1 == i128(s.m1) * s.c2 * s.c2) &&
                    (s.c1 % (s.level * s.c2) == 0);
      out.t_m1 = -s.m2, out.t_n1 = -s.n2, out.t_n2 = -s.n1;
      out.t_D1 = s.c2, out.t_D2 = s.c1;
      // S~ is invariant under flipping both n's (C2 -> -C2).
      out.tn_m1 = -s.m2, out.tn_n1 = s.n2, out.tn_n2 = s.n1;
      return out;
    }
    default:
      throw UnsupportedCell("convert_cell: only w4, w5, w6");
  }
}

i64 prime_level_closed_form(i64 N, i64 m1, i64 m2, i64 n1, i64 n2) {
  if (!is_prime(N)) throw NotPrime("prime_level_closed_form: N must be prime");
  (void)m1;
  (void)n2;
  return N - 1 + ramanujan_sum(N, n1) * ramanujan_sum(N, m2);
}

std::pair<KloostermanSpec, KloostermanSpec> multiplicative_split(
    const KloostermanSpec& s, i64 t1, i64 u1, i64 t2, i64 u2) {
  if (t1 < 1 || u1 < 1 || t2 < 1 || u2 < 1 || t1 * u1 != s.D1 ||
      t2 * u2 != s.D2)
    throw NotCoprimeSplit("multiplicative_split: t_j u_j must equal D_j");
  if (std::gcd(t1 * t2, u1 * u2) != 1)
    throw NotCoprimeSplit("multiplicative_split: gcd(t1 t2, u1 u2) must be 1");
  check_level(s.level, s.D1, s.D2);

  KloostermanSpec a, b;
  a.level = std::gcd(s.level, t1);
  a.D1 = t1;
  a.D2 = t2;
  {
    i64 u1b = invmod(u1 % t1, t1).value;
    i64 u2b = invmod(u2 % t2, t2).value;
    a.m1 = mod_floor128(i128(u1b) * u1b % t1 * (u2 % t1) % t1 * mod_floor(s.m1, t1), t1);
    a.m2 = mod_floor128(i128(u2b) * u2b % t2 * (u1 % t2) % t2 * mod_floor(s.m2, t2), t2);
    a.n1 = s.n1;
    a.n2 = s.n2;
  }
  b.level = std::gcd(s.level, u1);
  b.D1 = u1;
  b.D2 = u2;
  {
    i64 t1b = invmod(t1 % u1, u1).value;
    i64 t2b = invmod(t2 % u2, u2).value;
    b.m1 = mod_floor128(i128(t1b) * t1b % u1 * (t2 % u1) % u1 * mod_floor(s.m1, u1), u1);
    b.m2 = mod_floor128(i128(t2b) * t2b % u2 * (t1 % u2) % u2 * mod_floor(s.m2, u2), u2);
    b.n1 = s.n1;
    b.n2 = s.n2;
  }
  return {a, b};
}

namespace {

// gcd over 128-bit magnitudes, with gcd(0, b) = b.
i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) {
    i128 r = a % b;
    a = b;
    b = r;
  }
  return a;
}

}  // namespace

double bound_larsen(i64 m1, i64 n1, i64 n2, i64 D1, i64 D2) {
  if (D1 < 1 || D2 < 1 || D2 % D1 != 0)
    throw BadModuli("bound_larsen: D1 | D2 required");
  i64 q2 = D2 / D1;
  i128 lhs = gcd128(n2, q2) * D1 * D1;
  i128 rhs = gcd128(gcd128(m1, n1), D1) * D2;
  return double(gcd128(lhs, rhs));
}

double bound_stevens(const KloostermanSpec& s) {
  i64 L = lcm_checked(s.D1, s.D2);
  double g0 = double(std::gcd(s.D1, s.D2));
  double g1 = double(gcd128(i128(s.m1) * s.n1, L));
  double g2 = double(gcd128(i128(s.m2) * s.n2, L));
  return std::sqrt(double(s.D1) * double(s.D2)) * std::sqrt(g0 * g1 * g2);
}

}  // namespace gl3
