#pragma once

// GL(3) Kloosterman sums for the congruence subgroup Gamma_0(N):
//
//   S~(m1,n1,n2; D1,D2)  (w4/w5 cells, D1 | D2)
//     = sum_{C1 mod D1, C2 mod D2, (C1,D1)=(C2,D2/D1)=1}
//         e(n1 C1bar C2/D1 + n2 C2bar/(D2/D1) + m1 C1/D1)
//
//   S^(N)(m1,m2,n1,n2; D1,D2)  (long element, N | D1, N | D2)
//     = sum over B1,C1 mod D1, B2,C2 mod D2 with
//         D1 C2 + B1 B2 + D2 C1 == 0 (mod D1 D2),
//         gcd(B_j,C_j,D_j) = 1,  N | B1,
//         Y_j B_j + Z_j C_j == 1 (mod D_j)
//       of e((m1 B1 + n1(Y1 D2 - Z1 B2))/D1 + (m2 B2 + n2(Y2 D1 - Z2 B1))/D2).
//
// plus the abstract Bruhat-cell sums (Pluecker coordinates) that these
// formulas are proved equal to, the cell-to-concrete conversions, the
// prime-level closed form, twisted multiplicativity, and reference bounds.

#include <functional>
#include <utility>
#include <vector>

#include "gl3/expsum.hpp"
#include "gl3/modarith.hpp"

namespace gl3 {

struct KloostermanSpec {
  i64 level = 1;
  i64 m1 = 0, m2 = 0, n1 = 0, n2 = 0;
  i64 D1 = 1, D2 = 1;
};

// One term of the S^(N) summation domain.  Representatives are normalized
// to 1 <= B_j <= D_j before the auxiliaries are computed.
struct AdmissibleQuadruple {
  i64 B1, C1, B2, C2;
  i64 Y1, Z1, Y2, Z2;
};

enum class Weyl { I, w4, w5, w6 };

struct CellSumSpec {
  Weyl weyl = Weyl::w6;
  i64 n1 = 0, n2 = 0, m1 = 0, m2 = 0;
  i64 c1 = 1, c2 = 1;  // moduli: (A1,A2) for w6, (B1,A2) for w5, (A1,B2) for w4
  i64 level = 1;
};

struct SumOptions {
  SumMode mode = SumMode::Float;
  int threads = 1;
};

// Classical Kloosterman sum S(m,n;c) over units x mod c of e((mx+n xbar)/c).
ExpSumValue classical_kloosterman(i64 m, i64 n, i64 c,
                                  SumMode mode = SumMode::Float);

ExpSumValue s_tilde(i64 m1, i64 n1, i64 n2, i64 D1, i64 D2,
                    SumMode mode = SumMode::Float);

ExpSumValue s_gl3(const KloostermanSpec& spec, const SumOptions& opt = {});

// Streams every admissible quadruple exactly once.  C2 is solved from the
// coupling congruence when D1 | (B1 B2 + D2 C1), otherwise the (B1,C1,B2)
// triple is skipped.
void enumerate_quadruples(i64 level, i64 D1, i64 D2,
                          const std::function<void(const AdmissibleQuadruple&)>& emit);

i64 count_quadruples(i64 level, i64 D1, i64 D2);

// Flattened (B1, C1, Y1, Z1) outer layer; range-partitioned parallel
// evaluation of s_gl3 iterates over this.
struct OuterPair {
  i64 B1, C1, Y1, Z1;
};
std::vector<OuterPair> admissible_outer_pairs(i64 level, i64 D1);

// Abstract cell sum computed from the Bruhat decomposition data (own
// enumeration order and auxiliary-parameter choices, so it is an
// independent route to the concrete formulas).  Returns 0 whenever the
// compatibility/divisibility conditions fail.
ExpSumValue cell_sum_plucker(const CellSumSpec& spec,
                             SumMode mode = SumMode::Float);

// Conversion of a cell spec to the equivalent concrete sum per the
// w6/w5/w4 identities, carrying the delta conditions.
struct CellConversion {
  bool nonzero = false;  // delta condition satisfied
  bool is_gl3 = false;   // target kind: S^(N) (w6) or S~ (w5/w4)
  KloostermanSpec gl3;   // valid when is_gl3
  // S~ target (m1, n1, n2; D1, D2):
  i64 t_m1 = 0, t_n1 = 0, t_n2 = 0, t_D1 = 1, t_D2 = 1;
  // Sign-normalized equivalent arguments (paper's "drop the negatives").
  KloostermanSpec gl3_normalized;
  i64 tn_m1 = 0, tn_n1 = 0, tn_n2 = 0;
};
CellConversion convert_cell(const CellSumSpec& spec);

// Lemma prop1(e): S^(N)(...; N, N) = N - 1 + r_N(n1) r_N(m2) for prime N.
i64 prime_level_closed_form(i64 N, i64 m1, i64 m2, i64 n1, i64 n2);

// Lemma prop1(d) factor specs for D_j = t_j u_j, gcd(t1 t2, u1 u2) = 1.
std::pair<KloostermanSpec, KloostermanSpec> multiplicative_split(
    const KloostermanSpec& spec, i64 t1, i64 u1, i64 t2, i64 u2);

// Reference magnitudes (epsilon = 0, implied constant 1).  Ratios against
// these are reported, never asserted, except where the paper's explicit
// constants guarantee them.
double bound_larsen(i64 m1, i64 n1, i64 n2, i64 D1, i64 D2);
double bound_stevens(const KloostermanSpec& spec);

}  // namespace gl3
