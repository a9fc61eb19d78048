#pragma once

// The 6-fold finite Fourier transforms of the long-element Kloosterman sum,
//
//   S^_{a,b,d}(x1,x2,y1,y2,z1,z2; D1,D2)
//     = (D1 D2)^{-3} sum_{n1,m1,l1 mod D1; n2,m2,l2 mod D2}
//         S^(1)(a m1 d, b n2 l2, n1 l1, m2 d; D1, D2)
//         e(-(n1 x1 + m1 y1 + l1 z1)/D1) e(-(n2 x2 + m2 y2 + l2 z2)/D2)
//
// and the chi-twisted variant at level p^3 (chi primitive mod p, p^3 | D_i)
// with weights chibar(n1 l1 m2) chi(m1 n2 l2).  Three evaluation tiers:
//
//   naive    — table-driven 6-fold summation (the oracle; guarded size)
//   fast     — opens the Kloosterman sum, pulls the quadruple sum outside;
//              the (n,l)-double sums collapse to a divisibility indicator
//              and a solution congruence, the m-sums to orthogonality or
//              Gauss sums.  O(#quadruples) per evaluation.
//   semifast — twisted middle tier: closed-form l- and m-free structure but
//              naive m-loops; validates the fast tier where the naive DFT
//              is infeasible.

#include <array>
#include <optional>
#include <vector>

#include "gl3/expsum.hpp"
#include "gl3/kloosterman.hpp"
#include "gl3/modarith.hpp"

namespace gl3 {

// Character mod a prime p, chi(g^t) = e(index t / order) on the least
// primitive root g.  order is the true multiplicative order.
class DirichletCharacter {
 public:
  DirichletCharacter(i64 p, i64 order, i64 index = 1);

  cplx eval(i64 n) const;            // 0 when p | n
  cplx eval_conj(i64 n) const;
  i64 modulus() const { return p_; }
  i64 order() const { return order_; }
  i64 generator() const { return gen_; }
  bool is_primitive() const { return order_ > 1; }
  bool is_quadratic() const { return order_ == 2; }

  // The phi(k) characters of exact order k modulo p.
  static std::vector<DirichletCharacter> all_of_order(i64 p, i64 k);
  // All primitive (= nontrivial) characters mod p.
  static std::vector<DirichletCharacter> all_primitive(i64 p);

 private:
  i64 p_, order_, index_, gen_;
  std::vector<i64> dlog_;
};

cplx gauss_sum(const DirichletCharacter& chi);       // throws NotPrimitive
cplx gauss_sum_conj(const DirichletCharacter& chi);  // tau(chibar)

struct TransformSpec {
  i64 a = 1, b = 1, d = 1;
  i64 D1 = 1, D2 = 1;
  std::array<i64, 6> freq{0, 0, 0, 0, 0, 0};  // x1, x2, y1, y2, z1, z2
  std::optional<DirichletCharacter> twist;
};

ExpSumValue s_hat_naive(const TransformSpec& spec);

// Precomputes the quadruple data for repeated evaluations at fixed moduli.
class FastTransformEngine {
 public:
  // level = 1 untwisted; for the twisted transform pass level = p^3 and
  // prime-power moduli.
  FastTransformEngine(i64 level, i64 D1, i64 D2);

  ExpSumValue eval(i64 a, i64 b, i64 d, const std::array<i64, 6>& freq) const;
  ExpSumValue eval_twisted(const DirichletCharacter& chi, i64 a, i64 b, i64 d,
                           const std::array<i64, 6>& freq) const;
  ExpSumValue eval_twisted_semifast(const DirichletCharacter& chi, i64 a,
                                    i64 b, i64 d,
                                    const std::array<i64, 6>& freq) const;

  i64 quadruple_count() const { return i64(quads_.size()); }

 private:
  struct QuadData {
    i64 B1, B2;
    i64 K1, KY2;        // (Y1 D2 - Z1 B2) mod D1, (Y2 D1 - Z2 B1) mod D2
    i64 g1, inv1;       // gcd(K1, D1), inverse of K1/g1 mod D1/g1
    i64 g2, inv2;       // gcd(B2, D2), inverse of B2/g2 mod D2/g2
  };
  i64 level_, D1_, D2_, Q_;
  std::vector<QuadData> quads_;
  std::vector<cplx> roots1_, roots2_;  // e(j/D1), e(j/D2)
};

ExpSumValue s_hat_fast(const TransformSpec& spec);
ExpSumValue s_hat_semifast(const TransformSpec& spec);

// Product evaluation through the multiplicativity identities for
// D_j = t_j u_j with gcd(t1 t2, u1 u2) = 1; twisted specs put the p-part
// in u_j = p^{alpha_j} (alpha_j >= 3).
ExpSumValue s_hat_multiplicative(const TransformSpec& spec, i64 t1, i64 u1,
                                 i64 t2, i64 u2);

enum class BoundSource { peter1, twist, coro };

struct BoundCertificate {
  double bound_value = 0;
  BoundSource source = BoundSource::peter1;
  i64 q = 0, alpha1 = 0, alpha2 = 0;
  i64 gamma_or_rho = 0, delta = 0;
};

BoundCertificate bound_peter1(i64 q, i64 alpha1, i64 alpha2,
                              const std::array<i64, 6>& freq, i64 d);
BoundCertificate bound_twist(i64 p, i64 alpha1, i64 alpha2,
                             const std::array<i64, 6>& freq);
BoundCertificate bound_coro(i64 p, i64 D1, i64 D2,
                            const std::array<i64, 6>& freq, i64 d);

}  // namespace gl3
