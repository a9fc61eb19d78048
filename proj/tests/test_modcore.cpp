#include <random>

#include "doctest.h"
#include "gl3/expsum.hpp"
#include "gl3/modarith.hpp"
#include "oracles.hpp"

using namespace gl3;

TEST_CASE("e_frac basic values") {
  CHECK(e_frac(0, 7) == cplx(1.0, 0.0));
  CHECK(e_frac(1, 2) == cplx(-1.0, 0.0));
  CHECK(e_frac(1, 4) == cplx(0.0, 1.0));
  // sum of the nontrivial cube roots of unity, against direct evaluation
  cplx s = e_frac(1, 3) + e_frac(2, 3);
  cplx direct = oracle::e_of(1.0 / 3) + oracle::e_of(2.0 / 3);
  CHECK(std::abs(s - direct) < 1e-15);
  CHECK(std::abs(s - cplx(-1.0, 0.0)) < 1e-15);
}

TEST_CASE("e_frac periodicity is bit-exact") {
  for (i64 q : {1, 2, 3, 7, 12, 360}) {
    for (i64 a = -2 * q; a <= 2 * q; ++a) {
      CHECK(e_frac(a + q, q) == e_frac(a, q));
    }
  }
}

TEST_CASE("invmod") {
  CHECK(invmod(3, 7).value == 5);
  for (i64 m : {2, 5, 9, 100}) CHECK(invmod(1, m).value == 1);
  CHECK_THROWS_AS(invmod(2, 4), NotCoprime);
  CHECK(invmod(0, 1).value == 0);
}

TEST_CASE("solve_unimodular frozen examples") {
  for (i64 D : {1, 2, 5, 12}) {
    auto [Y, Z] = solve_unimodular(1, 0, D);
    CHECK(Y.value == 1 % D);
    CHECK(Z.value == 0);
  }
  auto [Y, Z] = solve_unimodular(2, 3, 6);
  CHECK(Y.value == 2);
  CHECK(Z.value == 1);
  CHECK_THROWS_AS(solve_unimodular(2, 4, 6), NoSolution);
}

TEST_CASE("solve_unimodular validity on random inputs") {
  std::mt19937_64 rng(12345);
  int done = 0;
  while (done < 500) {
    i64 D = 1 + i64(rng() % 50);
    i64 B = i64(rng() % (2 * D)) - (i64)D;
    i64 C = i64(rng() % (2 * D)) - (i64)D;
    if (gcd3(mod_floor(B, D), mod_floor(C, D), D) != 1) continue;
    auto [Y, Z] = solve_unimodular(B, C, D);
    CHECK(mod_floor128(i128(Y.value) * B + i128(Z.value) * C, D) == 1 % D);
    ++done;
  }
}

TEST_CASE("valuation") {
  CHECK(valuation(12, 2).order == 2);
  CHECK(valuation(0, 5).is_infinite());
  CHECK(valuation(7, 7).order == 1);
  // min(inf, n) = n with the sentinel encoding
  CHECK(std::min(valuation(0, 5).order, valuation(25, 5).order) == 2);
}

TEST_CASE("ramanujan_sum frozen examples") {
  CHECK(ramanujan_sum(5, 5) == 4);
  CHECK(ramanujan_sum(5, 1) == -1);
  CHECK(ramanujan_sum(6, 3) == -2);
}

TEST_CASE("ramanujan_sum equals direct unit sum for q <= 200") {
  for (i64 q = 1; q <= 200; ++q) {
    for (i64 n : {-200, -37, -1, 0, 1, 2, 3, 60, 199, 200}) {
      double direct = oracle::brute_ramanujan(q, n);
      CHECK(std::abs(direct - double(ramanujan_sum(q, n))) < 1e-6);
    }
  }
}

TEST_CASE("histogram accumulation agrees with float within tracked error") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    i64 Q = 1 + i64(rng() % 300);
    ExpAccumulator acc(Q, SumMode::Exact);
    for (int i = 0; i < 1000; ++i) acc.add(i64(rng() % (2 * Q)), 1 + i64(rng() % 3));
    ExpSumValue v = acc.finish();
    REQUIRE(v.hist.has_value());
    cplx exact = hist_eval(*v.hist);
    double tol = v.abs_error + 1e-12 * double(v.hist->total_weight());
    CHECK(std::abs(exact - v.approx) <= tol);
  }
}

TEST_CASE("cyclotomic zero test") {
  // full sum of Q-th roots of unity vanishes for Q > 1
  for (i64 Q : {2, 3, 4, 6, 12, 30, 360}) {
    PhaseHistogram h(Q);
    for (i64 a = 0; a < Q; ++a) h.counts[a] = 1;
    CHECK(hist_is_zero(h));
  }
  // e(1/5) + e(4/5) is not zero and not an integer
  PhaseHistogram h(5);
  h.counts[1] = 1;
  h.counts[4] = 1;
  CHECK(!hist_is_zero(h));
  CHECK(!hist_as_integer(h).has_value());
  // Ramanujan sums are exact integers in histogram form
  for (i64 q : {4, 6, 9, 10}) {
    for (i64 n = 0; n < q; ++n) {
      PhaseHistogram rh(q);
      for (i64 a = 0; a < q; ++a) {
        if (std::gcd(a == 0 ? q : a, q) != 1) continue;
        rh.counts[mod_floor128(i128(a) * n, q)] += 1;
      }
      auto k = hist_as_integer(rh);
      REQUIRE(k.has_value());
      CHECK(*k == ramanujan_sum(q, n));
    }
  }
}

TEST_CASE("misc modular arithmetic") {
  CHECK(is_prime(2));
  CHECK(is_prime(1000003));
  CHECK(!is_prime(1));
  CHECK(!is_prime(1000001));
  CHECK(euler_phi(1) == 1);
  CHECK(euler_phi(125) == 100);
  CHECK(moebius(30) == -1);
  CHECK(moebius(12) == 0);
  CHECK(primitive_root(5) == 2);
  CHECK(primitive_root(7) == 3);
  CHECK(tau3(1) == 1);
  CHECK(tau3(125) == 10);  // ordered triple factorizations of p^3
  CHECK(powmod(3, 100, 101) == 1);
}
