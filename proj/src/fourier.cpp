#include "gl3/fourier.hpp"

#include <cmath>

namespace gl3 {

DirichletCharacter::DirichletCharacter(i64 p, i64 order, i64 index) {
  if (!is_prime(p)) throw NotPrime("DirichletCharacter: p must be prime");
  if (order < 1 || (p - 1) % order != 0)
    throw std::invalid_argument("DirichletCharacter: order must divide p-1");
  index = mod_floor(index, order);
  i64 g = (index == 0) ? order : std::gcd(index, order);
  p_ = p;
  order_ = order / g;
  index_ = index / g;
  if (order_ == 1) index_ = 0;
  gen_ = primitive_root(p);
  dlog_.assign(size_t(p), 0);
  i64 v = 1;
  for (i64 t = 0; t < p - 1; ++t) {
    dlog_[size_t(v)] = t;
    v = mulmod(v, gen_, p);
  }
}

cplx DirichletCharacter::eval(i64 n) const {
  i64 r = mod_floor(n, p_);
  if (r == 0) return {0.0, 0.0};
  if (order_ == 1) return {1.0, 0.0};
  return e_frac(index_ * dlog_[size_t(r)], order_);
}

cplx DirichletCharacter::eval_conj(i64 n) const { return std::conj(eval(n)); }

std::vector<DirichletCharacter> DirichletCharacter::all_of_order(i64 p, i64 k) {
  std::vector<DirichletCharacter> out;
  if (k < 1 || (p - 1) % k != 0) return out;
  for (i64 j = 1; j <= k; ++j) {
    if (std::gcd(j, k) != 1) continue;
    out.emplace_back(p, k, j);
  }
  return out;
}

std::vector<DirichletCharacter> DirichletCharacter::all_primitive(i64 p) {
  std::vector<DirichletCharacter> out;
  for (i64 k = 2; k <= p - 1; ++k) {
    if ((p - 1) % k != 0) continue;
    auto v = all_of_order(p, k);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

cplx gauss_sum(const DirichletCharacter& chi) {
  if (!chi.is_primitive())
    throw NotPrimitive("gauss_sum: chi must be primitive");
  i64 p = chi.modulus();
  cplx s = 0;
  for (i64 r = 1; r < p; ++r) s += chi.eval(r) * e_frac(r, p);
  return s;
}

cplx gauss_sum_conj(const DirichletCharacter& chi) {
  if (!chi.is_primitive())
    throw NotPrimitive("gauss_sum: chi must be primitive");
  i64 p = chi.modulus();
  cplx s = 0;
  for (i64 r = 1; r < p; ++r) s += chi.eval_conj(r) * e_frac(r, p);
  return s;
}

namespace {

void check_transform_spec(const TransformSpec& s, i64& level) {
  if (s.D1 < 1 || s.D2 < 1) throw BadModuli("transform: moduli must be >= 1");
  i64 ra = mod_floor(s.a, s.D1), rb = mod_floor(s.b, s.D2);
  if (std::gcd(ra == 0 ? s.D1 : ra, s.D1) != 1 ||
      std::gcd(rb == 0 ? s.D2 : rb, s.D2) != 1)
    throw std::invalid_argument("transform: a, b must be units mod D1, D2");
  if (s.d < 1) throw std::invalid_argument("transform: d must be positive");
  level = 1;
  if (s.twist) {
    i64 p = s.twist->modulus();
    i64 p3 = p * p * p;
    if (!s.twist->is_primitive())
      throw BadTwist("transform: twist must be primitive");
    if (s.D1 % p3 != 0 || s.D2 % p3 != 0)
      throw BadTwist("transform: twisted case needs p^3 | D1 and p^3 | D2");
    if (std::gcd(s.d, p) != 1)
      throw BadTwist("transform: gcd(d, p) = 1 required");
    level = p3;
  }
}

}  // namespace

ExpSumValue s_hat_naive(const TransformSpec& s) {
  i64 level;
  check_transform_spec(s, level);
  const i64 D1 = s.D1, D2 = s.D2;
  double size = std::pow(double(D1), 3) * std::pow(double(D2), 3);
  if (size > 1e9) throw TooLarge("s_hat_naive: D1^3 D2^3 exceeds guard");

  // Kloosterman value table over (m1, w1, w2, m2), w1 = n1 l1 mod D1,
  // w2 = n2 l2 mod D2, filled from a single quadruple enumeration; this is
  // the only cache here and is read-only afterwards.
  std::vector<cplx> table(size_t(D1) * D1 * D2 * D2, cplx(0, 0));
  {
    std::vector<cplx> r1(size_t(D1)), r2(size_t(D2));
    for (i64 j = 0; j < D1; ++j) r1[size_t(j)] = e_frac(j, D1);
    for (i64 j = 0; j < D2; ++j) r2[size_t(j)] = e_frac(j, D2);
    std::vector<cplx> em1(size_t(D1)), ew1(size_t(D1)), e34(size_t(D2) * D2);
    enumerate_quadruples(level, D1, D2, [&](const AdmissibleQuadruple& t) {
      i64 K1 = mod_floor128(i128(t.Y1) * D2 - i128(t.Z1) * t.B2, D1);
      i64 KY2 = mod_floor128(i128(t.Y2) * D1 - i128(t.Z2) * t.B1, D2);
      i64 c1 = mulmod(mod_floor(s.a, D1),
                      mulmod(mod_floor(s.d, D1), t.B1 % D1, D1), D1);
      i64 c3 = mulmod(mod_floor(s.b, D2), t.B2 % D2, D2);
      i64 c4 = mulmod(mod_floor(s.d, D2), KY2, D2);
      for (i64 m1 = 0; m1 < D1; ++m1)
        em1[size_t(m1)] = r1[size_t(mulmod(m1, c1, D1))];
      for (i64 w1 = 0; w1 < D1; ++w1)
        ew1[size_t(w1)] = r1[size_t(mulmod(w1, K1, D1))];
      for (i64 w2 = 0; w2 < D2; ++w2) {
        cplx a2 = r2[size_t(mulmod(w2, c3, D2))];
        for (i64 m2 = 0; m2 < D2; ++m2)
          e34[size_t(w2 * D2 + m2)] = a2 * r2[size_t(mulmod(m2, c4, D2))];
      }
      cplx* tp = table.data();
      for (i64 m1 = 0; m1 < D1; ++m1)
        for (i64 w1 = 0; w1 < D1; ++w1) {
          cplx c12 = em1[size_t(m1)] * ew1[size_t(w1)];
          const cplx* ep = e34.data();
          for (i64 k = 0; k < D2 * D2; ++k) tp[size_t(k)] += c12 * ep[size_t(k)];
          tp += D2 * D2;
        }
    });
  }

  std::vector<cplx> px1(size_t(D1)), py1(size_t(D1)), pz1(size_t(D1)),
      px2(size_t(D2)), py2(size_t(D2)), pz2(size_t(D2));
  for (i64 j = 0; j < D1; ++j) {
    px1[size_t(j)] = e_frac(-j * s.freq[0], D1);
    py1[size_t(j)] = e_frac(-j * s.freq[2], D1);
    pz1[size_t(j)] = e_frac(-j * s.freq[4], D1);
  }
  for (i64 j = 0; j < D2; ++j) {
    px2[size_t(j)] = e_frac(-j * s.freq[1], D2);
    py2[size_t(j)] = e_frac(-j * s.freq[3], D2);
    pz2[size_t(j)] = e_frac(-j * s.freq[5], D2);
  }

  const DirichletCharacter* chi = s.twist ? &*s.twist : nullptr;
  const i64 p = chi ? chi->modulus() : 0;
  std::vector<cplx> cvals, ccvals;
  if (chi) {
    i64 big = std::max(D1, D2);
    cvals.resize(size_t(big));
    ccvals.resize(size_t(big));
    for (i64 j = 0; j < big; ++j) {
      cvals[size_t(j)] = chi->eval(j);
      ccvals[size_t(j)] = chi->eval_conj(j);
    }
  }

  double re = 0, im = 0, cre = 0, cim = 0;
  auto kadd = [&](cplx v) {
    double y = v.real() - cre, t = re + y;
    cre = (t - re) - y;
    re = t;
    y = v.imag() - cim, t = im + y;
    cim = (t - im) - y;
    im = t;
  };
  long long terms = 0;
  for (i64 n1 = 0; n1 < D1; ++n1) {
    if (chi && n1 % p == 0) continue;
    for (i64 l1 = 0; l1 < D1; ++l1) {
      if (chi && l1 % p == 0) continue;
      i64 w1 = mulmod(n1, l1, D1);
      cplx cn1l1 = px1[size_t(n1)] * pz1[size_t(l1)];
      if (chi) cn1l1 *= ccvals[size_t(n1)] * ccvals[size_t(l1)];
      for (i64 m1 = 0; m1 < D1; ++m1) {
        if (chi && m1 % p == 0) continue;
        cplx c1 = cn1l1 * py1[size_t(m1)];
        if (chi) c1 *= cvals[size_t(m1)];
        const cplx* trow =
            table.data() + (size_t(m1) * D1 + size_t(w1)) * size_t(D2) * D2;
        for (i64 n2 = 0; n2 < D2; ++n2) {
          if (chi && n2 % p == 0) continue;
          for (i64 l2 = 0; l2 < D2; ++l2) {
            if (chi && l2 % p == 0) continue;
            i64 w2 = mulmod(n2, l2, D2);
            cplx c2 = c1 * px2[size_t(n2)] * pz2[size_t(l2)];
            if (chi) c2 *= cvals[size_t(n2)] * cvals[size_t(l2)];
            const cplx* tcol = trow + size_t(w2) * D2;
            for (i64 m2 = 0; m2 < D2; ++m2) {
              if (chi && m2 % p == 0) continue;
              cplx v = c2 * py2[size_t(m2)] * tcol[size_t(m2)];
              if (chi) v *= ccvals[size_t(m2)];
              kadd(v);
              ++terms;
            }
          }
        }
      }
    }
  }
  ExpSumValue out;
  double norm = size;
  out.approx = cplx(re, im) / norm;
  out.abs_error = 8.0 * std::numeric_limits<double>::epsilon() *
                  double(terms) * double(D1 * D2) / norm;
  return out;
}

// ---------------------------------------------------------------------------

FastTransformEngine::FastTransformEngine(i64 level, i64 D1, i64 D2)
    : level_(level), D1_(D1), D2_(D2), Q_(lcm_checked(D1, D2)) {
  roots1_.resize(size_t(D1));
  roots2_.resize(size_t(D2));
  for (i64 j = 0; j < D1; ++j) roots1_[size_t(j)] = e_frac(j, D1);
  for (i64 j = 0; j < D2; ++j) roots2_[size_t(j)] = e_frac(j, D2);
  enumerate_quadruples(level, D1, D2, [&](const AdmissibleQuadruple& t) {
    QuadData q;
    q.B1 = t.B1 % D1;
    q.B2 = t.B2 % D2;
    q.K1 = mod_floor128(i128(t.Y1) * D2 - i128(t.Z1) * t.B2, D1);
    q.KY2 = mod_floor128(i128(t.Y2) * D1 - i128(t.Z2) * t.B1, D2);
    q.g1 = (q.K1 == 0) ? D1 : std::gcd(q.K1, D1);
    i64 m1q = D1 / q.g1;
    q.inv1 = (m1q == 1) ? 0 : invmod((q.K1 / q.g1) % m1q, m1q).value;
    q.g2 = (q.B2 == 0) ? D2 : std::gcd(q.B2, D2);
    i64 m2q = D2 / q.g2;
    q.inv2 = (m2q == 1) ? 0 : invmod((q.B2 / q.g2) % m2q, m2q).value;
    quads_.push_back(q);
  });
}

ExpSumValue FastTransformEngine::eval(i64 a, i64 b, i64 d,
                                      const std::array<i64, 6>& freq) const {
  const i64 D1 = D1_, D2 = D2_;
  const i64 x1 = mod_floor(freq[0], D1), x2 = mod_floor(freq[1], D2);
  const i64 y1 = mod_floor(freq[2], D1), y2 = mod_floor(freq[3], D2);
  const i64 z1 = mod_floor(freq[4], D1), z2 = mod_floor(freq[5], D2);
  const i64 ad = mulmod(mod_floor(a, D1), mod_floor(d, D1), D1);
  const i64 dm2 = mod_floor(d, D2);

  double re = 0, im = 0;
  long long terms = 0;
  for (const QuadData& q : quads_) {
    if (mulmod(ad, q.B1, D1) != y1) continue;      // m1 orthogonality
    if (mulmod(dm2, q.KY2, D2) != y2) continue;    // m2 orthogonality
    if (x1 % q.g1 || z1 % q.g1 || x2 % q.g2 || z2 % q.g2) continue;
    i64 m1q = D1 / q.g1, m2q = D2 / q.g2;
    i64 l01 = (m1q == 1) ? 0 : mulmod(q.inv1, (x1 / q.g1) % m1q, m1q);
    i64 binv = (m2q == 1) ? 0 : invmod(mod_floor(b, m2q), m2q).value;
    i64 l02 = (m2q == 1)
                  ? 0
                  : mulmod(mulmod(q.inv2, binv, m2q), (x2 / q.g2) % m2q, m2q);
    cplx ph = roots1_[size_t(mod_floor128(-i128(l01) * z1, D1))] *
              roots2_[size_t(mod_floor128(-i128(l02) * z2, D2))];
    double w = double(q.g1) * double(q.g2);
    re += w * ph.real();
    im += w * ph.imag();
    ++terms;
  }
  ExpSumValue out;
  double norm = double(D1) * double(D2);
  out.approx = cplx(re, im) / norm;
  out.abs_error = 8.0 * std::numeric_limits<double>::epsilon() *
                  (double(terms) + 1.0) * (std::abs(out.approx) + 1.0);
  return out;
}

namespace {

// sum_{m mod p^alpha} chi(m) e(m K / p^alpha): nonzero only when
// v_p(K) = alpha - 1, where it collapses to a Gauss sum.
cplx twisted_linear_sum(const DirichletCharacter& chi, bool conj, i64 K,
                        i64 palpha, i64 alpha, cplx tau, cplx tau_conj) {
  if (K == 0) return {0, 0};
  i64 p = chi.modulus();
  if (valuation(K, p).order != alpha - 1) return {0, 0};
  i64 kappa = (K / (palpha / p)) % p;
  double scale = double(palpha / p);
  if (!conj) return scale * tau * chi.eval_conj(kappa);
  return scale * tau_conj * chi.eval(kappa);
}

}  // namespace

ExpSumValue FastTransformEngine::eval_twisted(
    const DirichletCharacter& chi, i64 a, i64 b, i64 d,
    const std::array<i64, 6>& freq) const {
  const i64 D1 = D1_, D2 = D2_;
  const i64 p = chi.modulus();
  const i64 alpha1 = valuation(D1, p).order, alpha2 = valuation(D2, p).order;
  {
    i64 pa1 = 1, pa2 = 1;
    for (i64 i = 0; i < alpha1; ++i) pa1 *= p;
    for (i64 i = 0; i < alpha2; ++i) pa2 *= p;
    if (pa1 != D1 || pa2 != D2 || alpha1 < 3 || alpha2 < 3)
      throw BadTwist("eval_twisted: moduli must be p^alpha, alpha >= 3");
  }
  if (std::gcd(d, p) != 1) throw BadTwist("eval_twisted: gcd(d, p) = 1");

  const cplx tau = gauss_sum(chi), tau_c = gauss_sum_conj(chi);
  const cplx inv_tau2 = 1.0 / (tau * tau);
  const cplx inv_tauc2 = 1.0 / (tau_c * tau_c);
  const i64 x1 = mod_floor(freq[0], D1), x2 = mod_floor(freq[1], D2);
  const i64 y1 = mod_floor(freq[2], D1), y2 = mod_floor(freq[3], D2);
  const i64 z1 = mod_floor(freq[4], D1), z2 = mod_floor(freq[5], D2);
  const i64 ad = mulmod(mod_floor(a, D1), mod_floor(d, D1), D1);
  const i64 shift1 = D1 / p, shift2 = D2 / p;

  cplx total = 0;
  for (const QuadData& q : quads_) {
    i64 K1m = submod(mulmod(ad, q.B1, D1), y1, D1);
    cplx M1 = twisted_linear_sum(chi, false, K1m, D1, alpha1, tau, tau_c);
    if (M1 == cplx(0, 0)) continue;
    i64 K2m = submod(mulmod(mod_floor(d, D2), q.KY2, D2), y2, D2);
    cplx M2 = twisted_linear_sum(chi, true, K2m, D2, alpha2, tau, tau_c);
    if (M2 == cplx(0, 0)) continue;

    // chibar(n1 l1): unfold each character through its Gauss-sum expansion,
    // leaving p^2 frequency-shifted copies of the plain (n,l) closed form.
    cplx T1 = 0;
    {
      i64 m1q = D1 / q.g1;
      for (i64 bn = 1; bn < p; ++bn) {
        i64 xx = mod_floor(x1 - bn * shift1, D1);
        if (xx % q.g1) continue;
        i64 l0x = (m1q == 1) ? 0 : mulmod(q.inv1, (xx / q.g1) % m1q, m1q);
        for (i64 bl = 1; bl < p; ++bl) {
          i64 zz = mod_floor(z1 - bl * shift1, D1);
          if (zz % q.g1) continue;
          cplx w = chi.eval(bn) * chi.eval(bl);
          T1 += w * double(D1) * double(q.g1) *
                roots1_[size_t(mod_floor128(-i128(l0x) * zz, D1))];
        }
      }
      T1 *= inv_tau2;
    }
    cplx T2 = 0;
    {
      i64 m2q = D2 / q.g2;
      i64 binv = (m2q == 1) ? 0 : invmod(mod_floor(b, m2q), m2q).value;
      for (i64 bn = 1; bn < p; ++bn) {
        i64 xx = mod_floor(x2 - bn * shift2, D2);
        if (xx % q.g2) continue;
        i64 l0x = (m2q == 1) ? 0
                             : mulmod(mulmod(q.inv2, binv, m2q),
                                      (xx / q.g2) % m2q, m2q);
        for (i64 bl = 1; bl < p; ++bl) {
          i64 zz = mod_floor(z2 - bl * shift2, D2);
          if (zz % q.g2) continue;
          cplx w = chi.eval_conj(bn) * chi.eval_conj(bl);
          T2 += w * double(D2) * double(q.g2) *
                roots2_[size_t(mod_floor128(-i128(l0x) * zz, D2))];
        }
      }
      T2 *= inv_tauc2;
    }
    total += M1 * M2 * T1 * T2;
  }
  ExpSumValue out;
  double norm = std::pow(double(D1), 3) * std::pow(double(D2), 3);
  out.approx = total / norm;
  out.abs_error = 1e-12 * (std::abs(out.approx) +
                           std::pow(double(p), 5) * double(D1) * D2 / norm);
  return out;
}

ExpSumValue FastTransformEngine::eval_twisted_semifast(
    const DirichletCharacter& chi, i64 a, i64 b, i64 d,
    const std::array<i64, 6>& freq) const {
  const i64 D1 = D1_, D2 = D2_;
  const i64 p = chi.modulus();
  const i64 alpha1 = valuation(D1, p).order, alpha2 = valuation(D2, p).order;
  const cplx tau = gauss_sum(chi), tau_c = gauss_sum_conj(chi);
  const i64 x1 = mod_floor(freq[0], D1), x2 = mod_floor(freq[1], D2);
  const i64 y1 = mod_floor(freq[2], D1), y2 = mod_floor(freq[3], D2);
  const i64 z1 = mod_floor(freq[4], D1), z2 = mod_floor(freq[5], D2);
  const i64 ad = mulmod(mod_floor(a, D1), mod_floor(d, D1), D1);
  std::vector<cplx> cv1(size_t(D1)), cc1(size_t(D1)), cv2(size_t(D2)),
      cc2(size_t(D2));
  for (i64 j = 0; j < D1; ++j) {
    cv1[size_t(j)] = chi.eval(j);
    cc1[size_t(j)] = chi.eval_conj(j);
  }
  for (i64 j = 0; j < D2; ++j) {
    cv2[size_t(j)] = chi.eval(j);
    cc2[size_t(j)] = chi.eval_conj(j);
  }

  cplx total = 0;
  for (const QuadData& q : quads_) {
    cplx M1 = 0;
    {
      i64 c = submod(mulmod(ad, q.B1, D1), y1, D1);
      for (i64 m = 0; m < D1; ++m)
        if (m % p) M1 += cv1[size_t(m)] * roots1_[size_t(mulmod(m, c, D1))];
    }
    if (std::abs(M1) < 1e-8) continue;  // true values are 0 or >= p^{a-1}
    cplx M2 = 0;
    {
      i64 c = submod(mulmod(mod_floor(d, D2), q.KY2, D2), y2, D2);
      for (i64 m = 0; m < D2; ++m)
        if (m % p) M2 += cc2[size_t(m)] * roots2_[size_t(mulmod(m, c, D2))];
    }
    if (std::abs(M2) < 1e-8) continue;

    cplx T1 = 0;
    for (i64 n = 0; n < D1; ++n) {
      if (n % p == 0) continue;
      i64 Kl = submod(mulmod(n, q.K1, D1), z1, D1);
      cplx L = twisted_linear_sum(chi, true, Kl, D1, alpha1, tau, tau_c);
      if (L == cplx(0, 0)) continue;
      T1 += cc1[size_t(n)] * roots1_[size_t(mod_floor128(-i128(n) * x1, D1))] * L;
    }
    cplx T2 = 0;
    i64 bB2 = mulmod(mod_floor(b, D2), q.B2, D2);
    for (i64 n = 0; n < D2; ++n) {
      if (n % p == 0) continue;
      i64 Kl = submod(mulmod(n, bB2, D2), z2, D2);
      cplx L = twisted_linear_sum(chi, false, Kl, D2, alpha2, tau, tau_c);
      if (L == cplx(0, 0)) continue;
      T2 += cv2[size_t(n)] * roots2_[size_t(mod_floor128(-i128(n) * x2, D2))] * L;
    }
    total += M1 * M2 * T1 * T2;
  }
  ExpSumValue out;
  double norm = std::pow(double(D1), 3) * std::pow(double(D2), 3);
  out.approx = total / norm;
  out.abs_error = 1e-11 * (std::abs(out.approx) +
                           std::pow(double(p), 5) * double(D1) * D2 / norm);
  return out;
}

ExpSumValue s_hat_fast(const TransformSpec& s) {
  i64 level;
  check_transform_spec(s, level);
  FastTransformEngine eng(level, s.D1, s.D2);
  if (s.twist) return eng.eval_twisted(*s.twist, s.a, s.b, s.d, s.freq);
  return eng.eval(s.a, s.b, s.d, s.freq);
}

ExpSumValue s_hat_semifast(const TransformSpec& s) {
  i64 level;
  check_transform_spec(s, level);
  if (!s.twist) throw BadTwist("s_hat_semifast: twisted specs only");
  FastTransformEngine eng(level, s.D1, s.D2);
  return eng.eval_twisted_semifast(*s.twist, s.a, s.b, s.d, s.freq);
}

ExpSumValue s_hat_multiplicative(const TransformSpec& s, i64 t1, i64 u1,
                                 i64 t2, i64 u2) {
  if (t1 < 1 || u1 < 1 || t2 < 1 || u2 < 1 || t1 * u1 != s.D1 ||
      t2 * u2 != s.D2)
    throw NotCoprimeSplit("s_hat_multiplicative: t_j u_j != D_j");
  if (std::gcd(t1 * t2, u1 * u2) != 1)
    throw NotCoprimeSplit("s_hat_multiplicative: split not coprime");
  const auto& f = s.freq;

  // Frequency twists of the multiplicativity identities: for the factor at
  // moduli (M1, M2) with complementary moduli (o1, o2),
  //   x1 -> o1bar x1,  x2 -> o2 o1bar x2,  y1 -> o1 o2bar y1,
  //   y2 -> o2bar y2,  z1 -> o1bar z1,     z2 -> o2bar z2,
  // inverses taken in each coordinate's own ring.
  auto mapped = [&](i64 M1, i64 M2, i64 o1, i64 o2) -> std::array<i64, 6> {
    auto inv_in = [](i64 o, i64 M) {
      if (M == 1) return i64(0);
      return invmod(mod_floor(o, M), M).value;
    };
    i64 o1b1 = inv_in(o1, M1), o2b2 = inv_in(o2, M2);
    i64 o1b2 = inv_in(o1, M2), o2b1 = inv_in(o2, M1);
    std::array<i64, 6> g;
    g[0] = mulmod(o1b1, mod_floor(f[0], M1), M1);
    g[1] = mulmod(mulmod(mod_floor(o2, M2), o1b2, M2), mod_floor(f[1], M2), M2);
    g[2] = mulmod(mulmod(mod_floor(o1, M1), o2b1, M1), mod_floor(f[2], M1), M1);
    g[3] = mulmod(o2b2, mod_floor(f[3], M2), M2);
    g[4] = mulmod(o1b1, mod_floor(f[4], M1), M1);
    g[5] = mulmod(o2b2, mod_floor(f[5], M2), M2);
    return g;
  };
  auto unit_in = [](i64 v, i64 M) {
    i64 r = mod_floor(v, M);
    return (M == 1) ? i64(1) : r;
  };

  if (s.twist) {
    i64 p = s.twist->modulus();
    i64 p3 = p * p * p;
    if (std::gcd(t1 * t2, p) != 1 || u1 % p3 != 0 || u2 % p3 != 0)
      throw BadTwist("s_hat_multiplicative: p-power part must be (u1, u2)");
  }
  TransformSpec sa = s;  // the (u1, u2) factor, twisted if s is
  sa.D1 = u1;
  sa.D2 = u2;
  sa.a = unit_in(s.a, u1);
  sa.b = unit_in(s.b, u2);
  sa.freq = mapped(u1, u2, t1, t2);
  TransformSpec sb = s;  // the (t1, t2) factor, always untwisted
  sb.twist.reset();
  sb.D1 = t1;
  sb.D2 = t2;
  sb.a = unit_in(s.a, t1);
  sb.b = unit_in(s.b, t2);
  sb.freq = mapped(t1, t2, u1, u2);

  ExpSumValue va = s_hat_fast(sa), vb = s_hat_fast(sb);
  ExpSumValue out;
  out.approx = va.approx * vb.approx;
  out.abs_error = va.abs_error * std::abs(vb.approx) +
                  vb.abs_error * std::abs(va.approx) +
                  va.abs_error * vb.abs_error;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

i64 min_valuation(const std::array<i64, 6>& freq, i64 q) {
  i64 g = Valuation::kInf;
  for (i64 f : freq) g = std::min(g, valuation(f, q).order);
  return g;
}

}  // namespace

BoundCertificate bound_peter1(i64 q, i64 alpha1, i64 alpha2,
                              const std::array<i64, 6>& freq, i64 d) {
  if (!is_prime(q)) throw NotPrime("bound_peter1: q must be prime");
  i64 gamma = min_valuation(freq, q);
  if (gamma == Valuation::kInf)
    throw AllZeroFrequencies("bound_peter1: all frequencies zero");
  i64 delta = valuation(d, q).order;
  BoundCertificate c;
  c.source = BoundSource::peter1;
  c.q = q;
  c.alpha1 = alpha1;
  c.alpha2 = alpha2;
  c.gamma_or_rho = gamma;
  c.delta = delta;
  double expo = double(2 * std::min(alpha1, alpha2) - (alpha1 + alpha2) +
                       2 * (gamma + delta));
  c.bound_value = 3.0 * std::pow(double(q), expo);
  return c;
}

BoundCertificate bound_twist(i64 p, i64 alpha1, i64 alpha2,
                             const std::array<i64, 6>& freq) {
  if (!is_prime(p)) throw NotPrime("bound_twist: p must be prime");
  i64 rho = min_valuation(freq, p);
  if (rho == Valuation::kInf)
    throw AllZeroFrequencies("bound_twist: all frequencies zero");
  BoundCertificate c;
  c.source = BoundSource::twist;
  c.q = p;
  c.alpha1 = alpha1;
  c.alpha2 = alpha2;
  c.gamma_or_rho = rho;
  c.delta = 0;
  double expo =
      double(2 * std::min(alpha1, alpha2) - (alpha1 + alpha2) + 2 * rho + 5);
  c.bound_value = 3.0 * std::pow(double(p), expo);
  return c;
}

BoundCertificate bound_coro(i64 p, i64 D1, i64 D2,
                            const std::array<i64, 6>& freq, i64 d) {
  if (!is_prime(p)) throw NotPrime("bound_coro: p must be prime");
  i64 g = std::gcd(D1, D2);
  i64 gf = g;
  for (i64 f : freq) gf = std::gcd(gf, f < 0 ? -f : f);
  // gcd over (x1,...,z2, D1, D2): starting from gcd(D1, D2) and folding in
  // the frequencies gives the same value.
  i64 gd = std::gcd(std::gcd(d, D1), D2);
  BoundCertificate c;
  c.source = BoundSource::coro;
  c.q = p;
  c.bound_value = std::pow(double(p), 5) * double(tau3(g)) * double(g) *
                  double(g) / (double(D1) * double(D2)) * double(gf) *
                  double(gf) * double(gd) * double(gd);
  return c;
}

}  // namespace gl3
