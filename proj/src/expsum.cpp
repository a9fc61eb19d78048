#include "gl3/expsum.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numbers>

namespace gl3 {

cplx e_frac(i64 a, i64 q) {
  if (q < 1) throw std::invalid_argument("e_frac: q >= 1 required");
  a = mod_floor(a, q);
  i64 g = (a == 0) ? q : std::gcd(a, q);
  i64 ar = a / g, qr = q / g;
  switch (qr) {
    case 1:
      return {1.0, 0.0};
    case 2:
      return {-1.0, 0.0};
    case 4:
      return (ar == 1) ? cplx{0.0, 1.0} : cplx{0.0, -1.0};
    default: {
      double t = 2.0 * std::numbers::pi * double(ar) / double(qr);
      return {std::cos(t), std::sin(t)};
    }
  }
}

long long PhaseHistogram::total_weight() const {
  long long t = 0;
  for (long long c : counts) t += std::llabs(c);
  return t;
}

cplx hist_eval(const PhaseHistogram& h) {
  double re = 0, im = 0, cre = 0, cim = 0;
  for (i64 a = 0; a < h.denom; ++a) {
    if (!h.counts[a]) continue;
    cplx r = e_frac(a, h.denom);
    double tre = double(h.counts[a]) * r.real();
    double tim = double(h.counts[a]) * r.imag();
    double y = tre - cre, t = re + y;
    cre = (t - re) - y;
    re = t;
    y = tim - cim, t = im + y;
    cim = (t - im) - y;
    im = t;
  }
  return {re, im};
}

namespace {

// Exact division of polynomials with integer coefficients, num / den where
// den is monic; remainder must vanish.
std::vector<long long> poly_divide_exact(std::vector<long long> num,
                                         const std::vector<long long>& den) {
  int dn = int(num.size()) - 1, dd = int(den.size()) - 1;
  std::vector<long long> q(dn - dd + 1, 0);
  for (int i = dn; i >= dd; --i) {
    long long c = num[i];
    if (c == 0) continue;
    q[i - dd] = c;
    for (int j = 0; j <= dd; ++j) num[i - dd + j] -= c * den[j];
  }
  return q;
}

std::mutex g_cyclo_mutex;
std::map<i64, std::vector<long long>> g_cyclo_cache;

std::vector<long long> compute_cyclotomic(i64 n);

const std::vector<long long>& cyclo_cached(i64 n) {
  auto it = g_cyclo_cache.find(n);
  if (it != g_cyclo_cache.end()) return it->second;
  auto v = compute_cyclotomic(n);
  return g_cyclo_cache.emplace(n, std::move(v)).first->second;
}

std::vector<long long> compute_cyclotomic(i64 n) {
  if (n == 1) return {-1, 1};  // x - 1
  std::vector<long long> num(static_cast<size_t>(n) + 1, 0);
  num[0] = -1;
  num.back() = 1;  // x^n - 1
  for (i64 d = 1; d < n; ++d) {
    if (n % d) continue;
    num = poly_divide_exact(std::move(num), cyclo_cached(d));
  }
  return num;
}

}  // namespace

const std::vector<long long>& cyclotomic_poly(i64 n) {
  std::lock_guard<std::mutex> lk(g_cyclo_mutex);
  return cyclo_cached(n);
}

bool hist_is_zero(const PhaseHistogram& h) {
  bool any = false;
  for (long long c : h.counts)
    if (c) {
      any = true;
      break;
    }
  if (!any) return true;
  // Remainder of sum c_a x^a modulo Phi_Q, exact in 128-bit arithmetic.
  std::vector<long long> phi;
  {
    std::lock_guard<std::mutex> lk(g_cyclo_mutex);
    phi = cyclo_cached(h.denom);
  }
  int dd = int(phi.size()) - 1;
  std::vector<i128> rem(h.counts.begin(), h.counts.end());
  constexpr i128 kLimit = i128(1) << 100;
  for (int i = int(rem.size()) - 1; i >= dd; --i) {
    i128 c = rem[i];
    if (c == 0) continue;
    for (int j = 0; j <= dd; ++j) {
      rem[i - dd + j] -= c * phi[j];
      if (rem[i - dd + j] > kLimit || rem[i - dd + j] < -kLimit)
        throw Overflow("hist_is_zero: coefficient overflow");
    }
  }
  for (int i = 0; i < dd; ++i)
    if (rem[i] != 0) return false;
  return true;
}

PhaseHistogram hist_rescale(const PhaseHistogram& h, i64 Q2) {
  if (Q2 % h.denom != 0) throw BadModuli("hist_rescale: denom must divide Q2");
  PhaseHistogram out(Q2);
  i64 f = Q2 / h.denom;
  for (i64 a = 0; a < h.denom; ++a) out.counts[a * f] = h.counts[a];
  return out;
}

bool hist_equal(const PhaseHistogram& a, const PhaseHistogram& b) {
  i64 Q = lcm_checked(a.denom, b.denom);
  PhaseHistogram d = hist_rescale(a, Q);
  PhaseHistogram br = hist_rescale(b, Q);
  for (i64 i = 0; i < Q; ++i) d.counts[i] -= br.counts[i];
  return hist_is_zero(d);
}

bool hist_is_integer(const PhaseHistogram& h, long long k) {
  PhaseHistogram d = h;
  d.counts[0] -= k;
  return hist_is_zero(d);
}

std::optional<long long> hist_as_integer(const PhaseHistogram& h) {
  // Candidate from the rounded float value; confirmed exactly.
  cplx v = hist_eval(h);
  long long k = std::llround(v.real());
  if (std::abs(v.imag()) > 0.5) return std::nullopt;
  if (hist_is_integer(h, k)) return k;
  return std::nullopt;
}

ExpAccumulator::ExpAccumulator(i64 denom, SumMode mode)
    : denom_(denom), mode_(mode) {
  roots_.resize(static_cast<size_t>(denom));
  for (i64 a = 0; a < denom; ++a) roots_[a] = e_frac(a, denom);
  if (mode == SumMode::Exact) hist_ = PhaseHistogram(denom);
}

void ExpAccumulator::add(i64 numerator, long long multiplicity) {
  if (multiplicity == 0) return;
  i64 a = mod_floor(numerator, denom_);
  const cplx& r = roots_[a];
  double m = double(multiplicity);
  double y = m * r.real() - cre_, t = re_ + y;
  cre_ = (t - re_) - y;
  re_ = t;
  y = m * r.imag() - cim_, t = im_ + y;
  cim_ = (t - im_) - y;
  im_ = t;
  err_ += 4.0 * std::numeric_limits<double>::epsilon() *
          (std::hypot(re_, im_) + std::abs(m));
  if (hist_) hist_->counts[a] += multiplicity;
}

void ExpAccumulator::add_value(cplx v, double err) {
  double y = v.real() - cre_, t = re_ + y;
  cre_ = (t - re_) - y;
  re_ = t;
  y = v.imag() - cim_, t = im_ + y;
  cim_ = (t - im_) - y;
  im_ = t;
  err_ += err + 4.0 * std::numeric_limits<double>::epsilon() *
                    (std::hypot(re_, im_) + std::abs(v));
  hist_.reset();  // no exact representation for generic values
}

void ExpAccumulator::merge(const ExpAccumulator& other) {
  if (other.denom_ != denom_) throw BadModuli("merge: denominator mismatch");
  double y = other.re_ - cre_, t = re_ + y;
  cre_ = (t - re_) - y;
  re_ = t;
  y = other.im_ - cim_, t = im_ + y;
  cim_ = (t - im_) - y;
  im_ = t;
  err_ += other.err_ + 4.0 * std::numeric_limits<double>::epsilon() *
                           std::hypot(re_, im_);
  if (hist_ && other.hist_) {
    for (i64 a = 0; a < denom_; ++a) hist_->counts[a] += other.hist_->counts[a];
  } else {
    hist_.reset();
  }
}

ExpSumValue ExpAccumulator::finish() const {
  ExpSumValue out;
  out.approx = cplx(re_, im_);
  out.abs_error = err_;
  out.hist = hist_;
  return out;
}

}  // namespace gl3
