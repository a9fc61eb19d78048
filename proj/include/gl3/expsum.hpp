#pragma once

// Values of finite exponential sums: a double-complex approximation with a
// tracked rounding bound, optionally backed by an exact histogram of phase
// numerators mod a common denominator Q.  The histogram makes zero tests and
// identities exact: sum_a c_a e(a/Q) == 0 iff the Q-th cyclotomic polynomial
// divides sum_a c_a x^a.

#include <complex>
#include <optional>
#include <vector>

#include "gl3/modarith.hpp"

namespace gl3 {

using cplx = std::complex<double>;

// e(a/q) = exp(2*pi*i*a/q), reduced so that e_frac(a+q, q) == e_frac(a, q)
// bit-exactly.  Fractions with reduced denominator 1, 2, 4 are exact.
cplx e_frac(i64 a, i64 q);

struct PhaseHistogram {
  i64 denom = 1;
  std::vector<long long> counts;  // counts[a] multiplies e(a/denom)

  PhaseHistogram() : counts(1, 0) {}
  explicit PhaseHistogram(i64 q) : denom(q), counts(static_cast<size_t>(q), 0) {}

  long long total_weight() const;  // sum |counts|
};

// Exact evaluation sum counts[a] e(a/Q) by compensated summation.
cplx hist_eval(const PhaseHistogram& h);

// True iff the histogram represents 0 in Z[e(1/Q)].
bool hist_is_zero(const PhaseHistogram& h);

// Rescale to a denominator Q2 with denom | Q2.
PhaseHistogram hist_rescale(const PhaseHistogram& h, i64 Q2);

// Exact equality of the represented cyclotomic integers.
bool hist_equal(const PhaseHistogram& a, const PhaseHistogram& b);

// True iff the histogram represents the rational integer k.
bool hist_is_integer(const PhaseHistogram& h, long long k);

// If the represented value is a rational integer, return it.
std::optional<long long> hist_as_integer(const PhaseHistogram& h);

struct ExpSumValue {
  cplx approx{0.0, 0.0};
  double abs_error = 0.0;
  std::optional<PhaseHistogram> hist;

  static ExpSumValue integer(long long v) {
    ExpSumValue s;
    s.approx = cplx(double(v), 0.0);
    s.hist = PhaseHistogram(1);
    s.hist->counts[0] = v;
    return s;
  }
};

enum class SumMode { Float, Exact };

// Accumulates integer multiples of roots of unity e(a/Q).  Kahan-compensated
// in float mode; the tracked abs_error adds 4 ulp per addition.  merge() is
// commutative up to the tracked error, which is what the parallel reduction
// relies on.
class ExpAccumulator {
 public:
  ExpAccumulator(i64 denom, SumMode mode);

  void add(i64 numerator, long long multiplicity = 1);
  void add_value(cplx v, double err);  // float-only contribution
  void merge(const ExpAccumulator& other);

  ExpSumValue finish() const;
  i64 denom() const { return denom_; }

 private:
  i64 denom_;
  SumMode mode_;
  std::vector<cplx> roots_;
  double re_ = 0, im_ = 0, cre_ = 0, cim_ = 0;  // Kahan state
  double err_ = 0;
  std::optional<PhaseHistogram> hist_;
};

// Cyclotomic polynomial Phi_n as integer coefficients (cached).
const std::vector<long long>& cyclotomic_poly(i64 n);

}  // namespace gl3
