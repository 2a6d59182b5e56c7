#pragma once

#include <gmpxx.h>

#include <map>
#include <string>

namespace parajones {

/// Sparse exact Laurent polynomial in the variable A.
///
/// Coefficients are arbitrary-precision integers and zero coefficients are
/// never stored, so two values are equal iff their term maps are equal.
/// Values are immutable in spirit: every operation returns a fresh
/// polynomial, which makes them safe to share across worker threads.
class LaurentPoly {
 public:
  using Terms = std::map<long, mpz_class>;  // exponent -> coefficient

  LaurentPoly() = default;

  static LaurentPoly zero() { return LaurentPoly(); }
  static LaurentPoly one() { return monomial(0, 1); }
  static LaurentPoly monomial(long exponent, mpz_class coefficient = 1);
  /// The loop value d = -A^2 - A^-2.
  static LaurentPoly loop_value();

  bool is_zero() const { return terms_.empty(); }
  const Terms& terms() const { return terms_; }
  long min_exponent() const;  // requires !is_zero()
  long max_exponent() const;  // requires !is_zero()

  LaurentPoly operator+(const LaurentPoly& rhs) const;
  LaurentPoly operator-(const LaurentPoly& rhs) const;
  LaurentPoly operator*(const LaurentPoly& rhs) const;
  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& rhs);

  bool operator==(const LaurentPoly& rhs) const { return terms_ == rhs.terms_; }
  bool operator!=(const LaurentPoly& rhs) const { return terms_ != rhs.terms_; }

  /// Multiply by A^shift.
  LaurentPoly shifted(long shift) const;
  /// Substitute A -> A^-1 (bracket of the mirror diagram).
  LaurentPoly mirrored() const;

  /// Exact value at A = a (rational point evaluation; a must be nonzero).
  mpq_class eval(const mpq_class& a) const;

  std::string to_string() const;

 private:
  Terms terms_;
};

/// d^k for k >= 0, served from a shared cache. Thread-safe; concurrent
/// callers see equal values.
LaurentPoly pow_d(long k);

/// Exact division by d. Throws Error(errc::non_divisible) when p is not a
/// multiple of d, which signals an internal bookkeeping bug: every fully
/// closed assembly carries at least one loop factor per term.
LaurentPoly div_exact_d(const LaurentPoly& p);

/// (-A^3)^w for any integer w (negative w gives negative exponents).
LaurentPoly neg_a3_pow(long w);

/// Substitution A = t^{-1/4}. The result maps quarter-exponents of t to
/// coefficients: a key q stands for the term coeff * t^{q/4}. An A-term
/// with exponent e lands on key -e.
std::map<long, mpz_class> substitute_t(const LaurentPoly& p);

}  // namespace parajones
