// Copyright 2026 The bitrade Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace bitrade {

/**
 * A finite sum of terms  c * u^n * exp(k * u)  in a local coordinate u >= 0.
 *
 * Every distribution piece in the library stores its CDF increment in this
 * form. The class is closed under addition, multiplication, differentiation
 * and translation, which makes products of CDFs (the distribution of a max)
 * and the welfare integrands exact rather than tabulated.
 */
class ExpPoly
{
public:
  struct Term
  {
    int    power;
    double rate;
    double coef;
  };

  ExpPoly() = default;

  static ExpPoly constant(double c);
  static ExpPoly monomial(double coef, int power, double rate = 0.0);

  double operator()(double u) const;

  ExpPoly derivative() const;

  /// Returns q with q(u) = p(u + delta).
  ExpPoly shifted(double delta) const;

  ExpPoly operator+(ExpPoly const &other) const;
  ExpPoly operator-(ExpPoly const &other) const;
  ExpPoly operator*(ExpPoly const &other) const;
  ExpPoly operator*(double s) const;

  /// Integral over [0, u]; u may be +inf when every term decays.
  double integrate(double u) const;

  /// Integral of v * p(v) over [0, u].
  double integrate_weighted(double u) const;

  /// Integral over [a, b] for 0 <= a <= b, summed term by term without
  /// differencing antiderivatives. b may be +inf when every term decays.
  double integrate_between(double a, double b) const;

  /// Integral of v * p(v) over [a, b], with the same conventions.
  double integrate_weighted_between(double a, double b) const;

  /// Limit as u -> +inf. Throws if a term grows or the limit does not exist.
  double limit_at_infinity() const;

  /// True when no term grows without bound, ignoring coefficients below `tiny`.
  bool decays(double tiny = 0.0) const;

  /// Drops terms whose coefficient magnitude is at most `tiny`.
  ExpPoly pruned(double tiny) const;

  bool                     empty() const { return terms_.empty(); }
  std::vector<Term> const &terms() const { return terms_; }

  std::string to_string() const;

private:
  void canonicalize();

  std::vector<Term> terms_;
};

/// Integral of u^n e^{k u} over [0, upper]. Stable for small |k upper|.
double integrate_exp_monomial(int n, double k, double upper);

/// Integral of u^n e^{k u} over [lo, hi] as e^{k lo} times a sum of positive
/// pieces, so a small tail of a decaying term keeps its relative accuracy.
double integrate_exp_monomial_between(int n, double k, double lo, double hi);

}  // namespace bitrade
