// Copyright 2026 The bitrade Authors
// SPDX-License-Identifier: Apache-2.0

#include "bitrade/exp_poly.hpp"

#include "bitrade/error.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace bitrade {

namespace {

double factorial(int n)
{
  double f = 1.0;
  for (int i = 2; i <= n; ++i)
  {
    f *= i;
  }
  return f;
}

double binomial(int n, int k)
{
  double r = 1.0;
  for (int i = 1; i <= k; ++i)
  {
    r = r * (n - k + i) / i;
  }
  return r;
}

}  // namespace

double integrate_exp_monomial(int n, double k, double upper)
{
  if (upper == 0.0)
  {
    return 0.0;
  }
  if (std::isinf(upper))
  {
    if (k >= 0.0)
    {
      throw InvalidArgument("integral of a non-decaying term over an unbounded range");
    }
    return factorial(n) / std::pow(-k, n + 1);
  }
  if (k == 0.0)
  {
    return std::pow(upper, n + 1) / (n + 1);
  }

  double const z = k * upper;
  if (std::abs(z) <= 1.0)
  {
    // u^{n+1} * sum_m z^m / (m! (n+m+1))
    double sum  = 0.0;
    double zpow = 1.0;
    for (int m = 0; m < 60; ++m)
    {
      double const term = zpow / (n + m + 1);
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum))
      {
        break;
      }
      zpow *= z / (m + 1);
    }
    return std::pow(upper, n + 1) * sum;
  }
  if (k < 0.0)
  {
    double const a = -k;
    return factorial(n) / std::pow(a, n + 1) * boost::math::gamma_p(n + 1.0, a * upper);
  }

  // Growing exponential: forward recurrence I_m = (u^m e^z - m I_{m-1}) / k.
  double const ez     = std::exp(z);
  double       result = std::expm1(z) / k;
  double       upow   = 1.0;
  for (int m = 1; m <= n; ++m)
  {
    upow *= upper;
    result = (upow * ez - m * result) / k;
  }
  return result;
}

double integrate_exp_monomial_between(int n, double k, double lo, double hi)
{
  if (!(hi > lo))
  {
    return 0.0;
  }
  // (lo + v)^n expanded binomially over v in [0, hi - lo].
  double const width = hi - lo;
  double       sum   = 0.0;
  double       lopow = 1.0;
  for (int j = n; j >= 0; --j)
  {
    if (lopow != 0.0)
    {
      sum += binomial(n, j) * lopow * integrate_exp_monomial(j, k, width);
    }
    lopow *= lo;
  }
  return k == 0.0 ? sum : std::exp(k * lo) * sum;
}

ExpPoly ExpPoly::constant(double c)
{
  return monomial(c, 0, 0.0);
}

ExpPoly ExpPoly::monomial(double coef, int power, double rate)
{
  ExpPoly p;
  if (coef != 0.0)
  {
    p.terms_.push_back({power, rate, coef});
  }
  return p;
}

double ExpPoly::operator()(double u) const
{
  double sum = 0.0;
  for (auto const &t : terms_)
  {
    double v = t.coef;
    if (t.power > 0)
    {
      v *= std::pow(u, t.power);
    }
    if (t.rate != 0.0)
    {
      v *= std::exp(t.rate * u);
    }
    sum += v;
  }
  return sum;
}

ExpPoly ExpPoly::derivative() const
{
  ExpPoly d;
  for (auto const &t : terms_)
  {
    if (t.power > 0)
    {
      d.terms_.push_back({t.power - 1, t.rate, t.coef * t.power});
    }
    if (t.rate != 0.0)
    {
      d.terms_.push_back({t.power, t.rate, t.coef * t.rate});
    }
  }
  d.canonicalize();
  return d;
}

ExpPoly ExpPoly::shifted(double delta) const
{
  if (delta == 0.0)
  {
    return *this;
  }
  ExpPoly s;
  for (auto const &t : terms_)
  {
    double const scale = t.coef * (t.rate != 0.0 ? std::exp(t.rate * delta) : 1.0);
    for (int j = 0; j <= t.power; ++j)
    {
      double const c = scale * binomial(t.power, j) * std::pow(delta, t.power - j);
      s.terms_.push_back({j, t.rate, c});
    }
  }
  s.canonicalize();
  return s;
}

ExpPoly ExpPoly::operator+(ExpPoly const &other) const
{
  ExpPoly r = *this;
  r.terms_.insert(r.terms_.end(), other.terms_.begin(), other.terms_.end());
  r.canonicalize();
  return r;
}

ExpPoly ExpPoly::operator-(ExpPoly const &other) const
{
  return *this + other * -1.0;
}

ExpPoly ExpPoly::operator*(ExpPoly const &other) const
{
  ExpPoly r;
  r.terms_.reserve(terms_.size() * other.terms_.size());
  for (auto const &a : terms_)
  {
    for (auto const &b : other.terms_)
    {
      r.terms_.push_back({a.power + b.power, a.rate + b.rate, a.coef * b.coef});
    }
  }
  r.canonicalize();
  return r;
}

ExpPoly ExpPoly::operator*(double s) const
{
  ExpPoly r = *this;
  for (auto &t : r.terms_)
  {
    t.coef *= s;
  }
  r.canonicalize();
  return r;
}

double ExpPoly::integrate(double u) const
{
  double sum = 0.0;
  for (auto const &t : terms_)
  {
    sum += t.coef * integrate_exp_monomial(t.power, t.rate, u);
  }
  return sum;
}

double ExpPoly::integrate_weighted(double u) const
{
  double sum = 0.0;
  for (auto const &t : terms_)
  {
    sum += t.coef * integrate_exp_monomial(t.power + 1, t.rate, u);
  }
  return sum;
}

double ExpPoly::integrate_between(double a, double b) const
{
  double sum = 0.0;
  for (auto const &t : terms_)
  {
    sum += t.coef * integrate_exp_monomial_between(t.power, t.rate, a, b);
  }
  return sum;
}

double ExpPoly::integrate_weighted_between(double a, double b) const
{
  double sum = 0.0;
  for (auto const &t : terms_)
  {
    sum += t.coef * integrate_exp_monomial_between(t.power + 1, t.rate, a, b);
  }
  return sum;
}

double ExpPoly::limit_at_infinity() const
{
  double sum = 0.0;
  for (auto const &t : terms_)
  {
    if (t.rate < 0.0)
    {
      continue;
    }
    if (t.rate == 0.0 && t.power == 0)
    {
      sum += t.coef;
      continue;
    }
    throw InvalidArgument("expression has no finite limit at infinity: " + to_string());
  }
  return sum;
}

bool ExpPoly::decays(double tiny) const
{
  return std::all_of(terms_.begin(), terms_.end(), [tiny](Term const &t) {
    return t.rate < 0.0 || std::abs(t.coef) <= tiny;
  });
}

ExpPoly ExpPoly::pruned(double tiny) const
{
  ExpPoly r;
  for (auto const &t : terms_)
  {
    if (std::abs(t.coef) > tiny)
    {
      r.terms_.push_back(t);
    }
  }
  return r;
}

std::string ExpPoly::to_string() const
{
  if (terms_.empty())
  {
    return "0";
  }
  std::string out;
  for (auto const &t : terms_)
  {
    if (!out.empty())
    {
      out += " + ";
    }
    out += fmt::format("{:.6g}", t.coef);
    if (t.power > 0)
    {
      out += fmt::format("*u^{}", t.power);
    }
    if (t.rate != 0.0)
    {
      out += fmt::format("*exp({:.6g}u)", t.rate);
    }
  }
  return out;
}

void ExpPoly::canonicalize()
{
  std::sort(terms_.begin(), terms_.end(), [](Term const &a, Term const &b) {
    return a.rate != b.rate ? a.rate < b.rate : a.power < b.power;
  });
  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (auto const &t : terms_)
  {
    if (!merged.empty() && merged.back().rate == t.rate && merged.back().power == t.power)
    {
      merged.back().coef += t.coef;
    }
    else
    {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](Term const &t) { return t.coef == 0.0; });
  terms_ = std::move(merged);
}

}  // namespace bitrade
