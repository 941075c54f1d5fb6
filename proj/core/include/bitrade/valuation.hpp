// Copyright 2026 The bitrade Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "bitrade/distribution.hpp"

#include <string>
#include <vector>

namespace bitrade {

/**
 * A valuation v: [0, 1] -> value for holding a fraction of a divisible good,
 * piecewise linear through its breakpoints. Always normalized (v(0) = 0) and
 * nondecreasing.
 */
class DivisibleValuation
{
public:
  enum class Kind
  {
    linear,
    monotone,
    concave,
  };

  struct Point
  {
    double x;
    double v;
  };

  /// v(x) = value * x.
  static DivisibleValuation linear(double value);

  /// Interpolates `points`; an implicit (0, 0) is added when missing and the
  /// last point must sit at x = 1. Concave valuations also need nonincreasing
  /// slopes.
  DivisibleValuation(Kind kind, std::vector<Point> points);

  double operator()(double x) const;

  /// v(x + y) - v(y).
  double marginal(double x, double y) const { return (*this)(x + y) - (*this)(y); }

  /// v(1), the value for the whole good.
  double full_value() const { return points_.back().v; }

  Kind                      kind() const { return kind_; }
  std::vector<Point> const &points() const { return points_; }

  bool operator==(DivisibleValuation const &other) const;

private:
  Kind               kind_;
  std::vector<Point> points_;
};

std::string              to_string(DivisibleValuation::Kind kind);
DivisibleValuation::Kind valuation_kind_from_string(std::string const &name);

/// A random valuation: finitely many valuations with probabilities.
struct ValuationDraw
{
  DivisibleValuation valuation;
  double             probability;
};

using ValuationDistribution = std::vector<ValuationDraw>;

/// Checks probabilities are nonnegative and sum to 1 within 1e-12.
void validate(ValuationDistribution const &d);

/// Distribution of f(v) for v drawn from `d`.
template <class F>
Distribution induced_distribution(ValuationDistribution const &d, F &&f)
{
  std::vector<Atom> atoms;
  atoms.reserve(d.size());
  for (auto const &draw : d)
  {
    atoms.push_back({f(draw.valuation), draw.probability});
  }
  return Distribution::discrete(std::move(atoms));
}

}  // namespace bitrade
