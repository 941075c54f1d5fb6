// Copyright 2026 The bitrade Authors
// SPDX-License-Identifier: Apache-2.0

#include "bitrade/valuation.hpp"

#include "bitrade/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace bitrade {

DivisibleValuation DivisibleValuation::linear(double value)
{
  return DivisibleValuation(Kind::linear, {{0.0, 0.0}, {1.0, value}});
}

DivisibleValuation::DivisibleValuation(Kind kind, std::vector<Point> points)
  : kind_(kind)
  , points_(std::move(points))
{
  if (points_.empty() || points_.front().x != 0.0)
  {
    points_.insert(points_.begin(), Point{0.0, 0.0});
  }
  if (points_.front().v != 0.0)
  {
    throw InvalidArgument("valuation must satisfy v(0) = 0");
  }
  if (points_.back().x != 1.0)
  {
    throw InvalidArgument("valuation breakpoints must end at x = 1");
  }
  for (std::size_t i = 1; i < points_.size(); ++i)
  {
    auto const &a = points_[i - 1];
    auto const &b = points_[i];
    if (!(b.x > a.x))
    {
      throw InvalidArgument("valuation breakpoints must be strictly increasing in x");
    }
    if (!(b.v >= a.v) || !std::isfinite(b.v))
    {
      throw InvalidArgument(fmt::format("valuation must be nondecreasing; v({}) < v({})", b.x, a.x));
    }
  }
  if (kind_ == Kind::linear && points_.size() != 2)
  {
    throw InvalidArgument("a linear valuation has a single slope");
  }
  if (kind_ == Kind::concave)
  {
    for (std::size_t i = 2; i < points_.size(); ++i)
    {
      double const left  = (points_[i - 1].v - points_[i - 2].v) / (points_[i - 1].x - points_[i - 2].x);
      double const right = (points_[i].v - points_[i - 1].v) / (points_[i].x - points_[i - 1].x);
      if (right > left * (1.0 + 1e-12) + 1e-12)
      {
        throw InvalidArgument("concave valuation needs nonincreasing marginal values");
      }
    }
  }
}

double DivisibleValuation::operator()(double x) const
{
  x = std::clamp(x, 0.0, 1.0);
  auto it = std::lower_bound(points_.begin(), points_.end(), x,
                             [](Point const &p, double value) { return p.x < value; });
  if (it->x == x)
  {
    return it->v;
  }
  auto const &hi = *it;
  auto const &lo = *(it - 1);
  return lo.v + (hi.v - lo.v) * (x - lo.x) / (hi.x - lo.x);
}

bool DivisibleValuation::operator==(DivisibleValuation const &other) const
{
  if (kind_ != other.kind_ || points_.size() != other.points_.size())
  {
    return false;
  }
  for (std::size_t i = 0; i < points_.size(); ++i)
  {
    if (points_[i].x != other.points_[i].x || points_[i].v != other.points_[i].v)
    {
      return false;
    }
  }
  return true;
}

std::string to_string(DivisibleValuation::Kind kind)
{
  switch (kind)
  {
  case DivisibleValuation::Kind::linear:
    return "linear";
  case DivisibleValuation::Kind::monotone:
    return "monotone";
  case DivisibleValuation::Kind::concave:
    return "concave";
  }
  return "linear";
}

DivisibleValuation::Kind valuation_kind_from_string(std::string const &name)
{
  if (name == "linear")
  {
    return DivisibleValuation::Kind::linear;
  }
  if (name == "monotone")
  {
    return DivisibleValuation::Kind::monotone;
  }
  if (name == "concave")
  {
    return DivisibleValuation::Kind::concave;
  }
  throw InvalidArgument(fmt::format("unknown valuation kind '{}'", name));
}

void validate(ValuationDistribution const &d)
{
  if (d.empty())
  {
    throw InvalidArgument("valuation distribution is empty");
  }
  double total = 0.0;
  for (auto const &draw : d)
  {
    if (!(draw.probability >= 0.0))
    {
      throw InvalidArgument("valuation probabilities must be nonnegative");
    }
    total += draw.probability;
  }
  if (std::abs(total - 1.0) > 1e-12)
  {
    throw InvalidArgument(fmt::format("valuation probabilities sum to {}, not 1", total));
  }
}

}  // namespace bitrade
