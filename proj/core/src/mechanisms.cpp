// Copyright 2026 The bitrade Authors
// SPDX-License-Identifier: Apache-2.0

#include "bitrade/mechanisms.hpp"

#include "bitrade/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

namespace bitrade {

Outcome fixed_price_outcome(double p, double s, double b)
{
  if (b >= p && s <= p)
  {
    return {true, p, p, 1.0};
  }
  return {};
}

FixedPriceMechanism::FixedPriceMechanism(double price)
  : price_(price)
{
  if (!(price >= 0.0) || std::isnan(price))
  {
    throw InvalidArgument(fmt::format("posted price must be nonnegative, got {}", price));
  }
}

double median_price(Distribution const &seller)
{
  return seller.upper_quantile(0.5);
}

double weighted_median_price(Distribution const &buyer)
{
  if (!(buyer.mean() > 0.0))
  {
    throw InvalidArgument("weighted median needs a buyer distribution with positive mean");
  }
  return buyer.expectation_quantile(0.5 * buyer.mean());
}

FixedPriceMechanism median_mechanism(Distribution const &seller)
{
  return FixedPriceMechanism(median_price(seller));
}

FixedPriceMechanism weighted_median_mechanism(Distribution const &buyer)
{
  return FixedPriceMechanism(weighted_median_price(buyer));
}

double random_quantile_price_cdf(double x)
{
  constexpr double lo = 1.0 / std::numbers::e;
  if (!(x >= lo - 1e-15 && x <= 1.0))
  {
    throw InvalidArgument(fmt::format("quantile level must lie in [1/e, 1], got {}", x));
  }
  return std::max(0.0, 1.0 + std::log(x));
}

double random_quantile_level(double u)
{
  if (!(u >= 0.0 && u <= 1.0))
  {
    throw InvalidArgument(fmt::format("uniform draw must lie in [0, 1], got {}", u));
  }
  return u == 1.0 ? 1.0 : std::exp(u - 1.0);
}

RandomQuantileMechanism::RandomQuantileMechanism(Distribution seller)
  : seller_(std::move(seller))
{}

double RandomQuantileMechanism::price(double u) const
{
  return seller_.quantile(random_quantile_level(u));
}

double random_quantile_sample(RandomQuantileMechanism const &m, double u)
{
  return m.price(u);
}

}  // namespace bitrade
