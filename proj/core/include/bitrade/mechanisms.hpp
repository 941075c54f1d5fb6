// Copyright 2026 The bitrade Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "bitrade/distribution.hpp"

namespace bitrade {

/// Result of one bilateral trade. Payments are strongly budget balanced.
struct Outcome
{
  bool   traded                  = false;
  double seller_payment_received = 0.0;
  double buyer_payment_made      = 0.0;
  double allocation              = 0.0;  // fraction of the good held by the buyer afterwards
};

/// Trade iff b >= p and s <= p; both sides transact at p.
Outcome fixed_price_outcome(double p, double s, double b);

/// Posts one take-it-or-leave-it price that does not depend on the reports.
class FixedPriceMechanism
{
public:
  explicit FixedPriceMechanism(double price);

  double  price() const { return price_; }
  Outcome outcome(double s, double b) const { return fixed_price_outcome(price_, s, b); }

private:
  double price_;
};

/// Median of the seller distribution. Inside a flat CDF region at level 1/2
/// this is the right end of the region (for a two-cluster seller on
/// (0, e) and (1, 1 + e) the price is 1).
double median_price(Distribution const &seller);

/// Smallest W with E[b 1{b <= W}] >= E[b] / 2, i.e. the price that splits the
/// buyer's mean into equal halves above and below.
double weighted_median_price(Distribution const &buyer);

FixedPriceMechanism median_mechanism(Distribution const &seller);
FixedPriceMechanism weighted_median_mechanism(Distribution const &buyer);

/// CDF ln(e x) of the quantile level drawn on [1/e, 1]; its density is 1/x.
double random_quantile_price_cdf(double x);

/// Inverse of random_quantile_price_cdf: maps a uniform draw u to e^{u-1}.
double random_quantile_level(double u);

/// Posts the seller's x-quantile with x drawn from the 1/x density on [1/e, 1].
/// The uniform draw is an explicit argument so that every run is replayable.
class RandomQuantileMechanism
{
public:
  explicit RandomQuantileMechanism(Distribution seller);

  Distribution const &seller_distribution() const { return seller_; }

  double  price(double u) const;
  Outcome outcome(double s, double b, double u) const { return fixed_price_outcome(price(u), s, b); }

  /// The deterministic mechanism obtained by fixing the draw.
  FixedPriceMechanism freeze(double u) const { return FixedPriceMechanism(price(u)); }

private:
  Distribution seller_;
};

double random_quantile_sample(RandomQuantileMechanism const &m, double u);

}  // namespace bitrade
