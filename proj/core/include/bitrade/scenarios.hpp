// Copyright 2026 The bitrade Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "bitrade/distribution.hpp"
#include "bitrade/evaluation.hpp"

#include <string>
#include <vector>

namespace bitrade {

struct BilateralPair
{
  Distribution seller;
  Distribution buyer;
};

/// Uniform on (0, eps) and on (1, 1 + eps), each with probability 1/2.
Distribution prop31_seller_family(double epsilon);

/// Uniform on (1, 1 + eps) with probability 0.99 and on (100, 100 + eps) with 0.01.
Distribution prop31_buyer_family(double epsilon);

/// Buyer: eps with probability 1/2 + eps, t with probability 1/2 - eps.
/// Seller: point mass at 1.
BilateralPair mb_counterexample(double t, double epsilon);

/// 1 / (1 - e^{-t}).
double gft_lambda(double t);

/// Seller density lambda e^{x - t}, buyer density lambda e^{-x}, both on [0, t].
BilateralPair gft_family(double t);

/// A range of posted prices together with the point-mass counterpart that
/// defeats every price in it.
struct PriceCase
{
  std::string  label;
  double       lo;
  double       hi;  // may be +inf
  bool         lo_closed;
  bool         hi_closed;
  Distribution counterpart;

  bool contains(double price) const;
};

/// Buyer responses to a price posted for prop31_seller_family.
std::vector<PriceCase> prop31_seller_cases(double epsilon);

/// Seller responses to a price posted for prop31_buyer_family.
std::vector<PriceCase> prop31_buyer_cases(double epsilon);

/// Large finite stand-in for an unboundedly valuable buyer.
inline constexpr double kHugeValue = 1e6;

struct ScenarioInfo
{
  std::string name;
  std::string parameter;
  std::string description;
};

std::vector<ScenarioInfo> const &scenario_list();

/// Rule a sweep uses when none is given.
PriceRule default_rule(std::string const &scenario);

struct SweepRow
{
  double param;
  double mech_value;
  double opt_value;
  double ratio;
};

struct SweepOptions
{
  Objective objective = Objective::welfare;
  double    epsilon   = 0.01;  // fixed eps for mb
};

/// One row per parameter, sorted by parameter. For the prop31 families the
/// row reports the counterpart with the lowest ratio.
std::vector<SweepRow> sweep(std::string const &scenario, std::vector<double> params,
                            PriceRule const &rule, SweepOptions const &options);

}  // namespace bitrade
