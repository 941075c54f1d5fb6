// Copyright 2026 The bitrade Authors
// SPDX-License-Identifier: Apache-2.0

#include "bitrade/scenarios.hpp"

#include "bitrade/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace bitrade {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_epsilon(double epsilon)
{
  if (!(epsilon > 0.0 && epsilon < 1.0))
  {
    throw InvalidArgument(fmt::format("epsilon must lie in (0, 1), got {}", epsilon));
  }
}

struct Values
{
  double mech;
  double opt;
};

Values values_for(PriceRule const &rule, Distribution const &seller, Distribution const &buyer,
                  Objective objective)
{
  if (objective == Objective::welfare)
  {
    return {expected_welfare(rule, seller, buyer).value, optimal_welfare(seller, buyer)};
  }
  return {expected_gft(rule, seller, buyer).value, optimal_gft(seller, buyer)};
}

SweepRow row_for(double param, Values v)
{
  return {param, v.mech, v.opt, v.opt > 0.0 ? v.mech / v.opt : 1.0};
}

}  // namespace

Distribution prop31_seller_family(double epsilon)
{
  check_epsilon(epsilon);
  return Distribution({Segment::uniform(0.0, epsilon, 0.5), Segment::uniform(1.0, 1.0 + epsilon, 0.5)},
                      {});
}

Distribution prop31_buyer_family(double epsilon)
{
  check_epsilon(epsilon);
  return Distribution(
      {Segment::uniform(1.0, 1.0 + epsilon, 0.99), Segment::uniform(100.0, 100.0 + epsilon, 0.01)}, {});
}

BilateralPair mb_counterexample(double t, double epsilon)
{
  if (!(t > 1.0) || !std::isfinite(t))
  {
    throw InvalidArgument(fmt::format("t must exceed 1, got {}", t));
  }
  if (!(epsilon > 0.0 && epsilon < 0.5))
  {
    throw InvalidArgument(fmt::format("epsilon must lie in (0, 1/2), got {}", epsilon));
  }
  return {Distribution::point_mass(1.0),
          Distribution::discrete({{epsilon, 0.5 + epsilon}, {t, 0.5 - epsilon}})};
}

double gft_lambda(double t)
{
  if (!(t > 0.0) || !std::isfinite(t))
  {
    throw InvalidArgument(fmt::format("t must be positive, got {}", t));
  }
  return -1.0 / std::expm1(-t);
}

BilateralPair gft_family(double t)
{
  gft_lambda(t);
  return {Distribution({Segment::exponential(0.0, t, 1.0, 1.0)}, {}),
          Distribution({Segment::exponential(0.0, t, 1.0, -1.0)}, {})};
}

bool PriceCase::contains(double price) const
{
  bool const above = lo_closed ? price >= lo : price > lo;
  bool const below = hi_closed ? price <= hi : price < hi;
  return above && below;
}

std::vector<PriceCase> prop31_seller_cases(double epsilon)
{
  check_epsilon(epsilon);
  std::vector<PriceCase> cases;
  cases.push_back({"r <= 1", 0.0, 1.0, true, true, Distribution::point_mass(kHugeValue)});
  cases.push_back({"r > 1", 1.0, kInf, false, false, Distribution::point_mass(1.0 - epsilon)});
  return cases;
}

std::vector<PriceCase> prop31_buyer_cases(double epsilon)
{
  check_epsilon(epsilon);
  double const           top = 1.0 + epsilon;
  std::vector<PriceCase> cases;
  cases.push_back({"r < 1+eps", 0.0, top, true, false, Distribution::point_mass(top)});
  cases.push_back({"1+eps <= r <= 100+eps", top, 100.0 + epsilon, true, true,
                   Distribution::point_mass(0.0)});
  cases.push_back({"r > 100+eps", 100.0 + epsilon, kInf, false, false, Distribution::point_mass(0.0)});
  return cases;
}

std::vector<ScenarioInfo> const &scenario_list()
{
  static std::vector<ScenarioInfo> const list{
      {"prop31s", "epsilon", "two-cluster seller against point-mass buyers; seller-informed prices"},
      {"prop31b", "epsilon", "two-cluster buyer against point-mass sellers; buyer-informed prices"},
      {"mb", "t", "two-atom buyer and a unit seller; the buyer median never trades"},
      {"gft", "t", "exponential pair on [0, t]; fixed prices lose gain from trade like 1/t"},
  };
  return list;
}

PriceRule default_rule(std::string const &scenario)
{
  if (scenario == "prop31s")
  {
    return MedianRule{};
  }
  if (scenario == "prop31b")
  {
    return WeightedMedianRule{};
  }
  if (scenario == "mb")
  {
    return BuyerMedianRule{};
  }
  if (scenario == "gft")
  {
    return BestFixedRule{Objective::gft};
  }
  throw InvalidArgument(fmt::format("unknown scenario '{}'", scenario));
}

std::vector<SweepRow> sweep(std::string const &scenario, std::vector<double> params,
                            PriceRule const &rule, SweepOptions const &options)
{
  default_rule(scenario);
  std::sort(params.begin(), params.end());
  std::vector<SweepRow> rows;
  rows.reserve(params.size());
  for (double param : params)
  {
    if (scenario == "prop31s" || scenario == "prop31b")
    {
      bool const   seller_side = scenario == "prop31s";
      auto const   family = seller_side ? prop31_seller_family(param) : prop31_buyer_family(param);
      auto const   cases  = seller_side ? prop31_seller_cases(param) : prop31_buyer_cases(param);
      std::optional<SweepRow> worst;
      for (auto const &c : cases)
      {
        auto const &seller = seller_side ? family : c.counterpart;
        auto const &buyer  = seller_side ? c.counterpart : family;
        auto const  row    = row_for(param, values_for(rule, seller, buyer, options.objective));
        if (!worst || row.ratio < worst->ratio)
        {
          worst = row;
        }
      }
      rows.push_back(*worst);
    }
    else if (scenario == "mb")
    {
      auto const pair = mb_counterexample(param, options.epsilon);
      rows.push_back(row_for(param, values_for(rule, pair.seller, pair.buyer, options.objective)));
    }
    else
    {
      auto const pair = gft_family(param);
      Values     v    = values_for(rule, pair.seller, pair.buyer, options.objective);
      if (options.objective == Objective::gft)
      {
        v.opt = optimal_gft_exponential(param);
      }
      rows.push_back(row_for(param, v));
    }
  }
  return rows;
}

}  // namespace bitrade
