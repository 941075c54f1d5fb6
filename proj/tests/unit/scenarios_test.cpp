// Copyright 2026 The bitrade Authors
// SPDX-License-Identifier: Apache-2.0

#include "bitrade/error.hpp"
#include "bitrade/scenarios.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace bitrade {
namespace {

TEST(ScenariosTest, SellerFamily)
{
  double const eps = 0.01;
  auto const   d   = prop31_seller_family(eps);
  EXPECT_DOUBLE_EQ(d.cdf(eps), 0.5);
  EXPECT_DOUBLE_EQ(d.cdf(0.5), 0.5);
  EXPECT_DOUBLE_EQ(d.cdf(1.0 + eps), 1.0);
  EXPECT_EQ(median_price(d), 1.0);
  EXPECT_THROW(prop31_seller_family(0.0), InvalidArgument);
  EXPECT_THROW(prop31_seller_family(1.0), InvalidArgument);
}

TEST(ScenariosTest, BuyerFamily)
{
  double const eps = 0.01;
  auto const   d   = prop31_buyer_family(eps);
  EXPECT_NEAR(d.mean(), 0.99 * (1.0 + eps / 2) + 0.01 * (100.0 + eps / 2), 1e-12);
  EXPECT_NEAR(d.mean(), 1.99, 0.01);
  EXPECT_DOUBLE_EQ(d.cdf(50.0), 0.99);
  EXPECT_DOUBLE_EQ(d.cdf(100.0 + eps), 1.0);
  EXPECT_THROW(prop31_buyer_family(-0.5), InvalidArgument);
}

// For each posted price, the worst ratio over the adversarial responses that
// apply to it.
double worst_ratio(double price, Distribution const &informed, std::vector<PriceCase> const &cases,
                   bool informed_is_seller)
{
  double worst = 1.0;
  bool   found = false;
  for (auto const &c : cases)
  {
    if (!c.contains(price))
    {
      continue;
    }
    found                = true;
    Distribution const &s = informed_is_seller ? informed : c.counterpart;
    Distribution const &b = informed_is_seller ? c.counterpart : informed;
    worst = std::min(worst, fixed_price_welfare(price, s, b) / optimal_welfare(s, b));
  }
  EXPECT_TRUE(found) << price;
  return worst;
}

TEST(ScenariosTest, HalfBarrierForSellerInformedPrices)
{
  double const eps   = 1e-3;
  auto const   s     = prop31_seller_family(eps);
  auto const   cases = prop31_seller_cases(eps);
  std::vector<double> prices{0.0, eps, 1.0, std::nextafter(1.0, 2.0), 1.0 + eps, median_price(s)};
  for (int i = 0; i <= 4000; ++i)
  {
    prices.push_back(i * 0.001);
  }
  for (double p : prices)
  {
    EXPECT_LE(worst_ratio(p, s, cases, true), 0.5 + 0.01) << p;
  }
}

TEST(ScenariosTest, HalfBarrierForBuyerInformedPrices)
{
  double const eps   = 1e-3;
  auto const   b     = prop31_buyer_family(eps);
  auto const   cases = prop31_buyer_cases(eps);
  std::vector<double> prices{0.0, 1.0, 1.0 + eps, 100.0, 100.0 + eps, 150.0, weighted_median_price(b)};
  for (int i = 0; i <= 2100; ++i)
  {
    prices.push_back(i * 0.05);
  }
  for (double p : prices)
  {
    EXPECT_LE(worst_ratio(p, b, cases, false), 0.5 + 0.01) << p;
  }
}

TEST(ScenariosTest, PriceCasesCoverTheLine)
{
  auto const cases = prop31_buyer_cases(0.1);
  EXPECT_TRUE(cases[0].contains(0.0));
  EXPECT_FALSE(cases[0].contains(1.1));
  EXPECT_TRUE(cases[1].contains(1.1));
  EXPECT_TRUE(cases[1].contains(100.1));
  EXPECT_TRUE(cases[2].contains(100.2));
  EXPECT_FALSE(cases[2].contains(100.1));
  auto const seller = prop31_seller_cases(0.1);
  EXPECT_TRUE(seller[0].contains(1.0));
  EXPECT_TRUE(seller[1].contains(1.0000001));
  EXPECT_EQ(seller[0].counterpart.mean(), kHugeValue);
}

TEST(ScenariosTest, BuyerMedianCounterexample)
{
  double const eps = 0.01;
  for (double t : {2.0, 10.0, 100.0, 1000.0})
  {
    auto const   pair = mb_counterexample(t, eps);
    double const opt  = optimal_welfare(pair.seller, pair.buyer);
    EXPECT_NEAR(opt, (0.5 - eps) * t + (0.5 + eps), 1e-12 * t);
    double const price = posted_price(BuyerMedianRule{}, pair.seller, pair.buyer);
    EXPECT_EQ(price, eps);
    EXPECT_DOUBLE_EQ(fixed_price_welfare(price, pair.seller, pair.buyer), 1.0);
  }
  auto const big = mb_counterexample(1e6, eps);
  EXPECT_LT(1.0 / optimal_welfare(big.seller, big.buyer), 1e-5);
  EXPECT_THROW(mb_counterexample(1.0, eps), InvalidArgument);
  EXPECT_THROW(mb_counterexample(2.0, 0.5), InvalidArgument);
}

TEST(ScenariosTest, ExponentialFamily)
{
  double const t    = 10.0;
  auto const   pair = gft_family(t);
  double const l    = gft_lambda(t);
  EXPECT_NEAR(l, 1.0000454019910097, 1e-15);
  EXPECT_DOUBLE_EQ(pair.buyer.cdf(t), 1.0);
  EXPECT_DOUBLE_EQ(pair.seller.cdf(t), 1.0);
  for (double x : {0.5, 3.0, 7.5})
  {
    EXPECT_NEAR(pair.buyer.cdf(x), l * (1.0 - std::exp(-x)), 1e-14);
    EXPECT_NEAR(pair.seller.cdf(x), l * (std::exp(x - t) - std::exp(-t)), 1e-14);
  }
  EXPECT_NEAR(pair.buyer.mean(),
              oracle::gauss_legendre([&](double x) { return x * l * std::exp(-x); }, 0.0, t), 1e-12);
  EXPECT_THROW(gft_family(0.0), InvalidArgument);
}

TEST(ScenariosTest, FixedPriceGainKeepsRelativeAccuracy)
{
  // The gain at t = 20 is about 4e-9 against values near 19, so it must not
  // be formed as welfare minus E[s].
  double const t    = 20.0;
  auto const   pair = gft_family(t);
  double const l    = gft_lambda(t);
  for (double p : {0.5, 9.0, 10.0, 19.5})
  {
    double const want = oracle::integral_2d(
        [&](double s, double b) { return (b - s) * l * std::exp(s - t) * l * std::exp(-b); }, 0.0, p,
        [&](double) { return p; }, [&](double) { return t; }, 64);
    EXPECT_NEAR(fixed_price_gft(p, pair.seller, pair.buyer), want, 1e-9 * want) << p;
  }
  EXPECT_NEAR(expected_gft(MedianRule{}, pair.seller, pair.buyer).value,
              fixed_price_gft(median_price(pair.seller), pair.seller, pair.buyer), 0.0);
}

TEST(ScenariosTest, BestPriceFindsTinyGains)
{
  // The gain is symmetric about t / 2 and peaks there.
  for (double t : {20.0, 30.0, 40.0})
  {
    auto const pair   = gft_family(t);
    auto const choice = best_fixed_price(pair.seller, pair.buyer, Objective::gft);
    double const peak = gft_at_price_exponential(0.5 * t, t);
    EXPECT_NEAR(choice.price, 0.5 * t, 0.01) << t;  // flat peak, smallest tied price wins
    EXPECT_NEAR(choice.value, peak, 1e-9 * peak) << t;
  }
}

TEST(ScenariosTest, GainFromTradeDecays)
{
  auto ratio = [](double t) {
    auto const pair = gft_family(t);
    return best_fixed_price(pair.seller, pair.buyer, Objective::gft).value / optimal_gft(pair.seller, pair.buyer);
  };
  EXPECT_GE(ratio(10.0) / ratio(20.0), 1.8);
}

TEST(ScenariosTest, Registry)
{
  std::vector<std::string> names;
  for (auto const &info : scenario_list())
  {
    names.push_back(info.name);
    EXPECT_NO_THROW(default_rule(info.name));
  }
  EXPECT_EQ(names, (std::vector<std::string>{"prop31s", "prop31b", "mb", "gft"}));
  EXPECT_THROW(default_rule("nope"), InvalidArgument);
  EXPECT_EQ(rule_name(default_rule("mb")), "buyer_median");
}

TEST(ScenariosTest, SweepRows)
{
  auto const rows = sweep("prop31s", {0.001, 0.1, 0.01}, default_rule("prop31s"), {});
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].param, 0.001);
  EXPECT_EQ(rows[2].param, 0.1);
  for (std::size_t i = 0; i < rows.size(); ++i)
  {
    EXPECT_NEAR(rows[i].ratio, rows[i].mech_value / rows[i].opt_value, 1e-15);
  }
  EXPECT_LE(std::abs(rows[0].ratio - 0.5), std::abs(rows[2].ratio - 0.5));
  EXPECT_NEAR(rows[0].ratio, 0.5, 1e-3);

  SweepOptions gft;
  gft.objective = Objective::gft;
  auto const g  = sweep("gft", {5, 10, 15, 20}, default_rule("gft"), gft);
  for (std::size_t i = 0; i < g.size(); ++i)
  {
    EXPECT_GT(g[i].param * g[i].ratio, 1.5);
    EXPECT_LT(g[i].param * g[i].ratio, 3.0);
    if (i > 0)
    {
      EXPECT_LT(g[i].ratio, g[i - 1].ratio);
    }
  }

  auto const mb = sweep("mb", {10, 100, 1000}, default_rule("mb"), {});
  EXPECT_GT(mb[0].ratio, mb[1].ratio);
  EXPECT_GT(mb[1].ratio, mb[2].ratio);
  EXPECT_LT(mb[2].ratio, 0.01);

  EXPECT_TRUE(sweep("gft", {}, default_rule("gft"), gft).empty());
  EXPECT_THROW(sweep("nope", {1.0}, MedianRule{}, {}), InvalidArgument);
}

}  // namespace
}  // namespace bitrade
