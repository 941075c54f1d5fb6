// Copyright 2026 The bitrade Authors
// SPDX-License-Identifier: Apache-2.0

#include "bitrade/error.hpp"
#include "bitrade/reductions.hpp"
#include "generators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

namespace bitrade {
namespace {

using Kind = DivisibleValuation::Kind;

constexpr double kRq = 1.0 - 0.36787944117144233;

double sum(std::vector<double> const &xs)
{
  return std::accumulate(xs.begin(), xs.end(), 0.0);
}

double abs_sum(std::vector<double> const &xs)
{
  double t = 0.0;
  for (double x : xs)
  {
    t += std::abs(x);
  }
  return t;
}

TEST(SingleSellerRoundTest, SellsToHighestOtherAtSecondPrice)
{
  std::vector<double> const shares{1.0 / 3, 1.0 / 3, 1.0 / 3};
  std::vector<double> const reports{1.0, 5.0, 4.0};
  auto const                out = single_seller_round(0, shares, reports, 2.0);
  EXPECT_DOUBLE_EQ(out.final_shares[0], 0.0);
  EXPECT_DOUBLE_EQ(out.final_shares[1], 2.0 / 3);
  EXPECT_DOUBLE_EQ(out.final_shares[2], 1.0 / 3);
  EXPECT_DOUBLE_EQ(out.net_transfers[0], 4.0 / 3);
  EXPECT_DOUBLE_EQ(out.net_transfers[1], -4.0 / 3);
  EXPECT_EQ(out.net_transfers[2], 0.0);
}

TEST(SingleSellerRoundTest, NoTradeWhenSellerValueExceedsPrice)
{
  std::vector<double> const shares{0.5, 0.25, 0.25};
  std::vector<double> const reports{6.0, 5.0, 4.0};
  auto const                out = single_seller_round(0, shares, reports, 2.0);
  EXPECT_EQ(out.final_shares, shares);
  EXPECT_EQ(out.net_transfers, (std::vector<double>{0.0, 0.0, 0.0}));
}

TEST(SingleSellerRoundTest, TwoPlayersReduceToFixedPrice)
{
  gen::Engine e(3);
  for (int trial = 0; trial < 2000; ++trial)
  {
    double const              p = gen::uniform(e, 0.0, 1.0);
    double const              s = std::round(gen::uniform(e, 0.0, 1.0) * 8) / 8;
    double const              b = std::round(gen::uniform(e, 0.0, 1.0) * 8) / 8;
    std::vector<double> const shares{1.0, 0.0};
    std::vector<double> const reports{s, b};
    auto const                out = single_seller_round(0, shares, reports, p);
    auto const                ref = fixed_price_outcome(p, s, b);
    EXPECT_EQ(out.final_shares[1], ref.allocation);
    EXPECT_EQ(out.net_transfers[0], ref.seller_payment_received);
    EXPECT_EQ(out.net_transfers[1], -ref.buyer_payment_made);
  }
}

TEST(SingleSellerRoundTest, RejectsBadArguments)
{
  std::vector<double> const one{1.0};
  std::vector<double> const two{0.5, 0.5};
  EXPECT_THROW(single_seller_round(0, one, one, 0.0), InvalidArgument);
  EXPECT_THROW(single_seller_round(2, two, two, 0.0), InvalidArgument);
  EXPECT_THROW(single_seller_round(0, two, one, 0.0), InvalidArgument);
}

PartnershipInstance uniform_grid_instance(std::vector<double> shares)
{
  auto const grid = Distribution::discrete({{0.0, 0.2}, {0.25, 0.2}, {0.5, 0.2}, {0.75, 0.2}, {1.0, 0.2}});
  return {shares, std::vector<Distribution>(shares.size(), grid)};
}

TEST(PartnershipTest, InstanceValidation)
{
  auto inst = uniform_grid_instance({0.5, 0.3, 0.2});
  EXPECT_NO_THROW(inst.validate());
  EXPECT_DOUBLE_EQ(inst.r_max(), 0.5);
  EXPECT_THROW(uniform_grid_instance({1.0}).validate(), InvalidArgument);
  EXPECT_THROW(uniform_grid_instance({0.5, 0.4}).validate(), InvalidArgument);
  EXPECT_THROW(uniform_grid_instance({1.2, -0.2}).validate(), InvalidArgument);
  inst.values.pop_back();
  EXPECT_THROW(inst.validate(), InvalidArgument);
}

TEST(PartnershipTest, ExtremeOwnershipIsBilateralTrade)
{
  auto const                 inst = uniform_grid_instance({1.0, 0.0});
  PartnershipDissolver const dissolve(inst, MedianRule{});
  double const               p = median_price(inst.values[0]);
  EXPECT_EQ(dissolve.base_prices()[0], p);
  for (auto const &s : inst.values[0].atoms())
  {
    for (auto const &b : inst.values[1].atoms())
    {
      std::vector<double> const reports{s.at, b.at};
      auto const                out = dissolve(reports);
      auto const                ref = fixed_price_outcome(p, s.at, b.at);
      EXPECT_EQ(out.final_shares[1], ref.allocation);
      EXPECT_EQ(out.net_transfers[0], ref.seller_payment_received);
    }
  }
  auto const w = expected_partnership_welfare(inst, MedianRule{});
  EXPECT_NEAR(w.mechanism, fixed_price_welfare(p, inst.values[0], inst.values[1]), 1e-15);
}

TEST(PartnershipTest, CommonValuesKeepWelfare)
{
  PartnershipInstance const inst{{1.0 / 3, 1.0 / 3, 1.0 / 3},
                                 std::vector<Distribution>(3, Distribution::point_mass(2.0))};
  std::vector<double> const reports{2.0, 2.0, 2.0};
  auto const                out = dissolve_partnership(inst, MedianRule{}, reports);
  double                    welfare = 0.0;
  for (std::size_t k = 0; k < 3; ++k)
  {
    welfare += out.final_shares[k] * reports[k];
  }
  EXPECT_NEAR(welfare, 2.0, 1e-15);
  auto const w = expected_partnership_welfare(inst, MedianRule{});
  EXPECT_NEAR(w.mechanism, 2.0, 1e-15);
  EXPECT_NEAR(w.optimum, 2.0, 1e-15);
}

TEST(PartnershipTest, SkipsPlayersWithoutShares)
{
  auto const                inst = uniform_grid_instance({0.0, 1.0, 0.0});
  std::vector<double> const reports{1.0, 0.0, 0.75};
  auto const                out = dissolve_partnership(inst, FixedRule{0.5}, reports);
  EXPECT_EQ(out.final_shares, (std::vector<double>{1.0, 0.0, 0.0}));
  EXPECT_DOUBLE_EQ(out.net_transfers[1], 0.75);
  EXPECT_DOUBLE_EQ(out.net_transfers[0], -0.75);
}

PartnershipInstance random_instance(gen::Engine &e, int n)
{
  PartnershipInstance inst;
  inst.shares = gen::simplex(e, static_cast<std::size_t>(n));
  double const total = sum(inst.shares);
  inst.shares.back() += 1.0 - total;
  for (int k = 0; k < n; ++k)
  {
    inst.values.push_back(Distribution::discrete(gen::atoms(e, gen::integer(e, 1, 4), 4.0)));
  }
  return inst;
}

class PartnershipProperty : public ::testing::TestWithParam<int>
{};

TEST_P(PartnershipProperty, BalancedRationalAndAboveFloor)
{
  gen::Engine e(900u + static_cast<std::uint64_t>(GetParam()));
  int const   n    = gen::integer(e, 2, 4);
  auto const  inst = random_instance(e, n);

  for (PriceRule const rule : {PriceRule{MedianRule{}}, PriceRule{WeightedMedianRule{}}})
  {
    PartnershipDissolver const dissolve(inst, rule);
    double                     expected = 0.0;
    std::vector<std::size_t>   index(static_cast<std::size_t>(n), 0);
    std::vector<double>        reports(static_cast<std::size_t>(n));
    while (true)
    {
      double prob = 1.0;
      for (int k = 0; k < n; ++k)
      {
        auto const &atom = inst.values[k].atoms()[index[k]];
        reports[k]       = atom.at;
        prob *= atom.mass;
      }
      auto const out = dissolve(reports);
      EXPECT_NEAR(sum(out.final_shares), 1.0, 1e-12);
      EXPECT_LE(std::abs(sum(out.net_transfers)), 1e-12 * std::max(1.0, abs_sum(out.net_transfers)));
      double welfare = 0.0;
      for (int k = 0; k < n; ++k)
      {
        EXPECT_GE(out.final_shares[k], -1e-15);
        double const utility = out.final_shares[k] * reports[k] + out.net_transfers[k];
        EXPECT_GE(utility, inst.shares[k] * reports[k] - 1e-12);
        welfare += out.final_shares[k] * reports[k];
      }
      expected += prob * welfare;

      int k = 0;
      while (k < n && ++index[k] == inst.values[k].atoms().size())
      {
        index[k++] = 0;
      }
      if (k == n)
      {
        break;
      }
    }
    auto const w = expected_partnership_welfare(inst, rule);
    EXPECT_NEAR(w.mechanism, expected, 1e-12);
    EXPECT_GE(w.mechanism, w.alpha * w.optimum - 1e-12);
    EXPECT_GE(w.alpha, 0.5 - 1e-12);
  }

  auto const rq = expected_partnership_welfare(inst, RandomQuantileRule{});
  EXPECT_GE(rq.alpha, kRq - 1e-9);
  EXPECT_GE(rq.mechanism, rq.alpha * rq.optimum - 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Seeds, PartnershipProperty, ::testing::Range(1, 31));

TEST(PartnershipTest, WelfareNeedsAtomicValues)
{
  PartnershipInstance const inst{{0.5, 0.5}, {Distribution::uniform(0, 1), Distribution::uniform(0, 1)}};
  EXPECT_THROW(expected_partnership_welfare(inst, MedianRule{}), InvalidArgument);
}

// ---------------------------------------------------------------------------
// Divisible goods

TEST(MonotoneReductionTest, AllOrNothingTrade)
{
  auto const s   = DivisibleValuation::linear(0.3);
  auto const b   = DivisibleValuation::linear(0.8);
  auto const out = monotone_divisible_mechanism(s, b, 0.5);
  EXPECT_EQ(out.final_shares, (std::vector<double>{0.0, 1.0}));
  EXPECT_EQ(out.net_transfers, (std::vector<double>{0.5, -0.5}));

  auto const keep = monotone_divisible_mechanism(DivisibleValuation::linear(0.6), b, 0.5);
  EXPECT_EQ(keep.final_shares, (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(keep.net_transfers, (std::vector<double>{0.0, 0.0}));
}

TEST(ConvexReductionTest, GrantSize)
{
  double const alpha = 1.0 - std::exp(-1.0);
  EXPECT_NEAR(convex_grant(alpha), 0.38730016321971796, 1e-15);
  EXPECT_DOUBLE_EQ(convex_grant(1.0), 0.5);
  EXPECT_THROW(convex_grant(0.0), InvalidArgument);
  EXPECT_THROW(convex_grant(1.5), InvalidArgument);
  EXPECT_EQ(convex_seller({1.0, 0.0}, 0.4), 0u);
  EXPECT_EQ(convex_seller({0.3, 0.7}, 0.4), 1u);
}

TEST(ConvexReductionTest, LinearValuationsMatchPartnershipRound)
{
  double const g = convex_grant(1.0 - std::exp(-1.0));
  gen::Engine  e(11);
  for (int trial = 0; trial < 500; ++trial)
  {
    double const a = gen::uniform(e, 0.0, 2.0);
    double const b = gen::uniform(e, 0.0, 2.0);
    double const p = gen::uniform(e, 0.0, 1.5);
    auto const   out =
        convex_divisible_mechanism({DivisibleValuation::linear(a), DivisibleValuation::linear(b)}, 0, g, p);
    std::vector<double> const shares{1.0, 0.0};
    std::vector<double> const lot_reports{a * (1.0 - g), b * (1.0 - g)};
    auto const                ref = single_seller_round(0, shares, lot_reports, p);
    EXPECT_DOUBLE_EQ(out.final_shares[1], (1.0 - g) * ref.final_shares[1]);
    EXPECT_DOUBLE_EQ(out.final_shares[0], 1.0 - out.final_shares[1]);
    EXPECT_EQ(out.net_transfers[0], ref.net_transfers[0]);
    EXPECT_EQ(out.net_transfers[1], ref.net_transfers[1]);
  }
}

TEST(DivisibleReductionTest, RejectsMismatchedInputs)
{
  ValuationDistribution const lin{{DivisibleValuation::linear(1.0), 1.0}};
  ValuationDistribution const mono{{DivisibleValuation(Kind::monotone, {{0.5, 0.0}, {1.0, 1.0}}), 1.0}};
  using R = DivisibleReduction;
  EXPECT_THROW(R(R::Kind::monotone, {0.5, 0.5}, {lin, lin}, MedianRule{}, 0.5), InvalidArgument);
  EXPECT_THROW(R(R::Kind::convex, {1.0, 0.0}, {mono, lin}, MedianRule{}, 0.5), InvalidArgument);
  EXPECT_THROW(R(R::Kind::convex, {1.0, 0.0}, {lin, lin}, MedianRule{}, 0.0), InvalidArgument);
  EXPECT_THROW(R(R::Kind::convex, {1.0, 0.0}, {lin, {}}, MedianRule{}, 0.5), InvalidArgument);
  R const randomized(R::Kind::convex, {1.0, 0.0}, {lin, lin}, RandomQuantileRule{}, 0.5);
  EXPECT_NO_THROW(randomized.lottery());
}

ValuationDistribution random_valuations(gen::Engine &e, bool allow_monotone)
{
  int const             count = gen::integer(e, 1, 3);
  auto const            probs = gen::simplex(e, static_cast<std::size_t>(count));
  ValuationDistribution out;
  for (int i = 0; i < count; ++i)
  {
    int const kind = gen::integer(e, 0, allow_monotone ? 2 : 1);
    if (kind == 0)
    {
      out.push_back({DivisibleValuation::linear(gen::uniform(e, 0.0, 3.0)), probs[i]});
    }
    else if (kind == 1)
    {
      double const s1 = gen::uniform(e, 0.0, 4.0);
      double const s2 = gen::uniform(e, 0.0, s1);
      double const x  = gen::uniform(e, 0.1, 0.9);
      out.push_back({DivisibleValuation(Kind::concave, {{x, s1 * x}, {1.0, s1 * x + s2 * (1.0 - x)}}),
                     probs[i]});
    }
    else
    {
      double const x = gen::uniform(e, 0.1, 0.9);
      double const v = gen::uniform(e, 0.0, 1.0);
      out.push_back({DivisibleValuation(Kind::monotone, {{x, v}, {1.0, v + gen::uniform(e, 0.0, 2.0)}}),
                     probs[i]});
    }
  }
  double total = 0.0;
  for (auto const &d : out)
  {
    total += d.probability;
  }
  out.back().probability += 1.0 - total;
  return out;
}

class DivisibleProperty : public ::testing::TestWithParam<int>
{};

TEST_P(DivisibleProperty, ReductionsMeetTheirFloors)
{
  gen::Engine  e(1300u + static_cast<std::uint64_t>(GetParam()));
  double const alpha = 1.0 - std::exp(-1.0);
  using R            = DivisibleReduction;

  R const mono(R::Kind::monotone, {1.0, 0.0}, {random_valuations(e, true), random_valuations(e, true)},
               RandomQuantileRule{}, alpha);
  auto const wm = expected_divisible_welfare(mono);
  EXPECT_GE(wm.mechanism, wm.bound * wm.optimum - 1e-9);

  std::array<double, 2> const shares = GetParam() % 2 == 0 ? std::array<double, 2>{1.0, 0.0}
                                                           : std::array<double, 2>{0.25, 0.75};
  R const convex(R::Kind::convex, shares, {random_valuations(e, false), random_valuations(e, false)},
                 RandomQuantileRule{}, alpha);
  auto const wc = expected_divisible_welfare(convex);
  EXPECT_GE(wc.mechanism, wc.bound * wc.optimum - 1e-9);
  EXPECT_NEAR(wc.bound, 0.38730016321971796, 1e-15);

  for (auto const &a : convex.valuations()[0])
  {
    for (auto const &b : convex.valuations()[1])
    {
      for (auto const &pp : convex.lottery())
      {
        auto const out = convex.outcome_at(pp.price, {a.valuation, b.valuation});
        EXPECT_EQ(out.net_transfers[0] + out.net_transfers[1], 0.0);
        EXPECT_DOUBLE_EQ(out.final_shares[0] + out.final_shares[1], 1.0);
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, DivisibleProperty, ::testing::Range(1, 31));

TEST(DivisibleReductionTest, OptimumGridOracle)
{
  ValuationDistribution const a{{DivisibleValuation(Kind::concave, {{0.5, 1.0}, {1.0, 1.0}}), 1.0}};
  ValuationDistribution const b{{DivisibleValuation(Kind::concave, {{0.5, 1.0}, {1.0, 1.0}}), 1.0}};
  EXPECT_DOUBLE_EQ(optimal_divisible_welfare({a, b}), 2.0);
  EXPECT_DOUBLE_EQ(optimal_divisible_welfare({a, b}, 1), 1.0);
  EXPECT_THROW(optimal_divisible_welfare({a, b}, 0), InvalidArgument);
}

}  // namespace
}  // namespace bitrade
