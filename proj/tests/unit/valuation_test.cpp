// Copyright 2026 The bitrade Authors
// SPDX-License-Identifier: Apache-2.0

#include "bitrade/error.hpp"
#include "bitrade/valuation.hpp"
#include "generators.hpp"

#include <gtest/gtest.h>

namespace bitrade {
namespace {

using Kind = DivisibleValuation::Kind;

TEST(ValuationTest, LinearValuation)
{
  auto const v = DivisibleValuation::linear(3.0);
  EXPECT_EQ(v.kind(), Kind::linear);
  EXPECT_DOUBLE_EQ(v(0.5), 1.5);
  EXPECT_DOUBLE_EQ(v.full_value(), 3.0);
  EXPECT_DOUBLE_EQ(v(-1.0), 0.0);
  EXPECT_DOUBLE_EQ(v(2.0), 3.0);
  EXPECT_DOUBLE_EQ(v.marginal(0.25, 0.5), 0.75);
}

TEST(ValuationTest, PiecewiseInterpolation)
{
  DivisibleValuation const v(Kind::monotone, {{0.5, 0.0}, {1.0, 4.0}});
  EXPECT_DOUBLE_EQ(v(0.0), 0.0);
  EXPECT_DOUBLE_EQ(v(0.25), 0.0);
  EXPECT_DOUBLE_EQ(v(0.75), 2.0);
  ASSERT_EQ(v.points().size(), 3u);
  EXPECT_EQ(v.points().front().x, 0.0);

  DivisibleValuation const c(Kind::concave, {{0.5, 3.0}, {1.0, 4.0}});
  EXPECT_DOUBLE_EQ(c(0.25), 1.5);
  EXPECT_DOUBLE_EQ(c.marginal(0.5, 0.5), 1.0);
  EXPECT_TRUE(c == DivisibleValuation(Kind::concave, {{0.0, 0.0}, {0.5, 3.0}, {1.0, 4.0}}));
}

TEST(ValuationTest, RejectsMalformedValuations)
{
  EXPECT_THROW(DivisibleValuation(Kind::monotone, {{0.5, 1.0}}), InvalidArgument);
  EXPECT_THROW(DivisibleValuation(Kind::monotone, {{0.0, 1.0}, {1.0, 2.0}}), InvalidArgument);
  EXPECT_THROW(DivisibleValuation(Kind::monotone, {{0.5, 2.0}, {1.0, 1.0}}), InvalidArgument);
  EXPECT_THROW(DivisibleValuation(Kind::monotone, {{0.5, 1.0}, {0.5, 2.0}, {1.0, 3.0}}),
               InvalidArgument);
  EXPECT_THROW(DivisibleValuation(Kind::concave, {{0.5, 1.0}, {1.0, 4.0}}), InvalidArgument);
  EXPECT_THROW(DivisibleValuation(Kind::linear, {{0.5, 1.0}, {1.0, 2.0}}), InvalidArgument);
}

TEST(ValuationTest, KindNamesRoundTrip)
{
  for (Kind k : {Kind::linear, Kind::monotone, Kind::concave})
  {
    EXPECT_EQ(valuation_kind_from_string(to_string(k)), k);
  }
  EXPECT_THROW(valuation_kind_from_string("convex"), InvalidArgument);
}

TEST(ValuationTest, DistributionValidationAndInducedValues)
{
  ValuationDistribution const d{{DivisibleValuation::linear(1.0), 0.25},
                                {DivisibleValuation::linear(3.0), 0.75}};
  EXPECT_NO_THROW(validate(d));
  auto const half = induced_distribution(d, [](DivisibleValuation const &v) { return v(0.5); });
  EXPECT_DOUBLE_EQ(half.mean(), 0.25 * 0.5 + 0.75 * 1.5);
  EXPECT_DOUBLE_EQ(half.cdf(0.5), 0.25);

  EXPECT_THROW(validate({}), InvalidArgument);
  EXPECT_THROW(validate({{DivisibleValuation::linear(1.0), 0.5}}), InvalidArgument);
  EXPECT_THROW(validate({{DivisibleValuation::linear(1.0), 1.5}, {DivisibleValuation::linear(1.0), -0.5}}),
               InvalidArgument);
}

DivisibleValuation random_concave(gen::Engine &e)
{
  int const           pieces = gen::integer(e, 1, 5);
  auto const          widths = gen::simplex(e, static_cast<std::size_t>(pieces));
  std::vector<double> slopes;
  for (int i = 0; i < pieces; ++i)
  {
    slopes.push_back(gen::uniform(e, 0.0, 5.0));
  }
  std::sort(slopes.rbegin(), slopes.rend());
  std::vector<DivisibleValuation::Point> pts;
  double                                 x = 0.0, v = 0.0;
  for (int i = 0; i < pieces; ++i)
  {
    x = i + 1 == pieces ? 1.0 : x + widths[i];
    v += slopes[i] * widths[i];
    pts.push_back({x, v});
  }
  return DivisibleValuation(Kind::concave, pts);
}

TEST(ValuationTest, ConcaveMarginalsDecreaseProperty)
{
  gen::Engine e(77);
  for (int trial = 0; trial < 200; ++trial)
  {
    auto const   v   = random_concave(e);
    double const eps = 1e-3;
    double       last = v.marginal(eps, 0.0);
    for (int k = 1; k < 999; ++k)
    {
      double const m = v.marginal(eps, k * 1e-3);
      EXPECT_LE(m, last + 1e-12);
      EXPECT_GE(m, -1e-12);
      last = m;
    }
    EXPECT_EQ(v(0.0), 0.0);
  }
}

}  // namespace
}  // namespace bitrade
