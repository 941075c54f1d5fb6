// Copyright 2026 The bitrade Authors
// SPDX-License-Identifier: Apache-2.0

#include "bitrade/reductions.hpp"

#include "bitrade/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bitrade {

namespace {

constexpr double kMaxProfiles = 1e7;

void check_reports(std::size_t n, std::size_t got)
{
  if (got != n)
  {
    throw InvalidArgument(fmt::format("expected {} reports, got {}", n, got));
  }
}

Distribution lot_distribution(ValuationDistribution const &d, double lo_fraction, double hi_fraction)
{
  return induced_distribution(d, [&](DivisibleValuation const &v) {
    return std::max(0.0, v(hi_fraction) - v(lo_fraction));
  });
}

}  // namespace

double PartnershipInstance::r_max() const
{
  return shares.empty() ? 0.0 : *std::max_element(shares.begin(), shares.end());
}

void PartnershipInstance::validate() const
{
  if (shares.size() < 2)
  {
    throw InvalidArgument("a partnership needs at least two players");
  }
  if (values.size() != shares.size())
  {
    throw InvalidArgument(
        fmt::format("{} shares but {} value distributions", shares.size(), values.size()));
  }
  double total = 0.0;
  for (double r : shares)
  {
    if (!(r >= 0.0))
    {
      throw InvalidArgument("shares must be nonnegative");
    }
    total += r;
  }
  if (std::abs(total - 1.0) > 1e-12)
  {
    throw InvalidArgument(fmt::format("shares sum to {}, not 1", total));
  }
}

Distribution others_max(PartnershipInstance const &instance, std::size_t i)
{
  std::vector<Distribution> others;
  for (std::size_t k = 0; k < instance.size(); ++k)
  {
    if (k != i)
    {
      others.push_back(instance.values[k]);
    }
  }
  return max_of(others);
}

ReductionOutcome single_seller_round(std::size_t i, std::span<double const> shares,
                                     std::span<double const> reports, double base_price)
{
  std::size_t const n = shares.size();
  if (n < 2)
  {
    throw InvalidArgument("a round needs at least two players");
  }
  check_reports(n, reports.size());
  if (i >= n)
  {
    throw InvalidArgument(fmt::format("seller index {} out of range", i));
  }

  std::size_t j = i == 0 ? 1 : 0;
  for (std::size_t k = 0; k < n; ++k)
  {
    if (k != i && reports[k] > reports[j])
    {
      j = k;
    }
  }
  double m2 = 0.0;
  for (std::size_t k = 0; k < n; ++k)
  {
    if (k != i && k != j)
    {
      m2 = std::max(m2, reports[k]);
    }
  }
  double const p_star = std::max(base_price, m2);

  ReductionOutcome out{{shares.begin(), shares.end()}, std::vector<double>(n, 0.0)};
  if (reports[i] <= p_star && reports[j] >= p_star)
  {
    double const lot = shares[i];
    out.final_shares[i] -= lot;
    out.final_shares[j] += lot;
    out.net_transfers[i] += lot * p_star;
    out.net_transfers[j] -= lot * p_star;
  }
  return out;
}

ReductionOutcome single_seller_round(std::size_t i, PartnershipInstance const &instance,
                                     PriceRule const &rule, std::span<double const> reports)
{
  instance.validate();
  double const p = posted_price(rule, instance.values.at(i), others_max(instance, i));
  return single_seller_round(i, instance.shares, reports, p);
}

PartnershipDissolver::PartnershipDissolver(PartnershipInstance instance, PriceRule rule)
  : instance_(std::move(instance))
{
  instance_.validate();
  prices_.reserve(instance_.size());
  for (std::size_t i = 0; i < instance_.size(); ++i)
  {
    prices_.push_back(posted_price(rule, instance_.values[i], others_max(instance_, i)));
  }
}

ReductionOutcome PartnershipDissolver::operator()(std::span<double const> reports) const
{
  std::size_t const n = instance_.size();
  check_reports(n, reports.size());
  ReductionOutcome total{instance_.shares, std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i)
  {
    if (instance_.shares[i] == 0.0)
    {
      continue;
    }
    auto const round = single_seller_round(i, instance_.shares, reports, prices_[i]);
    for (std::size_t k = 0; k < n; ++k)
    {
      total.final_shares[k] += round.final_shares[k] - instance_.shares[k];
      total.net_transfers[k] += round.net_transfers[k];
    }
  }
  return total;
}

ReductionOutcome dissolve_partnership(PartnershipInstance const &instance, PriceRule const &rule,
                                      std::span<double const> reports)
{
  return PartnershipDissolver(instance, rule)(reports);
}

PartnershipWelfare expected_partnership_welfare(PartnershipInstance const &instance,
                                                PriceRule const           &rule)
{
  instance.validate();
  std::size_t const n        = instance.size();
  double            profiles = 1.0;
  for (auto const &d : instance.values)
  {
    if (!d.segments().empty())
    {
      throw InvalidArgument("profile enumeration needs purely atomic value distributions");
    }
    profiles *= static_cast<double>(d.atoms().size());
  }
  if (profiles > kMaxProfiles)
  {
    throw InstanceTooLarge(fmt::format("{} value profiles exceed the limit of 1e7", profiles));
  }

  PartnershipWelfare                   result{0.0, 0.0, {}, 1.0};
  std::vector<std::vector<PricePoint>> lotteries(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    Distribution const buyer = others_max(instance, i);
    lotteries[i]             = price_lottery(rule, instance.values[i], buyer);
    double achieved          = 0.0;
    for (auto const &pp : lotteries[i])
    {
      achieved += pp.probability * fixed_price_welfare(pp.price, instance.values[i], buyer);
    }
    double const opt = optimal_welfare(instance.values[i], buyer);
    result.round_alphas.push_back(opt > 0.0 ? achieved / opt : 1.0);
    if (instance.shares[i] > 0.0)
    {
      result.alpha = std::min(result.alpha, result.round_alphas.back());
    }
  }

  std::vector<std::size_t> index(n, 0);
  std::vector<double>      reports(n);
  while (true)
  {
    double prob = 1.0;
    for (std::size_t k = 0; k < n; ++k)
    {
      auto const &atom = instance.values[k].atoms()[index[k]];
      reports[k]       = atom.at;
      prob *= atom.mass;
    }
    result.optimum += prob * *std::max_element(reports.begin(), reports.end());

    double welfare = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
      if (instance.shares[i] == 0.0)
      {
        continue;
      }
      for (auto const &pp : lotteries[i])
      {
        auto const round = single_seller_round(i, instance.shares, reports, pp.price);
        double     lot   = instance.shares[i] * reports[i];
        for (std::size_t k = 0; k < n; ++k)
        {
          lot += (round.final_shares[k] - instance.shares[k]) * reports[k];
        }
        welfare += pp.probability * lot;
      }
    }
    result.mechanism += prob * welfare;

    std::size_t k = 0;
    while (k < n && ++index[k] == instance.values[k].atoms().size())
    {
      index[k++] = 0;
    }
    if (k == n)
    {
      break;
    }
  }
  return result;
}

ReductionOutcome monotone_divisible_mechanism(DivisibleValuation const &seller,
                                              DivisibleValuation const &buyer, double price)
{
  if (buyer.full_value() >= price && seller.full_value() <= price)
  {
    return {{0.0, 1.0}, {price, -price}};
  }
  return {{1.0, 0.0}, {0.0, 0.0}};
}

double convex_grant(double alpha)
{
  if (!(alpha > 0.0 && alpha <= 1.0))
  {
    throw InvalidArgument(fmt::format("alpha must lie in (0, 1], got {}", alpha));
  }
  return alpha / (alpha + 1.0);
}

std::size_t convex_seller(std::array<double, 2> const &shares, double grant)
{
  for (std::size_t i = 0; i < 2; ++i)
  {
    if (shares[i] >= grant)
    {
      return i;
    }
  }
  throw InvalidArgument(fmt::format("no player holds a share of at least {}", grant));
}

ReductionOutcome convex_divisible_mechanism(std::array<DivisibleValuation, 2> const &reports,
                                            std::size_t seller, double grant, double price)
{
  if (seller > 1)
  {
    throw InvalidArgument("seller index must be 0 or 1");
  }
  std::size_t const buyer      = 1 - seller;
  double const      seller_lot = reports[seller].marginal(1.0 - grant, grant);
  double const      buyer_lot  = reports[buyer](1.0 - grant);

  ReductionOutcome out{{0.0, 0.0}, {0.0, 0.0}};
  if (buyer_lot >= price && seller_lot <= price)
  {
    out.final_shares[seller]  = grant;
    out.final_shares[buyer]   = 1.0 - grant;
    out.net_transfers[seller] = price;
    out.net_transfers[buyer]  = -price;
  }
  else
  {
    out.final_shares[seller] = 1.0;
  }
  return out;
}

namespace {

std::size_t reduction_seller(DivisibleReduction::Kind kind, std::array<double, 2> const &shares,
                             double grant)
{
  if (kind == DivisibleReduction::Kind::monotone)
  {
    if (shares[0] != 1.0 || shares[1] != 0.0)
    {
      throw InvalidArgument("the monotone reduction needs player 0 to own the whole good");
    }
    return 0;
  }
  return convex_seller(shares, grant);
}

}  // namespace

DivisibleReduction::DivisibleReduction(Kind kind, std::array<double, 2> shares,
                                       std::array<ValuationDistribution, 2> valuations,
                                       PriceRule rule, double alpha)
  : kind_(kind)
  , shares_(shares)
  , valuations_(std::move(valuations))
  , alpha_(alpha)
  , seller_(reduction_seller(kind, shares_, kind == Kind::convex ? convex_grant(alpha) : 0.0))
  , grant_(kind == Kind::convex ? convex_grant(alpha) : 0.0)
  , lot_seller_(lot_distribution(valuations_[seller_], grant_, 1.0))
  , lot_buyer_(lot_distribution(valuations_[1 - seller_], 0.0, 1.0 - grant_))
  , lottery_(price_lottery(rule, lot_seller_, lot_buyer_))
{
  convex_grant(alpha);
  if (!(shares_[0] >= 0.0 && shares_[1] >= 0.0) || std::abs(shares_[0] + shares_[1] - 1.0) > 1e-12)
  {
    throw InvalidArgument("shares must be nonnegative and sum to 1");
  }
  for (auto const &d : valuations_)
  {
    validate(d);
    if (kind_ == Kind::convex)
    {
      for (auto const &draw : d)
      {
        if (draw.valuation.kind() == DivisibleValuation::Kind::monotone)
        {
          throw InvalidArgument("the convex reduction needs linear or concave valuations");
        }
      }
    }
  }
}

double DivisibleReduction::price() const
{
  if (lottery_.size() != 1)
  {
    throw InvalidArgument("the bilateral rule posts a random price; freeze a draw first");
  }
  return lottery_.front().price;
}

ReductionOutcome DivisibleReduction::outcome_at(double price,
                                                std::array<DivisibleValuation, 2> const &reports) const
{
  if (kind_ == Kind::monotone)
  {
    return monotone_divisible_mechanism(reports[0], reports[1], price);
  }
  return convex_divisible_mechanism(reports, seller_, grant_, price);
}

double optimal_divisible_welfare(std::array<ValuationDistribution, 2> const &valuations, int steps)
{
  if (steps < 1)
  {
    throw InvalidArgument("allocation grid needs at least one step");
  }
  double total = 0.0;
  for (auto const &a : valuations[0])
  {
    for (auto const &b : valuations[1])
    {
      double best = -std::numeric_limits<double>::infinity();
      for (int k = 0; k <= steps; ++k)
      {
        double const y = static_cast<double>(k) / steps;
        best           = std::max(best, a.valuation(y) + b.valuation(1.0 - y));
      }
      total += a.probability * b.probability * best;
    }
  }
  return total;
}

DivisibleWelfare expected_divisible_welfare(DivisibleReduction const &reduction, int steps)
{
  auto const &vals    = reduction.valuations();
  double      welfare = 0.0;
  for (auto const &a : vals[0])
  {
    for (auto const &b : vals[1])
    {
      std::array<DivisibleValuation, 2> const reports{a.valuation, b.valuation};
      double                                  inner = 0.0;
      for (auto const &pp : reduction.lottery())
      {
        auto const out = reduction.outcome_at(pp.price, reports);
        inner += pp.probability *
                 (a.valuation(out.final_shares[0]) + b.valuation(out.final_shares[1]));
      }
      welfare += a.probability * b.probability * inner;
    }
  }
  double const alpha = reduction.alpha();
  return {welfare, optimal_divisible_welfare(vals, steps), alpha / (alpha + 1.0)};
}

}  // namespace bitrade
