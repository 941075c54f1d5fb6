// Copyright 2026 The bitrade Authors
// SPDX-License-Identifier: Apache-2.0

#include "bitrade/verification.hpp"

#include "bitrade/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <memory>

namespace bitrade {

namespace {

constexpr double kMargin      = 1e-12;
constexpr double kMaxProfiles = 1e7;

ReportProfile reports_at(DiscreteInstance const &instance, std::vector<std::size_t> const &index)
{
  ReportProfile reports;
  reports.reserve(index.size());
  for (std::size_t k = 0; k < index.size(); ++k)
  {
    reports.push_back(instance.type_spaces[k][index[k]]);
  }
  return reports;
}

ReductionOutcome run(DiscreteInstance const &instance, ReportProfile const &reports)
{
  auto out = instance.mechanism(reports);
  if (out.final_shares.size() != instance.players() || out.net_transfers.size() != instance.players())
  {
    throw Error(fmt::format("mechanism of '{}' returned an outcome of the wrong size", instance.name));
  }
  return out;
}

double utility(DivisibleValuation const &type, ReductionOutcome const &out, std::size_t player)
{
  return type(out.final_shares[player]) + out.net_transfers[player];
}

double imbalance(ReductionOutcome const &out)
{
  double transfers = 0.0;
  double scale     = 1.0;
  double shares    = 0.0;
  for (std::size_t k = 0; k < out.net_transfers.size(); ++k)
  {
    transfers += out.net_transfers[k];
    scale = std::max(scale, std::abs(out.net_transfers[k]));
    shares += out.final_shares[k];
  }
  return std::max(std::abs(transfers) / scale, std::abs(shares - 1.0));
}

double ir_shortfall(DiscreteInstance const &instance, ReportProfile const &truth,
                    ReductionOutcome const &out, std::size_t player)
{
  return truth[player](instance.endowments[player]) - utility(truth[player], out, player);
}

double regret(DiscreteInstance const &instance, ReportProfile const &truth,
              ReductionOutcome const &honest, std::size_t player, std::size_t misreport)
{
  ReportProfile lie = truth;
  lie[player]       = instance.type_spaces[player][misreport];
  auto const out    = run(instance, lie);
  return utility(truth[player], out, player) - utility(truth[player], honest, player);
}

void record(PropertyCheck &check, Witness witness)
{
  if (check.pass)
  {
    check.pass    = false;
    check.witness = std::move(witness);
  }
}

}  // namespace

void DiscreteInstance::validate() const
{
  if (type_spaces.empty())
  {
    throw InvalidArgument("instance has no players");
  }
  if (endowments.size() != type_spaces.size())
  {
    throw InvalidArgument(fmt::format("{} endowments for {} players", endowments.size(),
                                      type_spaces.size()));
  }
  for (auto const &space : type_spaces)
  {
    if (space.empty())
    {
      throw InvalidArgument("every type space must be nonempty");
    }
  }
  if (!mechanism)
  {
    throw InvalidArgument("instance has no mechanism");
  }
}

Certificate certify(DiscreteInstance const &instance)
{
  instance.validate();
  double count = 1.0;
  for (auto const &space : instance.type_spaces)
  {
    count *= static_cast<double>(space.size());
  }
  if (count > kMaxProfiles)
  {
    throw InstanceTooLarge(
        fmt::format("instance '{}' has {} profiles, above the limit of 1e7", instance.name, count));
  }

  Certificate              cert;
  cert.instance = instance.name;
  std::size_t const        n = instance.players();
  std::vector<std::size_t> index(n, 0);
  while (true)
  {
    auto const truth  = reports_at(instance, index);
    auto const honest = run(instance, truth);
    ++cert.profiles;

    double const gap = imbalance(honest);
    if (gap > kMargin)
    {
      record(cert.bb, {index, 0, std::nullopt, gap});
    }
    for (std::size_t i = 0; i < n; ++i)
    {
      double const shortfall = ir_shortfall(instance, truth, honest, i);
      if (shortfall > kMargin)
      {
        record(cert.ir, {index, i, std::nullopt, shortfall});
      }
      for (std::size_t m = 0; m < instance.type_spaces[i].size(); ++m)
      {
        if (m == index[i])
        {
          continue;
        }
        ++cert.deviations;
        double const gain = regret(instance, truth, honest, i, m);
        cert.max_regret   = std::max(cert.max_regret, gain);
        if (gain > kMargin)
        {
          record(cert.dsic, {index, i, m, gain});
        }
      }
    }

    std::size_t k = 0;
    while (k < n && ++index[k] == instance.type_spaces[k].size())
    {
      index[k++] = 0;
    }
    if (k == n)
    {
      break;
    }
  }
  return cert;
}

double replay(DiscreteInstance const &instance, Witness const &witness, Property property)
{
  instance.validate();
  if (witness.profile.size() != instance.players() || witness.player >= instance.players())
  {
    throw InvalidArgument("witness does not match the instance");
  }
  auto const truth  = reports_at(instance, witness.profile);
  auto const honest = run(instance, truth);
  switch (property)
  {
  case Property::dsic:
    if (!witness.misreport)
    {
      throw InvalidArgument("a DSIC witness needs a misreport");
    }
    return regret(instance, truth, honest, witness.player, *witness.misreport);
  case Property::ir:
    return ir_shortfall(instance, truth, honest, witness.player);
  case Property::bb:
    return imbalance(honest);
  }
  return 0.0;
}

std::vector<double> standard_grid()
{
  return {0.0, 0.25, 0.5, 0.75, 1.0};
}

std::vector<DivisibleValuation> linear_types(std::vector<double> const &values)
{
  std::vector<DivisibleValuation> types;
  types.reserve(values.size());
  for (double v : values)
  {
    types.push_back(DivisibleValuation::linear(v));
  }
  return types;
}

Distribution uniform_over(std::vector<double> const &values)
{
  if (values.empty())
  {
    throw InvalidArgument("cannot build a distribution over an empty type space");
  }
  std::vector<Atom> atoms;
  for (double v : values)
  {
    atoms.push_back({v, 1.0 / static_cast<double>(values.size())});
  }
  return Distribution::discrete(std::move(atoms));
}

ValuationDistribution uniform_over(std::vector<DivisibleValuation> const &types)
{
  if (types.empty())
  {
    throw InvalidArgument("cannot build a distribution over an empty type space");
  }
  ValuationDistribution d;
  for (auto const &t : types)
  {
    d.push_back({t, 1.0 / static_cast<double>(types.size())});
  }
  return d;
}

DiscreteInstance bilateral_instance(PriceRule const &rule, std::vector<double> const &seller_types,
                                    std::vector<double> const &buyer_types)
{
  double const p = posted_price(rule, uniform_over(seller_types), uniform_over(buyer_types));
  FixedPriceMechanism const mech(p);
  DiscreteInstance          inst;
  inst.name        = fmt::format("bilateral/{}", rule_name(rule));
  inst.type_spaces = {linear_types(seller_types), linear_types(buyer_types)};
  inst.endowments  = {1.0, 0.0};
  inst.mechanism   = [mech](ReportProfile const &r) {
    auto const out = mech.outcome(r[0].full_value(), r[1].full_value());
    return ReductionOutcome{{1.0 - out.allocation, out.allocation},
                            {out.seller_payment_received, -out.buyer_payment_made}};
  };
  return inst;
}

DiscreteInstance broken_first_price_instance(std::vector<double> const &seller_types,
                                             std::vector<double> const &buyer_types)
{
  DiscreteInstance inst;
  inst.name        = "bilateral/broken_first_price";
  inst.type_spaces = {linear_types(seller_types), linear_types(buyer_types)};
  inst.endowments  = {1.0, 0.0};
  inst.mechanism   = [](ReportProfile const &r) {
    double const s = r[0].full_value();
    double const b = r[1].full_value();
    if (s <= b)
    {
      return ReductionOutcome{{0.0, 1.0}, {b, -b}};
    }
    return ReductionOutcome{{1.0, 0.0}, {0.0, 0.0}};
  };
  return inst;
}

DiscreteInstance partnership_instance(std::vector<double> const              &shares,
                                      std::vector<std::vector<double>> const &type_spaces,
                                      PriceRule const                        &rule)
{
  PartnershipInstance partnership;
  partnership.shares = shares;
  for (auto const &space : type_spaces)
  {
    partnership.values.push_back(uniform_over(space));
  }
  auto dissolver = std::make_shared<PartnershipDissolver const>(std::move(partnership), rule);

  DiscreteInstance inst;
  inst.name = fmt::format("partnership/{}/n={}", rule_name(rule), shares.size());
  for (auto const &space : type_spaces)
  {
    inst.type_spaces.push_back(linear_types(space));
  }
  inst.endowments = shares;
  inst.mechanism  = [dissolver](ReportProfile const &r) {
    std::vector<double> reports;
    reports.reserve(r.size());
    for (auto const &v : r)
    {
      reports.push_back(v.full_value());
    }
    return (*dissolver)(reports);
  };
  return inst;
}

DiscreteInstance divisible_instance(DivisibleReduction::Kind kind, std::array<double, 2> shares,
                                    std::array<std::vector<DivisibleValuation>, 2> const &types,
                                    PriceRule const &rule, double alpha)
{
  auto reduction = std::make_shared<DivisibleReduction const>(
      kind, shares, std::array<ValuationDistribution, 2>{uniform_over(types[0]), uniform_over(types[1])},
      rule, alpha);
  reduction->price();

  DiscreteInstance inst;
  inst.name = fmt::format("{}/{}", kind == DivisibleReduction::Kind::monotone ? "monotone" : "convex",
                          rule_name(rule));
  inst.type_spaces = {types[0], types[1]};
  inst.endowments  = {shares[0], shares[1]};
  inst.mechanism   = [reduction](ReportProfile const &r) { return (*reduction)({r[0], r[1]}); };
  return inst;
}

}  // namespace bitrade
