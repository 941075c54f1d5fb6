// Copyright 2026 The bitrade Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "bitrade/distribution.hpp"
#include "bitrade/evaluation.hpp"
#include "bitrade/reductions.hpp"
#include "bitrade/valuation.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace bitrade {

using ReportProfile = std::vector<DivisibleValuation>;
using MechanismFn   = std::function<ReductionOutcome(ReportProfile const &)>;

/**
 * A finite instance for exhaustive incentive checks. Each player's types are
 * valuations for the good; a plain value v stands for the linear valuation
 * x -> v x. Utility is v(final share) + transfer, and IR compares it with
 * v(endowment).
 */
struct DiscreteInstance
{
  std::string                                  name;
  std::vector<std::vector<DivisibleValuation>> type_spaces;
  std::vector<double>                          endowments;
  MechanismFn                                  mechanism;

  std::size_t players() const { return type_spaces.size(); }

  /// Throws unless type spaces are nonempty and match the endowments.
  void validate() const;
};

/// A replayable failure: the true profile (as type indices), and for DSIC
/// the deviating player and the index of the misreport.
struct Witness
{
  std::vector<std::size_t> profile;
  std::size_t              player    = 0;
  std::optional<std::size_t> misreport;
  double                   violation = 0.0;  // regret, IR shortfall or imbalance
};

struct PropertyCheck
{
  bool                   pass = true;
  std::optional<Witness> witness;
};

struct Certificate
{
  std::string   instance;
  PropertyCheck dsic;
  PropertyCheck ir;
  PropertyCheck bb;
  double        max_regret = 0.0;
  std::uint64_t profiles   = 0;
  std::uint64_t deviations = 0;

  bool pass() const { return dsic.pass && ir.pass && bb.pass; }
};

/// Enumerates every true profile and every unilateral misreport. A deviation
/// fails DSIC when it gains more than 1e-12. Throws InstanceTooLarge when the
/// number of profiles exceeds 1e7.
Certificate certify(DiscreteInstance const &instance);

enum class Property
{
  dsic,
  ir,
  bb,
};

/// Re-runs the mechanism on a witness and returns the size of the violation
/// for `property` (positive when the failure reproduces).
double replay(DiscreteInstance const &instance, Witness const &witness, Property property);

// ---------------------------------------------------------------------------
// Ready-made instances. Player 0 is the seller in the bilateral ones and owns
// the good.

/// Values {0, 1/4, 1/2, 3/4, 1}.
std::vector<double> standard_grid();

/// Scalars as linear valuations.
std::vector<DivisibleValuation> linear_types(std::vector<double> const &values);

/// Bilateral posted-price mechanism; the price comes from `rule` against the
/// uniform distributions over the two type spaces.
DiscreteInstance bilateral_instance(PriceRule const &rule, std::vector<double> const &seller_types,
                                    std::vector<double> const &buyer_types);

/// Trade iff s <= b, and the buyer pays their own bid. Not truthful.
DiscreteInstance broken_first_price_instance(std::vector<double> const &seller_types,
                                             std::vector<double> const &buyer_types);

/// Partnership dissolving with uniform beliefs over each type space.
DiscreteInstance partnership_instance(std::vector<double> const              &shares,
                                      std::vector<std::vector<double>> const &type_spaces,
                                      PriceRule const                        &rule);

/// Monotone or convex reduction with uniform beliefs over each type space.
DiscreteInstance divisible_instance(DivisibleReduction::Kind kind, std::array<double, 2> shares,
                                    std::array<std::vector<DivisibleValuation>, 2> const &types,
                                    PriceRule const &rule, double alpha);

/// Uniform distribution over the points of a type space.
Distribution uniform_over(std::vector<double> const &values);
ValuationDistribution uniform_over(std::vector<DivisibleValuation> const &types);

}  // namespace bitrade
