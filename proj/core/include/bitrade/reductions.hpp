// Copyright 2026 The bitrade Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "bitrade/distribution.hpp"
#include "bitrade/evaluation.hpp"
#include "bitrade/valuation.hpp"

#include <array>
#include <span>
#include <vector>

namespace bitrade {

/// Final holdings and signed transfers (positive means received) per player.
struct ReductionOutcome
{
  std::vector<double> final_shares;
  std::vector<double> net_transfers;
};

// ---------------------------------------------------------------------------
// Partnership dissolving

struct PartnershipInstance
{
  std::vector<double>       shares;
  std::vector<Distribution> values;  // value for the whole asset, per player

  std::size_t size() const { return shares.size(); }
  double      r_max() const;

  /// Throws unless n >= 2, shares are nonnegative and sum to 1 within 1e-12.
  void validate() const;
};

/// Distribution of max_{k != i} v_k.
Distribution others_max(PartnershipInstance const &instance, std::size_t i);

/// Sells player i's share r_i to the highest other report at
/// p* = max(base_price, second highest other report), provided
/// report_i <= p* <= report_j. Ties for the highest report go to the lowest index.
ReductionOutcome single_seller_round(std::size_t i, std::span<double const> shares,
                                     std::span<double const> reports, double base_price);

/// Same round with the base price posted by `rule` for v_i against others_max.
ReductionOutcome single_seller_round(std::size_t i, PartnershipInstance const &instance,
                                     PriceRule const &rule, std::span<double const> reports);

/// Sells every original endowment in ascending player order. Base prices
/// depend only on the distributions and are computed once.
class PartnershipDissolver
{
public:
  PartnershipDissolver(PartnershipInstance instance, PriceRule rule);

  PartnershipInstance const &instance() const { return instance_; }
  std::vector<double> const &base_prices() const { return prices_; }

  ReductionOutcome operator()(std::span<double const> reports) const;

private:
  PartnershipInstance instance_;
  std::vector<double> prices_;
};

ReductionOutcome dissolve_partnership(PartnershipInstance const &instance, PriceRule const &rule,
                                      std::span<double const> reports);

struct PartnershipWelfare
{
  double              mechanism;     // E[sum_k final_share_k v_k]
  double              optimum;       // E[max_k v_k]
  std::vector<double> round_alphas;  // bilateral ratio achieved by the base price of each round
  double              alpha;         // min of round_alphas over rounds with a positive share
};

/// Exact expectations by enumerating every profile. Value distributions must
/// be purely atomic. Unfrozen random-quantile rules are averaged over their
/// price lottery.
PartnershipWelfare expected_partnership_welfare(PartnershipInstance const &instance,
                                                PriceRule const           &rule);

// ---------------------------------------------------------------------------
// Two-player divisible good

/// The seller (player 0) owns everything; the whole good moves to the buyer
/// at `price` iff v_b(1) >= price >= v_s(1).
ReductionOutcome monotone_divisible_mechanism(DivisibleValuation const &seller,
                                              DivisibleValuation const &buyer, double price);

/// Fraction granted to the seller for free: alpha / (alpha + 1).
double convex_grant(double alpha);

/// Index of the player treated as seller: the lowest index with share >= grant.
std::size_t convex_seller(std::array<double, 2> const &shares, double grant);

/// The seller keeps `grant` for free; the remaining 1 - grant moves to the
/// buyer at `price` iff v_b(1 - grant) >= price >= v_s(1) - v_s(grant).
/// Otherwise the seller ends with the whole good.
ReductionOutcome convex_divisible_mechanism(std::array<DivisibleValuation, 2> const &reports,
                                            std::size_t seller, double grant, double price);

/// A divisible-good reduction bound to its distributions and bilateral rule.
class DivisibleReduction
{
public:
  enum class Kind
  {
    monotone,
    convex,
  };

  /// For the monotone kind, player 0 must own the whole good and `alpha` is
  /// only used for the reported bound.
  DivisibleReduction(Kind kind, std::array<double, 2> shares,
                     std::array<ValuationDistribution, 2> valuations, PriceRule rule, double alpha);

  Kind                                        kind() const { return kind_; }
  std::array<double, 2> const                &shares() const { return shares_; }
  std::array<ValuationDistribution, 2> const &valuations() const { return valuations_; }
  std::size_t                                 seller() const { return seller_; }
  double                                      grant() const { return grant_; }
  double                                      alpha() const { return alpha_; }

  /// Distributions the bilateral rule is run against.
  Distribution const &seller_distribution() const { return lot_seller_; }
  Distribution const &buyer_distribution() const { return lot_buyer_; }

  std::vector<PricePoint> const &lottery() const { return lottery_; }

  /// The posted price. Throws for a randomized rule.
  double price() const;

  ReductionOutcome outcome_at(double price, std::array<DivisibleValuation, 2> const &reports) const;
  ReductionOutcome operator()(std::array<DivisibleValuation, 2> const &reports) const
  {
    return outcome_at(price(), reports);
  }

private:
  Kind                                 kind_;
  std::array<double, 2>                shares_;
  std::array<ValuationDistribution, 2> valuations_;
  double                               alpha_;
  std::size_t                          seller_ = 0;
  double                               grant_  = 0.0;
  Distribution                         lot_seller_;
  Distribution                         lot_buyer_;
  std::vector<PricePoint>              lottery_;
};

struct DivisibleWelfare
{
  double mechanism;  // expected welfare of the reduction
  double optimum;    // expected welfare of the best allocation on the grid
  double bound;      // alpha / (alpha + 1)
};

/// Expected max over y in {0, 1/steps, ..., 1} of v_0(y) + v_1(1 - y).
double optimal_divisible_welfare(std::array<ValuationDistribution, 2> const &valuations,
                                 int                                         steps = 1000);

DivisibleWelfare expected_divisible_welfare(DivisibleReduction const &reduction, int steps = 1000);

}  // namespace bitrade
