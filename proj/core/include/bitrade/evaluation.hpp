// Copyright 2026 The bitrade Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "bitrade/distribution.hpp"
#include "bitrade/mechanisms.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace bitrade {

enum class Objective
{
  welfare,
  gft,
};

std::string          to_string(Objective o);
Objective            objective_from_string(std::string const &name);

// ---------------------------------------------------------------------------
// Price rules: a bilateral mechanism described independently of the
// distributions it will be run against.

struct FixedRule
{
  double price;
};
struct MedianRule
{};
struct WeightedMedianRule
{};
/// Median of the buyer distribution. Kept as the counterexample rule: it has
/// no constant approximation guarantee.
struct BuyerMedianRule
{};
struct RandomQuantileRule
{
  std::optional<double> draw;  // frozen uniform draw; empty means "randomize"
};
struct BestFixedRule
{
  Objective objective = Objective::welfare;
};

using PriceRule =
    std::variant<FixedRule, MedianRule, WeightedMedianRule, BuyerMedianRule, RandomQuantileRule,
                 BestFixedRule>;

std::string rule_name(PriceRule const &rule);

/// True for rules that post a single price once bound to distributions.
bool is_deterministic(PriceRule const &rule);

/// The price the rule posts for (seller, buyer). Throws for an unfrozen
/// random-quantile rule.
double posted_price(PriceRule const &rule, Distribution const &seller, Distribution const &buyer);

struct PricePoint
{
  double price;
  double probability;
};

/// The distribution of the posted price as a finite lottery. Deterministic
/// rules give one point; an unfrozen random-quantile rule needs a purely
/// atomic seller.
std::vector<PricePoint> price_lottery(PriceRule const &rule, Distribution const &seller,
                                      Distribution const &buyer);

// ---------------------------------------------------------------------------
// Welfare

/// E[max{s, b}] for independent s and b.
double optimal_welfare(Distribution const &seller, Distribution const &buyer);

/// E[s] + E[(b - s) 1{s <= p <= b}], assembled from partial expectations.
double fixed_price_welfare(double p, Distribution const &seller, Distribution const &buyer);

/// fixed_price_welfare minus E[s], evaluated directly as
/// F_s(p) E[b 1{b >= p}] - P(b >= p) E[s 1{s <= p}].
double fixed_price_gft(double p, Distribution const &seller, Distribution const &buyer);

struct QuadratureResult
{
  double value;
  double error;
};

/// Quadrature tolerance; BITRADE_QUAD_TOL overrides the 1e-7 default.
double quadrature_tolerance();

/// Expected welfare of the random-quantile mechanism, integrating the posted
/// price welfare against the 1/x density on [1/e, 1].
QuadratureResult random_quantile_welfare_detailed(RandomQuantileMechanism const &m,
                                                  Distribution const            &buyer,
                                                  double                         tolerance);
double random_quantile_welfare(RandomQuantileMechanism const &m, Distribution const &buyer);

/// The same price lottery (quantiles of m's seller distribution) run against a
/// different seller population.
QuadratureResult random_quantile_welfare_detailed(RandomQuantileMechanism const &m,
                                                  Distribution const            &seller,
                                                  Distribution const            &buyer,
                                                  double                         tolerance);
double random_quantile_welfare(RandomQuantileMechanism const &m, Distribution const &seller,
                               Distribution const &buyer);

/// E[(b - s)^+], computed as the integral of F_s (1 - F_b).
double optimal_gft(Distribution const &seller, Distribution const &buyer);

/// Gain from trade at price p for the exponential pair on [0, t] with
/// F_b(x) = l (1 - e^{-x}) and F_s(x) = l (e^{x-t} - e^{-t}), l = 1 / (1 - e^{-t}).
double gft_at_price_exponential(double p, double t);

/// Optimal gain from trade for the same exponential pair.
double optimal_gft_exponential(double t);

/// (x + c - 1) / c clamped below at 0, where c = OPTGFT / OPT. Inputs are
/// read as their shortest round-trip decimals and the ratio is rounded once,
/// so (0.9, 0.25) gives 0.6.
double gft_ratio_from_welfare_ratio(double x, double c);

struct PriceChoice
{
  double price;
  double value;
};

/// Grid search over 10,001 prices spanning the support hull plus every
/// breakpoint, refined by golden-section search around the best grid point.
/// Prices within a relative 1e-12 of the best value tie, and ties resolve to
/// the smallest price.
PriceChoice best_fixed_price(Distribution const &seller, Distribution const &buyer,
                             Objective objective);

/// Expected welfare of a rule against (seller, buyer).
QuadratureResult expected_welfare(PriceRule const &rule, Distribution const &seller,
                                  Distribution const &buyer);

/// Expected gain from trade of a rule, computed without going through E[s].
QuadratureResult expected_gft(PriceRule const &rule, Distribution const &seller,
                              Distribution const &buyer);

// ---------------------------------------------------------------------------
// Reports

struct EvalReport
{
  std::string mechanism;
  double      price = 0.0;  // NaN for a randomized rule
  double      mech_welfare     = 0.0;
  double      opt_welfare      = 0.0;
  double      ratio            = 0.0;
  double      mech_gft         = 0.0;
  double      opt_gft          = 0.0;
  double      gft_ratio        = 0.0;
  double      quadrature_error = 0.0;
};

EvalReport evaluate(PriceRule const &rule, Distribution const &seller, Distribution const &buyer);

// ---------------------------------------------------------------------------
// Monte Carlo cross-check (never the primary path)

struct MonteCarloEstimate
{
  double        mean;
  double        std_error;
  std::uint64_t samples;
};

/// Samples (s, b) by inverse CDF and, for an unfrozen random-quantile rule, a
/// price draw per sample. Deterministic for a given seed.
MonteCarloEstimate monte_carlo_welfare(PriceRule const &rule, Distribution const &seller,
                                       Distribution const &buyer, std::uint64_t samples,
                                       std::uint64_t seed);

}  // namespace bitrade
