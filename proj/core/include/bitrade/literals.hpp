// Copyright 2026 The bitrade Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "bitrade/distribution.hpp"
#include "bitrade/error.hpp"
#include "bitrade/evaluation.hpp"
#include "bitrade/reductions.hpp"
#include "bitrade/scenarios.hpp"
#include "bitrade/valuation.hpp"
#include "bitrade/verification.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace bitrade {

using Json = nlohmann::json;

/// Thrown for malformed literals and configs.
class LiteralError : public InvalidArgument
{
public:
  using InvalidArgument::InvalidArgument;
};

// ---------------------------------------------------------------------------
// Literals
//
// Distribution: {"type": T, "params": {...}} with T one of
//   uniform      {"lo": 0, "hi": 1}
//   exponential  {"rate": 1, "lo": 0}
//   atoms        {"points": [[x, p], ...]}
//   pieces       {"segments": [{"lo", "hi", "mass", "shape": "uniform"|"exp"|"poly",
//                               "rate", "coeffs"}], "atoms": [[x, p], ...]}
//   gft_seller   {"t": t}
//   gft_buyer    {"t": t}
//
// Mechanism: {"kind": K, "params": {...}} with K one of fixed {"price"},
// median, weighted_median, buyer_median, random_quantile {"draw"?} and
// best_fixed {"objective"?}. A bare string names a kind without params.
//
// Valuation: a number v (linear, v x) or {"kind": "linear"|"monotone"|"concave",
// "points": [[x, v], ...]}.

Distribution       distribution_from_json(Json const &j);
PriceRule          rule_from_json(Json const &j);
Json               rule_to_json(PriceRule const &rule);
DivisibleValuation valuation_from_json(Json const &j);

/// Parses text as JSON, naming `what` in the error message.
Json parse_json(std::string const &text, std::string const &what);

// ---------------------------------------------------------------------------
// Instances
//
// {"kind": "bilateral", "mechanism": M, "seller_types": [...], "buyer_types": [...]}
// {"kind": "broken_first_price", "seller_types": [...], "buyer_types": [...]}
// {"kind": "partnership", "mechanism": M, "shares": [...], "type_spaces": [[...], ...]}
// {"kind": "monotone"|"convex", "mechanism": M, "shares": [r0, r1], "alpha": a,
//  "type_spaces": [[valuation, ...], [valuation, ...]]}

DiscreteInstance instance_from_json(Json const &j);

/// {"shares": [...], "values": [distribution, ...], "mechanism": M, "reports": [...]}
struct ReduceRequest
{
  PartnershipInstance instance;
  PriceRule           rule;
  std::vector<double> reports;
};

ReduceRequest reduce_request_from_json(Json const &j);

// ---------------------------------------------------------------------------
// Output

/// Rounds to 12 significant digits.
double      round12(double x);
std::string format12(double x);

Json        report_to_json(EvalReport const &report);
std::string report_csv_header();
std::string report_csv_row(EvalReport const &report);

Json certificate_to_json(Certificate const &cert, DiscreteInstance const &instance);

std::string sweep_csv(std::vector<SweepRow> const &rows);
std::string outcome_csv(ReductionOutcome const &outcome);

}  // namespace bitrade
