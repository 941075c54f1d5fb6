// Copyright 2026 The bitrade Authors
// SPDX-License-Identifier: Apache-2.0

#include "bitrade/literals.hpp"

#include <fmt/format.h>

#include <cmath>
#include <cstdlib>
#include <numbers>

namespace bitrade {

namespace {

Json const &field(Json const &j, char const *key)
{
  if (!j.is_object() || !j.contains(key))
  {
    throw LiteralError(fmt::format("missing field '{}'", key));
  }
  return j.at(key);
}

double number(Json const &j, char const *key)
{
  auto const &v = field(j, key);
  if (!v.is_number())
  {
    throw LiteralError(fmt::format("field '{}' must be a number", key));
  }
  return v.get<double>();
}

double number_or(Json const &j, char const *key, double fallback)
{
  return j.is_object() && j.contains(key) ? number(j, key) : fallback;
}

std::vector<double> numbers(Json const &j)
{
  if (!j.is_array())
  {
    throw LiteralError("expected an array of numbers");
  }
  std::vector<double> out;
  for (auto const &v : j)
  {
    if (!v.is_number())
    {
      throw LiteralError("expected an array of numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<Atom> atom_list(Json const &j)
{
  if (!j.is_array())
  {
    throw LiteralError("atoms must be an array of [x, p] pairs");
  }
  std::vector<Atom> atoms;
  for (auto const &pair : j)
  {
    auto const xp = numbers(pair);
    if (xp.size() != 2)
    {
      throw LiteralError("atoms must be an array of [x, p] pairs");
    }
    atoms.push_back({xp[0], xp[1]});
  }
  return atoms;
}

Json params_of(Json const &j)
{
  if (j.is_object() && j.contains("params"))
  {
    auto const &p = j.at("params");
    if (!p.is_object())
    {
      throw LiteralError("'params' must be an object");
    }
    return p;
  }
  return Json::object();
}

template <class F>
auto translated(F &&f) -> decltype(f())
{
  try
  {
    return f();
  }
  catch (LiteralError const &)
  {
    throw;
  }
  catch (Json::exception const &e)
  {
    throw LiteralError(e.what());
  }
  catch (InvalidArgument const &e)
  {
    throw LiteralError(e.what());
  }
}

Segment segment_from_json(Json const &j)
{
  std::string const shape = j.value("shape", "uniform");
  double const      lo    = number(j, "lo");
  double const      hi    = number(j, "hi");
  if (shape == "uniform")
  {
    return Segment::uniform(lo, hi, number(j, "mass"));
  }
  if (shape == "exp")
  {
    return Segment::exponential(lo, hi, number(j, "mass"), number(j, "rate"));
  }
  if (shape == "poly")
  {
    return Segment::polynomial(lo, hi, numbers(field(j, "coeffs")));
  }
  throw LiteralError(fmt::format("unknown segment shape '{}'", shape));
}

std::vector<std::vector<double>> number_matrix(Json const &j)
{
  if (!j.is_array())
  {
    throw LiteralError("'type_spaces' must be an array of arrays");
  }
  std::vector<std::vector<double>> out;
  for (auto const &row : j)
  {
    out.push_back(numbers(row));
  }
  return out;
}

std::vector<DivisibleValuation> valuation_list(Json const &j)
{
  if (!j.is_array())
  {
    throw LiteralError("expected an array of valuations");
  }
  std::vector<DivisibleValuation> out;
  for (auto const &v : j)
  {
    out.push_back(valuation_from_json(v));
  }
  return out;
}

Json witness_to_json(std::optional<Witness> const &w, DiscreteInstance const &instance)
{
  if (!w)
  {
    return nullptr;
  }
  Json profile = Json::array();
  for (std::size_t k = 0; k < w->profile.size(); ++k)
  {
    profile.push_back(round12(instance.type_spaces[k][w->profile[k]].full_value()));
  }
  Json out{{"profile", profile},
           {"profile_index", w->profile},
           {"player", w->player},
           {"violation", round12(w->violation)}};
  if (w->misreport)
  {
    out["misreport"] = round12(instance.type_spaces[w->player][*w->misreport].full_value());
    out["misreport_index"] = *w->misreport;
  }
  else
  {
    out["misreport"]       = nullptr;
    out["misreport_index"] = nullptr;
  }
  return out;
}

Json check_to_json(PropertyCheck const &check, DiscreteInstance const &instance)
{
  return {{"pass", check.pass}, {"witness", witness_to_json(check.witness, instance)}};
}

}  // namespace

Json parse_json(std::string const &text, std::string const &what)
{
  try
  {
    return Json::parse(text);
  }
  catch (Json::parse_error const &e)
  {
    throw LiteralError(fmt::format("{} is not valid JSON: {}", what, e.what()));
  }
}

Distribution distribution_from_json(Json const &j)
{
  return translated([&] {
    std::string const type   = field(j, "type").get<std::string>();
    Json const        params = params_of(j);
    if (type == "uniform")
    {
      return Distribution::uniform(number_or(params, "lo", 0.0), number_or(params, "hi", 1.0));
    }
    if (type == "exponential")
    {
      return Distribution::exponential(number_or(params, "rate", 1.0), number_or(params, "lo", 0.0));
    }
    if (type == "atoms")
    {
      return Distribution::discrete(atom_list(field(params, "points")));
    }
    if (type == "pieces")
    {
      std::vector<Segment> segments;
      if (params.contains("segments"))
      {
        for (auto const &s : params.at("segments"))
        {
          segments.push_back(segment_from_json(s));
        }
      }
      std::vector<Atom> atoms;
      if (params.contains("atoms"))
      {
        atoms = atom_list(params.at("atoms"));
      }
      return Distribution(std::move(segments), std::move(atoms));
    }
    if (type == "gft_seller")
    {
      return gft_family(number(params, "t")).seller;
    }
    if (type == "gft_buyer")
    {
      return gft_family(number(params, "t")).buyer;
    }
    throw LiteralError(fmt::format("unknown distribution type '{}'", type));
  });
}

PriceRule rule_from_json(Json const &j)
{
  return translated([&]() -> PriceRule {
    std::string const kind   = j.is_string() ? j.get<std::string>() : field(j, "kind").get<std::string>();
    Json const        params = params_of(j);
    if (kind == "fixed")
    {
      double const price = number(params, "price");
      FixedPriceMechanism{price};
      return FixedRule{price};
    }
    if (kind == "median")
    {
      return MedianRule{};
    }
    if (kind == "weighted_median")
    {
      return WeightedMedianRule{};
    }
    if (kind == "buyer_median")
    {
      return BuyerMedianRule{};
    }
    if (kind == "random_quantile")
    {
      RandomQuantileRule rule;
      if (params.contains("draw") && !params.at("draw").is_null())
      {
        double const u = number(params, "draw");
        random_quantile_level(u);
        rule.draw = u;
      }
      return rule;
    }
    if (kind == "best_fixed")
    {
      return BestFixedRule{objective_from_string(params.value("objective", "welfare"))};
    }
    throw LiteralError(fmt::format("unknown mechanism kind '{}'", kind));
  });
}

Json rule_to_json(PriceRule const &rule)
{
  Json out{{"kind", rule_name(rule)}, {"params", Json::object()}};
  if (auto const *f = std::get_if<FixedRule>(&rule))
  {
    out["params"]["price"] = f->price;
  }
  else if (auto const *rq = std::get_if<RandomQuantileRule>(&rule); rq && rq->draw)
  {
    out["params"]["draw"] = *rq->draw;
  }
  else if (auto const *bf = std::get_if<BestFixedRule>(&rule))
  {
    out["params"]["objective"] = to_string(bf->objective);
  }
  return out;
}

DivisibleValuation valuation_from_json(Json const &j)
{
  return translated([&] {
    if (j.is_number())
    {
      return DivisibleValuation::linear(j.get<double>());
    }
    auto const kind = valuation_kind_from_string(field(j, "kind").get<std::string>());
    if (kind == DivisibleValuation::Kind::linear && j.contains("value"))
    {
      return DivisibleValuation::linear(number(j, "value"));
    }
    std::vector<DivisibleValuation::Point> points;
    for (auto const &atom : atom_list(field(j, "points")))
    {
      points.push_back({atom.at, atom.mass});
    }
    return DivisibleValuation(kind, std::move(points));
  });
}

DiscreteInstance instance_from_json(Json const &j)
{
  return translated([&] {
    std::string const kind = field(j, "kind").get<std::string>();
    if (kind == "bilateral")
    {
      return bilateral_instance(rule_from_json(field(j, "mechanism")), numbers(field(j, "seller_types")),
                                numbers(field(j, "buyer_types")));
    }
    if (kind == "broken_first_price")
    {
      return broken_first_price_instance(numbers(field(j, "seller_types")),
                                         numbers(field(j, "buyer_types")));
    }
    if (kind == "partnership")
    {
      return partnership_instance(numbers(field(j, "shares")), number_matrix(field(j, "type_spaces")),
                                  rule_from_json(field(j, "mechanism")));
    }
    if (kind == "monotone" || kind == "convex")
    {
      auto const shares = numbers(field(j, "shares"));
      auto const &spaces = field(j, "type_spaces");
      if (shares.size() != 2 || !spaces.is_array() || spaces.size() != 2)
      {
        throw LiteralError("divisible instances have exactly two players");
      }
      double const alpha = number_or(j, "alpha", 1.0 - std::exp(-1.0));
      return divisible_instance(
          kind == "monotone" ? DivisibleReduction::Kind::monotone : DivisibleReduction::Kind::convex,
          {shares[0], shares[1]}, {valuation_list(spaces[0]), valuation_list(spaces[1])},
          rule_from_json(field(j, "mechanism")), alpha);
    }
    throw LiteralError(fmt::format("unknown instance kind '{}'", kind));
  });
}

ReduceRequest reduce_request_from_json(Json const &j)
{
  return translated([&] {
    PartnershipInstance instance;
    instance.shares = numbers(field(j, "shares"));
    for (auto const &d : field(j, "values"))
    {
      instance.values.push_back(distribution_from_json(d));
    }
    instance.validate();
    ReduceRequest req{std::move(instance), rule_from_json(field(j, "mechanism")),
                      numbers(field(j, "reports"))};
    if (req.reports.size() != req.instance.size())
    {
      throw LiteralError("one report per player is required");
    }
    return req;
  });
}

double round12(double x)
{
  if (!std::isfinite(x))
  {
    return x;
  }
  return std::strtod(fmt::format("{:.12g}", x).c_str(), nullptr);
}

std::string format12(double x)
{
  return fmt::format("{:.12g}", x);
}

Json report_to_json(EvalReport const &r)
{
  Json out;
  out["mechanism"] = r.mechanism;
  if (std::isnan(r.price))
  {
    out["price"] = nullptr;
  }
  else
  {
    out["price"] = round12(r.price);
  }
  out["mech_welfare"]     = round12(r.mech_welfare);
  out["opt_welfare"]      = round12(r.opt_welfare);
  out["ratio"]            = round12(r.ratio);
  out["mech_gft"]         = round12(r.mech_gft);
  out["opt_gft"]          = round12(r.opt_gft);
  out["gft_ratio"]        = round12(r.gft_ratio);
  out["quadrature_error"] = round12(r.quadrature_error);
  return out;
}

std::string report_csv_header()
{
  return "mechanism,price,mech_welfare,opt_welfare,ratio,mech_gft,opt_gft,gft_ratio,quadrature_error";
}

std::string report_csv_row(EvalReport const &r)
{
  return fmt::format("{},{},{},{},{},{},{},{},{}", r.mechanism, format12(r.price),
                     format12(r.mech_welfare), format12(r.opt_welfare), format12(r.ratio),
                     format12(r.mech_gft), format12(r.opt_gft), format12(r.gft_ratio),
                     format12(r.quadrature_error));
}

Json certificate_to_json(Certificate const &cert, DiscreteInstance const &instance)
{
  return {{"instance", cert.instance},
          {"pass", cert.pass()},
          {"dsic", check_to_json(cert.dsic, instance)},
          {"ir", check_to_json(cert.ir, instance)},
          {"bb", check_to_json(cert.bb, instance)},
          {"max_regret", round12(cert.max_regret)},
          {"profiles", cert.profiles},
          {"deviations", cert.deviations}};
}

std::string sweep_csv(std::vector<SweepRow> const &rows)
{
  std::string out = "param,mech_value,opt_value,ratio\n";
  for (auto const &r : rows)
  {
    out += fmt::format("{},{},{},{}\n", format12(r.param), format12(r.mech_value),
                       format12(r.opt_value), format12(r.ratio));
  }
  return out;
}

std::string outcome_csv(ReductionOutcome const &outcome)
{
  std::string out = "player,final_share,net_transfer\n";
  for (std::size_t k = 0; k < outcome.final_shares.size(); ++k)
  {
    out += fmt::format("{},{},{}\n", k, format12(outcome.final_shares[k]),
                       format12(outcome.net_transfers[k]));
  }
  return out;
}

}  // namespace bitrade
