// Copyright 2026 The bitrade Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include "bitrade/literals.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace bitrade::cli {

namespace {

std::string read_file(std::string const &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw LiteralError(fmt::format("cannot read '{}'", path));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(std::string const &path, std::string const &text)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
  {
    throw LiteralError(fmt::format("cannot write '{}'", path));
  }
  out << text;
}

/// Writes to `path` when given, otherwise to `out`.
void emit(std::ostream &out, std::string const &path, std::string const &text)
{
  if (path.empty())
  {
    out << text;
  }
  else
  {
    write_file(path, text);
  }
}

Json mechanism_literal(std::string const &text)
{
  auto const first = text.find_first_not_of(" \t\n");
  if (first != std::string::npos && text[first] == '{')
  {
    return parse_json(text, "--mechanism");
  }
  return Json(text);
}

std::string dump(Json const &j)
{
  return j.dump(2) + "\n";
}

struct EvalArgs
{
  std::string                config;
  std::string                seller;
  std::string                buyer;
  std::string                mechanism;
  std::string                json_out;
  std::string                csv_out;
  std::optional<std::uint64_t> mc_samples;
};

int cmd_eval(EvalArgs const &args, std::uint64_t seed, std::ostream &out)
{
  Json config = Json::object();
  if (!args.config.empty())
  {
    config = parse_json(read_file(args.config), args.config);
    if (!config.is_object())
    {
      throw LiteralError("eval config must be a JSON object");
    }
  }
  if (!args.seller.empty())
  {
    config["seller"] = parse_json(args.seller, "--seller");
  }
  if (!args.buyer.empty())
  {
    config["buyer"] = parse_json(args.buyer, "--buyer");
  }
  if (!args.mechanism.empty())
  {
    config["mechanism"] = mechanism_literal(args.mechanism);
  }
  if (!config.contains("seller") || !config.contains("mechanism"))
  {
    throw LiteralError("eval needs a seller and a mechanism");
  }

  Distribution const seller = distribution_from_json(config.at("seller"));
  PriceRule const    rule   = rule_from_json(config.at("mechanism"));

  std::vector<Distribution> buyers;
  if (config.contains("buyer"))
  {
    buyers.push_back(distribution_from_json(config.at("buyer")));
  }
  if (config.contains("buyers"))
  {
    for (auto const &b : config.at("buyers"))
    {
      buyers.push_back(distribution_from_json(b));
    }
  }
  if (config.contains("buyer_grid"))
  {
    for (auto const &b : config.at("buyer_grid"))
    {
      if (!b.is_number())
      {
        throw LiteralError("buyer_grid must hold numbers");
      }
      buyers.push_back(Distribution::point_mass(b.get<double>()));
    }
  }
  if (buyers.empty())
  {
    throw LiteralError("eval needs a buyer, buyers or buyer_grid");
  }

  std::uint64_t samples = 0;
  if (config.contains("monte_carlo"))
  {
    if (!config.at("monte_carlo").is_number_unsigned())
    {
      throw LiteralError("monte_carlo must be a sample count");
    }
    samples = config.at("monte_carlo").get<std::uint64_t>();
  }
  if (args.mc_samples)
  {
    samples = *args.mc_samples;
  }

  Json        reports   = Json::array();
  std::string csv       = report_csv_header() + "\n";
  double      min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < buyers.size(); ++i)
  {
    auto const report = evaluate(rule, seller, buyers[i]);
    Json       row    = report_to_json(report);
    row["buyer"]      = i;
    if (samples > 0)
    {
      auto const mc     = monte_carlo_welfare(rule, seller, buyers[i], samples, seed);
      row["monte_carlo"] = {{"mean", round12(mc.mean)},
                            {"std_error", round12(mc.std_error)},
                            {"samples", mc.samples}};
    }
    reports.push_back(row);
    csv += report_csv_row(report) + "\n";
    min_ratio = std::min(min_ratio, report.ratio);
  }

  Json doc{{"seed", seed},
           {"mechanism", rule_to_json(rule)},
           {"reports", reports},
           {"min_ratio", round12(min_ratio)}};
  if (!args.json_out.empty())
  {
    write_file(args.json_out, dump(doc));
  }
  emit(out, args.csv_out, csv);
  return kOk;
}

struct SweepArgs
{
  std::string                  scenario;
  std::vector<double>          values;
  std::optional<double>        from;
  std::optional<double>        to;
  int                          steps = 0;
  std::string                  mechanism;
  std::string                  objective;
  double                       epsilon = 0.01;
  std::string                  out;
};

int cmd_sweep(SweepArgs const &args, std::ostream &out)
{
  PriceRule rule       = default_rule(args.scenario);
  Objective objective  = args.scenario == "gft" ? Objective::gft : Objective::welfare;
  if (!args.objective.empty())
  {
    objective = objective_from_string(args.objective);
  }
  if (!args.mechanism.empty())
  {
    Json const literal = mechanism_literal(args.mechanism);
    rule               = rule_from_json(literal);
    bool const explicit_objective =
        literal.is_object() && literal.contains("params") && literal["params"].contains("objective");
    if (auto *best = std::get_if<BestFixedRule>(&rule); best && !explicit_objective)
    {
      best->objective = objective;
    }
  }
  else if (auto *best = std::get_if<BestFixedRule>(&rule))
  {
    best->objective = objective;
  }

  std::vector<double> params = args.values;
  if (args.from || args.to)
  {
    if (!args.from || !args.to || args.steps < 0)
    {
      throw LiteralError("a range needs --from, --to and a nonnegative --steps");
    }
    for (int i = 0; i < args.steps; ++i)
    {
      double const w = args.steps == 1 ? 0.0 : static_cast<double>(i) / (args.steps - 1);
      params.push_back(*args.from + (*args.to - *args.from) * w);
    }
  }

  SweepOptions options;
  options.objective = objective;
  options.epsilon   = args.epsilon;
  emit(out, args.out, sweep_csv(sweep(args.scenario, params, rule, options)));
  return kOk;
}

int cmd_certify(std::string const &path, std::string const &out_path, std::ostream &out,
                std::ostream &err)
{
  auto const instance = instance_from_json(parse_json(read_file(path), path));
  auto const cert     = certify(instance);
  emit(out, out_path, dump(certificate_to_json(cert, instance)));
  if (!cert.pass())
  {
    err << fmt::format("certificate for '{}' failed:{}{}{}\n", cert.instance,
                       cert.dsic.pass ? "" : " dsic", cert.ir.pass ? "" : " ir",
                       cert.bb.pass ? "" : " bb");
    return kCertifyFailed;
  }
  return kOk;
}

int cmd_reduce(std::string const &path, std::string const &out_path, std::ostream &out)
{
  auto const req     = reduce_request_from_json(parse_json(read_file(path), path));
  auto const outcome = dissolve_partnership(req.instance, req.rule, req.reports);
  emit(out, out_path, outcome_csv(outcome));
  return kOk;
}

int cmd_scenario_list(std::ostream &out)
{
  out << "name,parameter,description\n";
  for (auto const &s : scenario_list())
  {
    out << fmt::format("{},{},{}\n", s.name, s.parameter, s.description);
  }
  return kOk;
}

}  // namespace

int run(int argc, char const *const *argv, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Posted-price mechanisms for bilateral trade: evaluation, sweeps and certification"};
  app.require_subcommand(1);

  std::uint64_t seed = 42;
  app.add_option("--seed", seed, "Seed for Monte Carlo cross-checks")->capture_default_str();

  EvalArgs eval_args;
  auto    *eval = app.add_subcommand("eval", "Evaluate a mechanism against seller and buyer distributions");
  eval->add_option("--config", eval_args.config, "JSON run descriptor");
  eval->add_option("--seller", eval_args.seller, "Seller distribution literal (JSON)");
  eval->add_option("--buyer", eval_args.buyer, "Buyer distribution literal (JSON)");
  eval->add_option("--mechanism", eval_args.mechanism, "Mechanism literal (JSON) or kind name");
  eval->add_option("--json", eval_args.json_out, "Write the JSON report here");
  eval->add_option("--csv", eval_args.csv_out, "Write the CSV report here instead of stdout");
  eval->add_option("--mc-samples", eval_args.mc_samples, "Monte Carlo samples per buyer");

  SweepArgs sweep_args;
  auto     *sweep_cmd = app.add_subcommand("sweep", "Sweep a scenario parameter");
  sweep_cmd->add_option("--scenario", sweep_args.scenario, "Scenario name")->required();
  sweep_cmd->add_option("--values", sweep_args.values, "Parameter values")->delimiter(',');
  sweep_cmd->add_option("--from", sweep_args.from, "Range start");
  sweep_cmd->add_option("--to", sweep_args.to, "Range end");
  sweep_cmd->add_option("--steps", sweep_args.steps, "Number of range points");
  sweep_cmd->add_option("--mechanism", sweep_args.mechanism, "Mechanism literal (JSON) or kind name");
  sweep_cmd->add_option("--objective", sweep_args.objective, "welfare or gft");
  sweep_cmd->add_option("--epsilon", sweep_args.epsilon, "Fixed epsilon for the mb scenario")
      ->capture_default_str();
  sweep_cmd->add_option("--out", sweep_args.out, "Write the CSV here instead of stdout");

  std::string instance_path;
  std::string certify_out;
  auto       *certify_cmd = app.add_subcommand("certify", "Exhaustively certify DSIC, IR and budget balance");
  certify_cmd->add_option("instance", instance_path, "Instance JSON file")->required();
  certify_cmd->add_option("--out", certify_out, "Write the certificate here instead of stdout");

  std::string reduce_path;
  std::string reduce_out;
  auto       *reduce_cmd = app.add_subcommand("reduce", "Run partnership dissolving on one report profile");
  reduce_cmd->add_option("request", reduce_path, "Request JSON file")->required();
  reduce_cmd->add_option("--out", reduce_out, "Write the outcome CSV here instead of stdout");

  auto *scenario_cmd = app.add_subcommand("scenario", "Scenario catalogue");
  scenario_cmd->require_subcommand(1);
  auto *list_cmd = scenario_cmd->add_subcommand("list", "List scenario names");

  try
  {
    app.parse(argc, argv);
  }
  catch (CLI::CallForHelp const &e)
  {
    return app.exit(e, out, err);
  }
  catch (CLI::ParseError const &e)
  {
    app.exit(e, out, err);
    return kBadInput;
  }

  try
  {
    if (eval->parsed())
    {
      return cmd_eval(eval_args, seed, out);
    }
    if (sweep_cmd->parsed())
    {
      return cmd_sweep(sweep_args, out);
    }
    if (certify_cmd->parsed())
    {
      return cmd_certify(instance_path, certify_out, out, err);
    }
    if (reduce_cmd->parsed())
    {
      return cmd_reduce(reduce_path, reduce_out, out);
    }
    if (list_cmd->parsed())
    {
      return cmd_scenario_list(out);
    }
  }
  catch (InstanceTooLarge const &e)
  {
    err << "error: " << e.what() << "\n";
    return kTooLarge;
  }
  catch (InvalidArgument const &e)
  {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  }
  catch (std::exception const &e)
  {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kBadInput;
}

}  // namespace bitrade::cli
