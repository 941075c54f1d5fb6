// Copyright 2026 The bitrade Authors
// SPDX-License-Identifier: Apache-2.0

#include "bitrade/evaluation.hpp"

#include "bitrade/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <string_view>

namespace bitrade {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts...
{
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<double> merged_breakpoints(Distribution const &a, Distribution const &b)
{
  auto grid = a.breakpoints();
  auto more = b.breakpoints();
  grid.insert(grid.end(), more.begin(), more.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

/// A finite upper end for price searches over possibly unbounded supports.
double effective_upper(Distribution const &d)
{
  return d.bounded() ? d.support_hi() : d.quantile(1.0 - 1e-12);
}

}  // namespace

std::string to_string(Objective o)
{
  return o == Objective::welfare ? "welfare" : "gft";
}

Objective objective_from_string(std::string const &name)
{
  if (name == "welfare")
  {
    return Objective::welfare;
  }
  if (name == "gft")
  {
    return Objective::gft;
  }
  throw InvalidArgument(fmt::format("unknown objective '{}'", name));
}

std::string rule_name(PriceRule const &rule)
{
  return std::visit(overloaded{
                        [](FixedRule const &) -> std::string { return "fixed"; },
                        [](MedianRule const &) -> std::string { return "median"; },
                        [](WeightedMedianRule const &) -> std::string { return "weighted_median"; },
                        [](BuyerMedianRule const &) -> std::string { return "buyer_median"; },
                        [](RandomQuantileRule const &) -> std::string { return "random_quantile"; },
                        [](BestFixedRule const &) -> std::string { return "best_fixed"; },
                    },
                    rule);
}

bool is_deterministic(PriceRule const &rule)
{
  auto const *rq = std::get_if<RandomQuantileRule>(&rule);
  return rq == nullptr || rq->draw.has_value();
}

double posted_price(PriceRule const &rule, Distribution const &seller, Distribution const &buyer)
{
  return std::visit(
      overloaded{
          [](FixedRule const &r) { return FixedPriceMechanism(r.price).price(); },
          [&](MedianRule const &) { return median_price(seller); },
          [&](WeightedMedianRule const &) { return weighted_median_price(buyer); },
          [&](BuyerMedianRule const &) { return buyer.upper_quantile(0.5); },
          [&](RandomQuantileRule const &r) {
            if (!r.draw)
            {
              throw InvalidArgument("random-quantile rule posts a random price; freeze a draw first");
            }
            return RandomQuantileMechanism(seller).price(*r.draw);
          },
          [&](BestFixedRule const &r) { return best_fixed_price(seller, buyer, r.objective).price; },
      },
      rule);
}

std::vector<PricePoint> price_lottery(PriceRule const &rule, Distribution const &seller,
                                      Distribution const &buyer)
{
  if (is_deterministic(rule))
  {
    return {{posted_price(rule, seller, buyer), 1.0}};
  }
  if (!seller.segments().empty())
  {
    throw InvalidArgument("random-quantile price lottery needs a purely atomic seller");
  }
  double const            floor_level = std::exp(-1.0);
  std::vector<PricePoint> lottery;
  double                  below = 0.0;
  for (auto const &atom : seller.atoms())
  {
    double const above = std::min(1.0, below + atom.mass);
    double const lo    = std::max(below, floor_level);
    if (above > lo)
    {
      lottery.push_back({atom.at, std::log(above / lo)});
    }
    below = above;
  }
  return lottery;
}

double optimal_welfare(Distribution const &seller, Distribution const &buyer)
{
  std::array<Distribution, 2> const pair{seller, buyer};
  return max_of(pair).mean();
}

double fixed_price_welfare(double p, Distribution const &seller, Distribution const &buyer)
{
  double const seller_accepts = seller.cdf(p);
  double const buyer_accepts  = buyer.survival(p);
  return seller_accepts * buyer.partial_expectation_above(p) + seller.mean() -
         buyer_accepts * seller.partial_expectation_below(p);
}

double fixed_price_gft(double p, Distribution const &seller, Distribution const &buyer)
{
  // Direct form; subtracting E[s] from the welfare loses digits when the gain
  // is small next to the values.
  double const seller_accepts = seller.cdf(p);
  double const buyer_accepts  = buyer.survival(p);
  return seller_accepts * buyer.partial_expectation_above(p) -
         buyer_accepts * seller.partial_expectation_below(p);
}

double quadrature_tolerance()
{
  if (char const *env = std::getenv("BITRADE_QUAD_TOL"))
  {
    char        *end = nullptr;
    double const tol = std::strtod(env, &end);
    if (end != env && tol > 0.0 && std::isfinite(tol))
    {
      return tol;
    }
  }
  return 1e-7;
}

namespace {

/// Integrates value(q(x)) / x over the random-quantile levels [1/e, 1].
QuadratureResult random_quantile_integral(RandomQuantileMechanism const &m, Distribution const &seller,
                                          Distribution const &buyer, double tolerance,
                                          double (*value)(double, Distribution const &,
                                                          Distribution const &))
{
  Distribution const &prices = m.seller_distribution();
  double const        lo     = std::exp(-1.0);

  // The integrand jumps where the posted price crosses a breakpoint of any
  // of the distributions; split the level range there.
  std::vector<double> cuts{lo, 1.0};
  auto                points = merged_breakpoints(seller, buyer);
  auto const          own    = prices.breakpoints();
  points.insert(points.end(), own.begin(), own.end());
  for (double y : points)
  {
    for (double level : {prices.cdf(y), prices.cdf_left(y)})
    {
      if (level > lo && level < 1.0)
      {
        cuts.push_back(level);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto integrand = [&](double x) {
    return value(prices.quantile(x), seller, buyer) / x;
  };

  QuadratureResult total{0.0, 0.0};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
  {
    double err = 0.0;
    total.value += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, cuts[i], cuts[i + 1], 15, tolerance, &err);
    total.error += err;
  }
  return total;
}

}  // namespace

QuadratureResult random_quantile_welfare_detailed(RandomQuantileMechanism const &m,
                                                  Distribution const            &seller,
                                                  Distribution const &buyer, double tolerance)
{
  return random_quantile_integral(m, seller, buyer, tolerance, fixed_price_welfare);
}

QuadratureResult random_quantile_welfare_detailed(RandomQuantileMechanism const &m,
                                                  Distribution const &buyer, double tolerance)
{
  return random_quantile_welfare_detailed(m, m.seller_distribution(), buyer, tolerance);
}

double random_quantile_welfare(RandomQuantileMechanism const &m, Distribution const &buyer)
{
  return random_quantile_welfare_detailed(m, buyer, quadrature_tolerance()).value;
}

double random_quantile_welfare(RandomQuantileMechanism const &m, Distribution const &seller,
                               Distribution const &buyer)
{
  return random_quantile_welfare_detailed(m, seller, buyer, quadrature_tolerance()).value;
}

double optimal_gft(Distribution const &seller, Distribution const &buyer)
{
  auto const grid      = merged_breakpoints(seller, buyer);
  bool const unbounded = !seller.bounded() || !buyer.bounded();
  double     total     = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
  {
    double const x    = grid[i];
    double const next = i + 1 < grid.size() ? grid[i + 1] : (unbounded ? kInf : x);
    if (!(next > x))
    {
      continue;
    }
    ExpPoly integrand =
        seller.cdf_on_cell(x) * (ExpPoly::constant(1.0) - buyer.cdf_on_cell(x));
    if (std::isinf(next))
    {
      integrand = integrand.pruned(1e-15);
      if (!integrand.decays())
      {
        throw InvalidArgument("gain from trade diverges on an unbounded support");
      }
    }
    total += integrand.integrate(next - x);
  }
  return std::max(0.0, total);
}

double gft_at_price_exponential(double p, double t)
{
  if (!(t > 0.0) || !std::isfinite(t))
  {
    throw InvalidArgument(fmt::format("t must be positive, got {}", t));
  }
  if (!(p >= 0.0 && p <= t))
  {
    throw InvalidArgument(fmt::format("price must lie in [0, t] = [0, {}], got {}", t, p));
  }
  double const lambda = -1.0 / std::expm1(-t);
  double const value  = (t + 2.0) * std::exp(-2.0 * t) + 2.0 * std::exp(-t) -
                       (p + 2.0) * std::exp(-p - t) - (t + 2.0 - p) * std::exp(p - 2.0 * t);
  return lambda * lambda * value;
}

double optimal_gft_exponential(double t)
{
  if (!(t > 0.0) || !std::isfinite(t))
  {
    throw InvalidArgument(fmt::format("t must be positive, got {}", t));
  }
  double const lambda = -1.0 / std::expm1(-t);
  return lambda * lambda * ((t - 2.0) * std::exp(-t) + (t + 2.0) * std::exp(-2.0 * t));
}

namespace {

__extension__ typedef unsigned __int128 u128;

/// x as digits * 10^exponent using the shortest decimal that round-trips.
struct Decimal
{
  std::uint64_t digits;
  int           exponent;
};

Decimal shortest_decimal(double x)
{
  std::array<char, 64> buf{};
  auto const           res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::scientific);
  std::string_view const text(buf.data(), static_cast<std::size_t>(res.ptr - buf.data()));
  auto const             e = text.find('e');
  Decimal                d{0, std::stoi(std::string(text.substr(e + 1)))};
  for (char ch : text.substr(0, e))
  {
    if (ch >= '0' && ch <= '9')
    {
      d.digits = d.digits * 10 + static_cast<std::uint64_t>(ch - '0');
      --d.exponent;
    }
  }
  ++d.exponent;
  return d;
}

/// n / d rounded to nearest, ties to even.
double divide_rounded(u128 n, u128 d)
{
  if (n == 0)
  {
    return 0.0;
  }
  u128 q   = n / d;
  u128 rem = n % d;
  int  exp = 0;
  bool sticky = false;
  while (q >> 64 != 0)
  {
    sticky = sticky || (q & 1) != 0;
    q >>= 1;
    ++exp;
  }
  while (q >> 63 == 0)
  {
    rem <<= 1;
    q <<= 1;
    if (rem >= d)
    {
      rem -= d;
      q |= 1;
    }
    --exp;
  }
  sticky = sticky || rem != 0;
  auto       m    = static_cast<std::uint64_t>(q);
  auto const low  = m & 0x7FF;
  m >>= 11;
  exp += 11;
  if (low > 0x400 || (low == 0x400 && (sticky || (m & 1) != 0)))
  {
    ++m;
  }
  return std::ldexp(static_cast<double>(m), exp);
}

}  // namespace

double gft_ratio_from_welfare_ratio(double x, double c)
{
  if (!(c > 0.0 && c <= 1.0))
  {
    throw InvalidArgument(fmt::format("GFT share c must lie in (0, 1], got {}", c));
  }
  if (!(x >= 0.0 && x <= 1.0))
  {
    throw InvalidArgument(fmt::format("welfare ratio must lie in [0, 1], got {}", x));
  }
  // Exact rational arithmetic on the decimal forms of x and c, with the binary
  // formula as the fallback when the common scale does not fit.
  Decimal const dx    = shortest_decimal(x);
  Decimal const dc    = shortest_decimal(c);
  int const     scale = -std::min({dx.exponent, dc.exponent, 0});
  if (scale <= 36 && dx.exponent + scale <= 19 && dc.exponent + scale <= 19)
  {
    u128 pow = 1;
    for (int i = 0; i < scale; ++i)
    {
      pow *= 10;
    }
    auto lift = [](Decimal const &d, int shift) {
      u128 v = d.digits;
      for (int i = 0; i < shift; ++i)
      {
        v *= 10;
      }
      return v;
    };
    u128 const X = lift(dx, dx.exponent + scale);
    u128 const C = lift(dc, dc.exponent + scale);
    if (X + C <= pow)
    {
      return 0.0;
    }
    return divide_rounded(X + C - pow, C);
  }
  return std::max(0.0, (x - (1.0 - c)) / c);
}

PriceChoice best_fixed_price(Distribution const &seller, Distribution const &buyer,
                             Objective objective)
{
  auto value = [&](double p) {
    return objective == Objective::welfare ? fixed_price_welfare(p, seller, buyer)
                                           : fixed_price_gft(p, seller, buyer);
  };

  double const lo = std::min(seller.support_lo(), buyer.support_lo());
  double const hi = std::max(effective_upper(seller), effective_upper(buyer));

  std::vector<PriceChoice> tried;
  constexpr int            kGrid = 10001;
  tried.reserve(kGrid + 64);
  for (int i = 0; i < kGrid; ++i)
  {
    double const p = hi > lo ? lo + (hi - lo) * i / (kGrid - 1) : lo;
    tried.push_back({p, value(p)});
  }
  std::size_t best_grid = 0;
  for (std::size_t i = 1; i < tried.size(); ++i)
  {
    if (tried[i].value > tried[best_grid].value)
    {
      best_grid = i;
    }
  }

  for (double y : merged_breakpoints(seller, buyer))
  {
    if (y >= lo && y <= hi)
    {
      tried.push_back({y, value(y)});
    }
  }

  if (hi > lo)
  {
    double       a        = tried[best_grid > 0 ? best_grid - 1 : 0].price;
    double       b        = tried[std::min<std::size_t>(best_grid + 1, kGrid - 1)].price;
    double const inv_phi  = (std::sqrt(5.0) - 1.0) / 2.0;
    double       c        = b - inv_phi * (b - a);
    double       d        = a + inv_phi * (b - a);
    double       fc       = value(c);
    double       fd       = value(d);
    for (int it = 0; it < 100 && b - a > 1e-13 * std::max(1.0, std::abs(b)); ++it)
    {
      if (fc >= fd)
      {
        b  = d;
        d  = c;
        fd = fc;
        c  = b - inv_phi * (b - a);
        fc = value(c);
      }
      else
      {
        a  = c;
        c  = d;
        fc = fd;
        d  = a + inv_phi * (b - a);
        fd = value(d);
      }
    }
    tried.push_back({c, fc});
    tried.push_back({d, fd});
  }

  double best = -kInf;
  for (auto const &t : tried)
  {
    best = std::max(best, t.value);
  }
  double const slack  = 1e-12 * std::abs(best);
  PriceChoice  chosen = {kInf, best};
  for (auto const &t : tried)
  {
    if (t.value >= best - slack && t.price < chosen.price)
    {
      chosen = t;
    }
  }
  return chosen;
}

QuadratureResult expected_welfare(PriceRule const &rule, Distribution const &seller,
                                  Distribution const &buyer)
{
  if (!is_deterministic(rule))
  {
    return random_quantile_welfare_detailed(RandomQuantileMechanism(seller), buyer,
                                            quadrature_tolerance());
  }
  return {fixed_price_welfare(posted_price(rule, seller, buyer), seller, buyer), 0.0};
}

QuadratureResult expected_gft(PriceRule const &rule, Distribution const &seller,
                              Distribution const &buyer)
{
  if (!is_deterministic(rule))
  {
    return random_quantile_integral(RandomQuantileMechanism(seller), seller, buyer,
                                    quadrature_tolerance(), fixed_price_gft);
  }
  return {fixed_price_gft(posted_price(rule, seller, buyer), seller, buyer), 0.0};
}

EvalReport evaluate(PriceRule const &rule, Distribution const &seller, Distribution const &buyer)
{
  EvalReport report;
  report.mechanism = rule_name(rule);
  report.price     = is_deterministic(rule) ? posted_price(rule, seller, buyer)
                                            : std::numeric_limits<double>::quiet_NaN();

  QuadratureResult const mech = is_deterministic(rule)
                                    ? QuadratureResult{fixed_price_welfare(report.price, seller, buyer), 0.0}
                                    : expected_welfare(rule, seller, buyer);
  report.mech_welfare = mech.value;
  report.opt_welfare  = optimal_welfare(seller, buyer);
  report.opt_gft      = optimal_gft(seller, buyer);
  QuadratureResult const gft = is_deterministic(rule)
                                   ? QuadratureResult{fixed_price_gft(report.price, seller, buyer), 0.0}
                                   : expected_gft(rule, seller, buyer);
  report.mech_gft     = gft.value;
  report.ratio        = report.opt_welfare > 0.0 ? report.mech_welfare / report.opt_welfare : 1.0;
  report.gft_ratio    = report.opt_gft > 0.0 ? report.mech_gft / report.opt_gft : 1.0;
  report.quadrature_error =
      std::max(mech.error, gft.error) +
      64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, report.opt_welfare);
  return report;
}

MonteCarloEstimate monte_carlo_welfare(PriceRule const &rule, Distribution const &seller,
                                       Distribution const &buyer, std::uint64_t samples,
                                       std::uint64_t seed)
{
  if (samples == 0)
  {
    throw InvalidArgument("Monte Carlo needs at least one sample");
  }
  std::mt19937_64 gen(seed);
  auto            uniform = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };

  bool const             randomized = !is_deterministic(rule);
  std::optional<double>  fixed;
  std::optional<RandomQuantileMechanism> rq;
  if (randomized)
  {
    rq.emplace(seller);
  }
  else
  {
    fixed = posted_price(rule, seller, buyer);
  }

  double sum   = 0.0;
  double sumsq = 0.0;
  for (std::uint64_t i = 0; i < samples; ++i)
  {
    double const s     = seller.quantile(uniform());
    double const b     = buyer.quantile(uniform());
    double const price = randomized ? rq->price(uniform()) : *fixed;
    double const w     = fixed_price_outcome(price, s, b).traded ? b : s;
    sum += w;
    sumsq += w * w;
  }
  double const n    = static_cast<double>(samples);
  double const mean = sum / n;
  double const var  = std::max(0.0, sumsq / n - mean * mean);
  return {mean, std::sqrt(var / n), samples};
}

}  // namespace bitrade
