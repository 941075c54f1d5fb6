// Copyright 2026 The bitrade Authors
// SPDX-License-Identifier: Apache-2.0

#include "bitrade/distribution.hpp"

#include "bitrade/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

namespace bitrade {

namespace {

constexpr double kInf           = std::numeric_limits<double>::infinity();
constexpr double kMassTolerance = 1e-12;

double binomial(int n, int k)
{
  double r = 1.0;
  for (int i = 1; i <= k; ++i)
  {
    r = r * (n - k + i) / i;
  }
  return r;
}

/// Smallest double x in [lo, hi] with pred(x), assuming 0 <= lo <= hi < inf,
/// pred monotone and pred(hi) true. Bisects on the IEEE bit pattern, which is
/// order preserving for nonnegative doubles, so it terminates in <= 64 steps.
template <typename Pred>
double smallest_true(double lo, double hi, Pred &&pred)
{
  if (pred(lo))
  {
    return lo;
  }
  auto a = std::bit_cast<std::uint64_t>(lo);
  auto b = std::bit_cast<std::uint64_t>(hi);
  while (b - a > 1)
  {
    std::uint64_t const m = a + (b - a) / 2;
    if (pred(std::bit_cast<double>(m)))
    {
      b = m;
    }
    else
    {
      a = m;
    }
  }
  return std::bit_cast<double>(b);
}

template <typename Pred>
double smallest_true_unbounded(double lo, double hi, Pred &&pred)
{
  if (std::isinf(hi))
  {
    double step = std::max(1.0, lo);
    hi          = lo + step;
    while (!pred(hi))
    {
      step *= 2.0;
      hi = lo + step;
      if (std::isinf(hi))
      {
        return kInf;
      }
    }
  }
  return smallest_true(lo, hi, pred);
}

void require_finite_nonnegative(double x, char const *what)
{
  if (!std::isfinite(x) || x < 0.0)
  {
    throw InvalidArgument(fmt::format("{} must be finite and nonnegative, got {}", what, x));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Segment

Segment::Segment(double lo, double hi, ExpPoly increment, double mass)
  : lo_(lo)
  , hi_(hi)
  , increment_(std::move(increment))
  , density_(increment_.derivative())
  , mass_(mass)
{
  if (!std::isfinite(lo) || std::isnan(hi) || !(hi > lo))
  {
    throw InvalidArgument(fmt::format("segment needs lo < hi, got [{}, {})", lo, hi));
  }
  if (std::isinf(hi) && !density_.decays())
  {
    throw InvalidArgument("unbounded segment with a non-decaying density");
  }
  if (!(mass_ >= 0.0) || !std::isfinite(mass_))
  {
    throw InvalidArgument(fmt::format("segment mass must be nonnegative, got {}", mass_));
  }
  expectation_ = lo_ * mass_ + density_.integrate_weighted(hi_ - lo_);
}

Segment Segment::uniform(double lo, double hi, double mass)
{
  if (!(hi > lo) || !std::isfinite(hi))
  {
    throw InvalidArgument(fmt::format("uniform segment needs finite lo < hi, got [{}, {})", lo, hi));
  }
  return Segment(lo, hi, ExpPoly::monomial(mass / (hi - lo), 1), mass);
}

Segment Segment::exponential(double lo, double hi, double mass, double rate)
{
  if (rate == 0.0)
  {
    return uniform(lo, hi, mass);
  }
  if (std::isinf(hi))
  {
    if (rate >= 0.0)
    {
      throw InvalidArgument("unbounded exponential segment needs a negative rate");
    }
    return Segment(lo, hi, ExpPoly::constant(mass) - ExpPoly::monomial(mass, 0, rate), mass);
  }
  double const c = mass / std::expm1(rate * (hi - lo));
  return Segment(lo, hi, ExpPoly::monomial(c, 0, rate) - ExpPoly::constant(c), mass);
}

Segment Segment::polynomial(double lo, double hi, std::vector<double> const &coeffs)
{
  if (!std::isfinite(hi) || !(hi > lo))
  {
    throw InvalidArgument("polynomial segment needs finite lo < hi");
  }
  // density(lo + u) = sum_j b_j u^j
  std::vector<double> b(coeffs.size(), 0.0);
  for (std::size_t n = 0; n < coeffs.size(); ++n)
  {
    for (std::size_t j = 0; j <= n; ++j)
    {
      b[j] += coeffs[n] * binomial(static_cast<int>(n), static_cast<int>(j)) *
              std::pow(lo, static_cast<double>(n - j));
    }
  }
  ExpPoly inc;
  for (std::size_t j = 0; j < b.size(); ++j)
  {
    inc = inc + ExpPoly::monomial(b[j] / static_cast<double>(j + 1), static_cast<int>(j) + 1);
  }
  ExpPoly const density = inc.derivative();
  double const  width   = hi - lo;
  double        scale   = 0.0;
  for (double c : coeffs)
  {
    scale = std::max(scale, std::abs(c));
  }
  for (int i = 0; i <= 64; ++i)
  {
    if (density(width * i / 64.0) < -1e-12 * std::max(1.0, scale))
    {
      throw InvalidArgument("polynomial density is negative inside its segment");
    }
  }
  return Segment(lo, hi, inc, inc(width));
}

Segment Segment::from_increment(double lo, double hi, ExpPoly increment)
{
  ExpPoly const inc  = increment - ExpPoly::constant(increment(0.0));
  double const  mass = std::isinf(hi) ? inc.pruned(1e-15).limit_at_infinity() : inc(hi - lo);
  return Segment(lo, hi, inc, std::max(0.0, mass));
}

bool Segment::bounded() const
{
  return std::isfinite(hi_);
}

double Segment::mass_below(double x) const
{
  if (x <= lo_)
  {
    return 0.0;
  }
  if (x >= hi_)
  {
    return mass_;
  }
  return std::clamp(increment_(x - lo_), 0.0, mass_);
}

double Segment::expectation_below(double x) const
{
  if (x <= lo_)
  {
    return 0.0;
  }
  if (x >= hi_)
  {
    return expectation_;
  }
  double const u = x - lo_;
  return std::clamp(lo_ * increment_(u) + density_.integrate_weighted(u), 0.0, expectation_);
}

double Segment::mass_above(double x) const
{
  if (x >= hi_)
  {
    return 0.0;
  }
  if (x <= lo_)
  {
    return mass_;
  }
  return std::clamp(density_.integrate_between(x - lo_, hi_ - lo_), 0.0, mass_);
}

double Segment::expectation_above(double x) const
{
  if (x >= hi_)
  {
    return 0.0;
  }
  if (x <= lo_)
  {
    return expectation_;
  }
  double const u = x - lo_;
  double const w = hi_ - lo_;
  return std::clamp(lo_ * density_.integrate_between(u, w) + density_.integrate_weighted_between(u, w),
                    0.0, expectation_);
}

// ---------------------------------------------------------------------------
// Distribution

Distribution::Distribution(std::vector<Segment> segments, std::vector<Atom> atoms)
{
  for (auto const &a : atoms)
  {
    require_finite_nonnegative(a.at, "atom location");
    if (!(a.mass >= 0.0) || !std::isfinite(a.mass))
    {
      throw InvalidArgument(fmt::format("atom mass must be nonnegative, got {}", a.mass));
    }
  }
  std::erase_if(atoms, [](Atom const &a) { return a.mass == 0.0; });
  std::sort(atoms.begin(), atoms.end(), [](Atom const &x, Atom const &y) { return x.at < y.at; });
  for (auto const &a : atoms)
  {
    if (!atoms_.empty() && atoms_.back().at == a.at)
    {
      atoms_.back().mass += a.mass;
    }
    else
    {
      atoms_.push_back(a);
    }
  }

  std::erase_if(segments, [](Segment const &s) { return s.mass() == 0.0; });
  std::sort(segments.begin(), segments.end(),
            [](Segment const &x, Segment const &y) { return x.lo() < y.lo(); });
  for (std::size_t i = 0; i < segments.size(); ++i)
  {
    require_finite_nonnegative(segments[i].lo(), "segment lower end");
    if (i + 1 < segments.size() && segments[i].hi() > segments[i + 1].lo())
    {
      throw InvalidArgument(fmt::format("segments [{}, {}) and [{}, {}) overlap", segments[i].lo(),
                                        segments[i].hi(), segments[i + 1].lo(),
                                        segments[i + 1].hi()));
    }
  }

  // Split every segment at interior atoms so that components are totally ordered.
  for (auto const &seg : segments)
  {
    Segment rest = seg;
    for (auto const &a : atoms_)
    {
      if (a.at > rest.lo() && a.at < rest.hi())
      {
        double const  u    = a.at - rest.lo();
        ExpPoly const tail = rest.increment().shifted(u);
        segments_.push_back(Segment::from_increment(rest.lo(), a.at, rest.increment()));
        rest = Segment::from_increment(a.at, rest.hi(), tail);
      }
    }
    if (rest.mass() > 0.0)
    {
      segments_.push_back(rest);
    }
  }

  std::size_t si = 0;
  std::size_t ai = 0;
  while (si < segments_.size() || ai < atoms_.size())
  {
    bool const take_atom =
        ai < atoms_.size() && (si == segments_.size() || atoms_[ai].at <= segments_[si].lo());
    if (take_atom)
    {
      components_.push_back({atoms_[ai].at, atoms_[ai].at, -1, static_cast<int>(ai)});
      ++ai;
    }
    else
    {
      components_.push_back({segments_[si].lo(), segments_[si].hi(), static_cast<int>(si), -1});
      ++si;
    }
  }
  if (components_.empty())
  {
    throw InvalidArgument("distribution has no mass");
  }

  double mass = 0.0;
  double pe   = 0.0;
  for (auto const &c : components_)
  {
    cum_mass_.push_back(mass);
    cum_pe_.push_back(pe);
    if (c.segment >= 0)
    {
      mass += segments_[c.segment].mass();
      pe += segments_[c.segment].expectation();
    }
    else
    {
      mass += atoms_[c.atom].mass;
      pe += atoms_[c.atom].at * atoms_[c.atom].mass;
    }
  }
  total_mass_ = mass;
  mean_       = pe;

  tail_mass_.assign(components_.size() + 1, 0.0);
  tail_pe_.assign(components_.size() + 1, 0.0);
  for (std::size_t i = components_.size(); i-- > 0;)
  {
    auto const &c = components_[i];
    double const m = c.segment >= 0 ? segments_[c.segment].mass() : atoms_[c.atom].mass;
    double const e = c.segment >= 0 ? segments_[c.segment].expectation()
                                    : atoms_[c.atom].at * atoms_[c.atom].mass;
    tail_mass_[i] = tail_mass_[i + 1] + m;
    tail_pe_[i]   = tail_pe_[i + 1] + e;
  }
  if (std::abs(total_mass_ - 1.0) > kMassTolerance)
  {
    throw InvalidArgument(fmt::format("distribution mass is {:.17g}, expected 1", total_mass_));
  }
  support_lo_ = components_.front().start;
  support_hi_ = 0.0;
  for (auto const &c : components_)
  {
    support_hi_ = std::max(support_hi_, c.end);
  }
}

Distribution Distribution::uniform(double lo, double hi)
{
  return Distribution({Segment::uniform(lo, hi, 1.0)}, {});
}

Distribution Distribution::exponential(double rate, double lo)
{
  if (!(rate > 0.0) || !std::isfinite(rate))
  {
    throw InvalidArgument(fmt::format("exponential rate must be positive, got {}", rate));
  }
  return Distribution({Segment::exponential(lo, kInf, 1.0, -rate)}, {});
}

Distribution Distribution::point_mass(double at)
{
  return Distribution({}, {{at, 1.0}});
}

Distribution Distribution::discrete(std::vector<Atom> atoms)
{
  return Distribution({}, std::move(atoms));
}

bool Distribution::bounded() const
{
  return std::isfinite(support_hi_);
}

std::size_t Distribution::component_at_or_below(double x) const
{
  auto it = std::upper_bound(components_.begin(), components_.end(), x,
                             [](double v, Component const &c) { return v < c.start; });
  return static_cast<std::size_t>(it - components_.begin());
}

std::size_t Distribution::component_below(double x) const
{
  auto it = std::lower_bound(components_.begin(), components_.end(), x,
                             [](Component const &c, double v) { return c.start < v; });
  return static_cast<std::size_t>(it - components_.begin());
}

double Distribution::cdf(double x) const
{
  std::size_t const n = component_at_or_below(x);
  if (n == 0)
  {
    return 0.0;
  }
  std::size_t const i = n - 1;
  auto const       &c = components_[i];
  double const      inside =
      c.segment >= 0 ? segments_[c.segment].mass_below(x) : atoms_[c.atom].mass;
  return std::min(1.0, cum_mass_[i] + inside);
}

double Distribution::cdf_left(double x) const
{
  std::size_t const n = component_below(x);
  if (n == 0)
  {
    return 0.0;
  }
  std::size_t const i = n - 1;
  auto const       &c = components_[i];
  double const      inside =
      c.segment >= 0 ? segments_[c.segment].mass_below(x) : atoms_[c.atom].mass;
  return std::min(1.0, cum_mass_[i] + inside);
}

double Distribution::atom_mass(double x) const
{
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                             [](Atom const &a, double v) { return a.at < v; });
  return it != atoms_.end() && it->at == x ? it->mass : 0.0;
}

double Distribution::partial_expectation_below(double x) const
{
  std::size_t const n = component_at_or_below(x);
  if (n == 0)
  {
    return 0.0;
  }
  std::size_t const i = n - 1;
  auto const       &c = components_[i];
  double const      inside = c.segment >= 0 ? segments_[c.segment].expectation_below(x)
                                            : atoms_[c.atom].at * atoms_[c.atom].mass;
  return std::min(mean_, cum_pe_[i] + inside);
}

double Distribution::survival(double x) const
{
  std::size_t const n = component_below(x);
  double const      partial =
      n > 0 && components_[n - 1].segment >= 0 ? segments_[components_[n - 1].segment].mass_above(x) : 0.0;
  return std::min(1.0, tail_mass_[n] + partial);
}

double Distribution::partial_expectation_above(double x) const
{
  std::size_t const n       = component_below(x);
  double const      partial = n > 0 && components_[n - 1].segment >= 0
                                  ? segments_[components_[n - 1].segment].expectation_above(x)
                                  : 0.0;
  return std::min(mean_, tail_pe_[n] + partial);
}

double Distribution::solve_in_segment(Segment const &seg, double base, double target) const
{
  auto pred = [&](double x) { return base + seg.mass_below(x) >= target; };
  return smallest_true_unbounded(seg.lo(), seg.hi(), pred);
}

double Distribution::quantile(double u) const
{
  if (!(u >= 0.0 && u <= 1.0))
  {
    throw InvalidArgument(fmt::format("quantile level must lie in [0, 1], got {}", u));
  }
  if (u == 0.0)
  {
    return support_lo_;
  }
  for (std::size_t i = 0; i < components_.size(); ++i)
  {
    auto const  &c    = components_[i];
    double const mass = c.segment >= 0 ? segments_[c.segment].mass() : atoms_[c.atom].mass;
    if (cum_mass_[i] + mass >= u)
    {
      if (c.segment < 0)
      {
        return c.start;
      }
      return solve_in_segment(segments_[c.segment], cum_mass_[i], u);
    }
  }
  return support_hi_;
}

double Distribution::upper_quantile(double u) const
{
  if (!(u >= 0.0 && u <= 1.0))
  {
    throw InvalidArgument(fmt::format("quantile level must lie in [0, 1], got {}", u));
  }
  for (std::size_t i = 0; i < components_.size(); ++i)
  {
    auto const  &c    = components_[i];
    double const mass = c.segment >= 0 ? segments_[c.segment].mass() : atoms_[c.atom].mass;
    if (cum_mass_[i] + mass > u)
    {
      if (c.segment < 0)
      {
        return c.start;
      }
      // Densities vanish only at isolated points, so the infimum of
      // {cdf > u} is where the segment reaches u.
      return solve_in_segment(segments_[c.segment], cum_mass_[i], u);
    }
  }
  return support_hi_;
}

double Distribution::expectation_quantile(double target) const
{
  for (std::size_t i = 0; i < components_.size(); ++i)
  {
    auto const &c = components_[i];
    if (c.segment < 0)
    {
      if (cum_pe_[i] + atoms_[c.atom].at * atoms_[c.atom].mass >= target)
      {
        return c.start;
      }
      continue;
    }
    Segment const &seg = segments_[c.segment];
    if (cum_pe_[i] + seg.expectation() >= target)
    {
      double const base = cum_pe_[i];
      return smallest_true_unbounded(seg.lo(), seg.hi(), [&](double x) {
        return base + seg.expectation_below(x) >= target;
      });
    }
  }
  return support_hi_;
}

std::vector<double> Distribution::breakpoints() const
{
  std::vector<double> pts;
  for (auto const &s : segments_)
  {
    pts.push_back(s.lo());
    if (s.bounded())
    {
      pts.push_back(s.hi());
    }
  }
  for (auto const &a : atoms_)
  {
    pts.push_back(a.at);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

ExpPoly Distribution::cdf_on_cell(double cell_lo) const
{
  for (std::size_t i = 0; i < components_.size(); ++i)
  {
    auto const &c = components_[i];
    if (c.segment >= 0 && c.start <= cell_lo && cell_lo < c.end)
    {
      Segment const &seg = segments_[c.segment];
      return ExpPoly::constant(cum_mass_[i]) + seg.increment().shifted(cell_lo - seg.lo());
    }
  }
  return ExpPoly::constant(cdf(cell_lo));
}

// ---------------------------------------------------------------------------
// Constructions

Distribution truncate_at(Distribution const &d, double b)
{
  if (std::isnan(b) || b < d.support_lo())
  {
    throw InvalidArgument(
        fmt::format("truncation point {} lies below the support start {}", b, d.support_lo()));
  }
  std::vector<Segment> segments;
  for (auto const &s : d.segments())
  {
    if (s.hi() <= b)
    {
      segments.push_back(s);
    }
    else if (s.lo() < b)
    {
      segments.push_back(Segment::from_increment(s.lo(), b, s.increment()));
    }
  }
  std::vector<Atom> atoms;
  for (auto const &a : d.atoms())
  {
    if (a.at < b)
    {
      atoms.push_back(a);
    }
  }
  double const tail = 1.0 - d.cdf_left(b);
  if (tail > 0.0)
  {
    atoms.push_back({b, tail});
  }
  return Distribution(std::move(segments), std::move(atoms));
}

Distribution max_of(std::span<Distribution const> ds)
{
  if (ds.empty())
  {
    throw InvalidArgument("max_of needs at least one distribution");
  }
  if (ds.size() == 1)
  {
    return ds.front();
  }

  std::vector<double> grid;
  bool                unbounded = false;
  for (auto const &d : ds)
  {
    auto const pts = d.breakpoints();
    grid.insert(grid.end(), pts.begin(), pts.end());
    unbounded = unbounded || !d.bounded();
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<Segment> segments;
  std::vector<Atom>    atoms;
  for (std::size_t i = 0; i < grid.size(); ++i)
  {
    double const x = grid[i];

    bool has_atom = false;
    for (auto const &d : ds)
    {
      has_atom = has_atom || d.atom_mass(x) > 0.0;
    }
    if (has_atom)
    {
      double at = 1.0;
      double before = 1.0;
      for (auto const &d : ds)
      {
        at *= d.cdf(x);
        before *= d.cdf_left(x);
      }
      if (at - before > 0.0)
      {
        atoms.push_back({x, at - before});
      }
    }

    double const next = i + 1 < grid.size() ? grid[i + 1] : (unbounded ? kInf : x);
    if (!(next > x))
    {
      continue;
    }
    ExpPoly product = ExpPoly::constant(1.0);
    for (auto const &d : ds)
    {
      product = product * d.cdf_on_cell(x);
    }
    ExpPoly increment = product - ExpPoly::constant(product(0.0));
    if (std::isinf(next))
    {
      increment = increment.pruned(1e-15);
    }
    if (increment.empty())
    {
      continue;
    }
    Segment seg = Segment::from_increment(x, next, increment);
    if (seg.mass() > 0.0)
    {
      segments.push_back(std::move(seg));
    }
  }
  return Distribution(std::move(segments), std::move(atoms));
}

}  // namespace bitrade
