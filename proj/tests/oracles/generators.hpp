// Copyright 2026 The bitrade Authors
// SPDX-License-Identifier: Apache-2.0

// Hand-rolled generators for property tests. Every generator is a pure
// function of the engine state, so a failing case is reproduced by its seed.

#pragma once

#include "oracles.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace bitrade::gen {

using Engine = std::mt19937_64;

inline double uniform(Engine &e, double lo, double hi)
{
  return std::uniform_real_distribution<double>(lo, hi)(e);
}

inline int integer(Engine &e, int lo, int hi)
{
  return std::uniform_int_distribution<int>(lo, hi)(e);
}

/// Probabilities summing to 1 (normalized exponential draws).
inline std::vector<double> simplex(Engine &e, std::size_t n)
{
  std::exponential_distribution<double> expo(1.0);
  std::vector<double>                   w(n);
  double                                total = 0.0;
  for (auto &x : w)
  {
    x = expo(e) + 1e-3;
    total += x;
  }
  for (auto &x : w)
  {
    x /= total;
  }
  return w;
}

/// A random mixture of disjoint uniform and exponential pieces plus atoms,
/// supported in [0, scale].
inline oracle::RefDist mixture(Engine &e, double scale = 3.0)
{
  int const           segments = integer(e, 0, 3);
  int const           atoms    = segments == 0 ? integer(e, 1, 3) : integer(e, 0, 2);
  std::vector<double> cuts;
  for (int i = 0; i < 2 * segments; ++i)
  {
    cuts.push_back(uniform(e, 0.0, scale));
  }
  std::sort(cuts.begin(), cuts.end());
  auto const      mass = simplex(e, static_cast<std::size_t>(segments + atoms));
  oracle::RefDist d;
  d.name = "mixture";
  for (int i = 0; i < segments; ++i)
  {
    double const lo = cuts[2 * i];
    double const hi = std::max(cuts[2 * i + 1], lo + 1e-3);
    double const rate = integer(e, 0, 1) == 0 ? 0.0 : uniform(e, -3.0, 3.0);
    d.pieces.push_back({lo, hi, mass[i], rate});
  }
  for (int i = 0; i < atoms; ++i)
  {
    double const at = uniform(e, 0.0, scale);
    d.pieces.push_back({at, at, mass[segments + i], 0.0});
  }
  // Disjointness can fail only through the clamp above; push overlaps apart.
  std::sort(d.pieces.begin(), d.pieces.end(), [](auto const &a, auto const &b) { return a.lo < b.lo; });
  double last_hi = 0.0;
  for (auto &p : d.pieces)
  {
    if (p.lo != p.hi)
    {
      if (p.lo < last_hi)
      {
        double const width = p.hi - p.lo;
        p.lo               = last_hi;
        p.hi               = last_hi + width;
      }
      last_hi = p.hi;
    }
  }
  return d;
}

/// Atom-free variant of `mixture`.
inline oracle::RefDist continuous(Engine &e, double scale = 3.0)
{
  while (true)
  {
    auto d = mixture(e, scale);
    if (std::none_of(d.pieces.begin(), d.pieces.end(), [](auto const &p) { return p.lo == p.hi; }))
    {
      return d;
    }
  }
}

/// Purely atomic distribution with `count` points in [0, scale].
inline std::vector<Atom> atoms(Engine &e, int count, double scale)
{
  auto const        mass = simplex(e, static_cast<std::size_t>(count));
  std::vector<Atom> out;
  for (int i = 0; i < count; ++i)
  {
    out.push_back({std::round(uniform(e, 0.0, scale) * 100.0) / 100.0, mass[i]});
  }
  return out;
}

}  // namespace bitrade::gen
