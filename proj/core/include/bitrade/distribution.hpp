// Copyright 2026 The bitrade Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "bitrade/exp_poly.hpp"

#include <span>
#include <vector>

namespace bitrade {

/// A point mass.
struct Atom
{
  double at;
  double mass;
};

/**
 * A continuous piece of a distribution on [lo, hi), hi possibly +inf.
 *
 * The piece stores its CDF increment D(u) = P[lo < V <= lo + u] in closed form,
 * with D(0) = 0 and D(hi - lo) = mass().
 */
class Segment
{
public:
  /// Constant density carrying `mass` over [lo, hi).
  static Segment uniform(double lo, double hi, double mass);

  /// Density proportional to exp(rate * x) on [lo, hi), scaled to `mass`.
  /// `hi` may be +inf when rate < 0.
  static Segment exponential(double lo, double hi, double mass, double rate);

  /// Density sum_n coeffs[n] * x^n on [lo, hi) in absolute coordinates.
  /// The carried mass is the integral of that density.
  static Segment polynomial(double lo, double hi, std::vector<double> const &coeffs);

  /// Arbitrary nondecreasing increment; its value at u = 0 is subtracted.
  static Segment from_increment(double lo, double hi, ExpPoly increment);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double mass() const { return mass_; }
  bool   bounded() const;

  ExpPoly const &increment() const { return increment_; }
  ExpPoly const &density() const { return density_; }

  /// P[lo < V <= x] restricted to this piece, for x in [lo, hi].
  double mass_below(double x) const;

  /// E[V 1{lo < V <= x}] restricted to this piece, for x in [lo, hi].
  double expectation_below(double x) const;

  /// P[x < V < hi] restricted to this piece, integrated over the tail itself.
  double mass_above(double x) const;

  /// E[V 1{x < V < hi}] restricted to this piece.
  double expectation_above(double x) const;

  double expectation() const { return expectation_; }

private:
  Segment(double lo, double hi, ExpPoly increment, double mass);

  double  lo_;
  double  hi_;
  ExpPoly increment_;
  ExpPoly density_;
  double  mass_;
  double  expectation_;
};

/**
 * A value distribution on [0, inf) made of closed-form continuous pieces and
 * atoms. Immutable once built; every query is a pure function.
 *
 * Threshold convention: cdf(x) = P[V <= x] and cdf_left(x) = P[V < x]. An atom
 * at x is counted by both partial_expectation_below(x) and
 * partial_expectation_above(x).
 */
class Distribution
{
public:
  /// Validates and normalizes the parts. Total mass must be 1 within 1e-12.
  Distribution(std::vector<Segment> segments, std::vector<Atom> atoms);

  static Distribution uniform(double lo, double hi);
  static Distribution exponential(double rate, double lo = 0.0);
  static Distribution point_mass(double at);
  static Distribution discrete(std::vector<Atom> atoms);

  double cdf(double x) const;
  double cdf_left(double x) const;
  double atom_mass(double x) const;

  /// P[V >= x], summed over the tail rather than taken as 1 - cdf_left(x).
  double survival(double x) const;

  /// Smallest x with cdf(x) >= u; u = 0 maps to support_lo().
  double quantile(double u) const;

  /// inf{x : cdf(x) > u}, the right end of a flat region at level u.
  double upper_quantile(double u) const;

  /// E[V 1{V <= x}].
  double partial_expectation_below(double x) const;
  /// E[V 1{V >= x}].
  double partial_expectation_above(double x) const;

  /// Smallest x with partial_expectation_below(x) >= target.
  double expectation_quantile(double target) const;

  double mean() const { return mean_; }
  double total_mass() const { return total_mass_; }
  double support_lo() const { return support_lo_; }
  double support_hi() const { return support_hi_; }
  bool   has_atoms() const { return !atoms_.empty(); }
  bool   bounded() const;

  std::vector<Segment> const &segments() const { return segments_; }
  std::vector<Atom> const    &atoms() const { return atoms_; }

  /// Every segment endpoint and atom location, sorted and finite.
  std::vector<double> breakpoints() const;

  /// The CDF on the open cell (cell_lo, next breakpoint) as a function of
  /// u = x - cell_lo. Valid up to the next element of breakpoints().
  ExpPoly cdf_on_cell(double cell_lo) const;

private:
  struct Component
  {
    double start;
    double end;
    int    segment;  // -1 for atoms
    int    atom;     // -1 for segments
  };

  std::size_t component_at_or_below(double x) const;
  std::size_t component_below(double x) const;
  double      solve_in_segment(Segment const &seg, double base, double target) const;

  std::vector<Segment>   segments_;
  std::vector<Atom>      atoms_;
  std::vector<Component> components_;
  std::vector<double>    cum_mass_;  // mass strictly before component i
  std::vector<double>    cum_pe_;    // partial expectation strictly before component i
  std::vector<double>    tail_mass_;  // mass of components i.. (one extra trailing 0)
  std::vector<double>    tail_pe_;    // partial expectation of components i..
  double                 total_mass_ = 0.0;
  double                 mean_       = 0.0;
  double                 support_lo_ = 0.0;
  double                 support_hi_ = 0.0;
};

/// Keeps `d` below b and moves the remaining mass 1 - cdf_left(b) onto an atom at b.
Distribution truncate_at(Distribution const &d, double b);

/// Distribution of the max of independent draws; CDF is the product of CDFs.
Distribution max_of(std::span<Distribution const> ds);

}  // namespace bitrade
