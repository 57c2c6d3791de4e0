#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rpv/system.hpp"

namespace rpv {

/// f(x, y) = lambda x^2 + mu y^2 with non-zero integer weights.
struct GradientPotential {
  long lambda;
  long mu;

  GradientPotential(long l, long m);
};

/// Context (x, y) with the partial derivations d/dx, d/dy.
ContextPtr plane_context();

/// dx/dt = 2 lambda x, dy/dt = 2 mu y as a constant system in one derivation t.
LinSystem gradient_system(const GradientPotential& p);

/// x^mu y^(-lambda).
RatFunc first_integral(const GradientPotential& p);

/// 2 lambda x I_x + 2 mu y I_y == 0.
bool certify_first_integral(const GradientPotential& p, const RatFunc& i);

/// Polynomial form lhs = rhs of the level set I = value.
struct LevelCurve {
  MultiPoly lhs;
  MultiPoly rhs;
  bool cusp = false;
  std::string equation;
};

LevelCurve level_curve(const GradientPotential& p, const Rat& value);

/// (x, kappa(x)) on the branch y = x^(3/2); throws NonPositiveSample.
std::vector<std::pair<double, double>> curvature_samples(const std::vector<double>& xs);

}  // namespace rpv
