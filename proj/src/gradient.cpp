#include "rpv/gradient.hpp"

#include <cmath>
#include <numeric>

#include "rpv/error.hpp"

namespace rpv {

GradientPotential::GradientPotential(long l, long m) : lambda(l), mu(m) {
  if (lambda == 0 || mu == 0) throw Error("gradient weights must be non-zero");
}

ContextPtr plane_context() {
  static const ContextPtr ctx = DiffContext::partial({"x", "y"});
  return ctx;
}

LinSystem gradient_system(const GradientPotential& p) {
  ContextPtr ctx = DiffContext::partial({"t"});
  RatMatrix a = zero_matrix(ctx, 2, 2);
  a(0, 0) = RatFunc::constant(ctx, QuadScalar(2 * p.lambda));
  a(1, 1) = RatFunc::constant(ctx, QuadScalar(2 * p.mu));
  return LinSystem(ctx, 2, {a});
}

RatFunc first_integral(const GradientPotential& p) {
  ContextPtr ctx = plane_context();
  RatFunc x = RatFunc::variable(ctx, "x");
  RatFunc y = RatFunc::variable(ctx, "y");
  return x.pow(static_cast<int>(p.mu)) * y.pow(static_cast<int>(-p.lambda));
}

bool certify_first_integral(const GradientPotential& p, const RatFunc& i) {
  const auto& ctx = i.context();
  auto dx = ctx->derivation_index("x");
  auto dy = ctx->derivation_index("y");
  if (!dx || !dy) throw ContextMismatch("first integral must live over (x, y)");
  RatFunc x = RatFunc::variable(ctx, "x");
  RatFunc y = RatFunc::variable(ctx, "y");
  RatFunc lie = (x * derive(i, *dx)).scaled(QuadScalar(2 * p.lambda)) +
                (y * derive(i, *dy)).scaled(QuadScalar(2 * p.mu));
  return lie.is_zero();
}

namespace {

// Exponent of the only variable of a monic monomial, with its index.
std::optional<std::pair<std::size_t, std::uint32_t>> pure_power(const MultiPoly& p) {
  if (!p.is_monomial()) return std::nullopt;
  const auto& [e, c] = *p.terms().begin();
  std::optional<std::pair<std::size_t, std::uint32_t>> out;
  for (std::size_t v = 0; v < e.size(); ++v) {
    if (e[v] == 0) continue;
    if (out) return std::nullopt;
    out = std::make_pair(v, e[v]);
  }
  return out;
}

}  // namespace

LevelCurve level_curve(const GradientPotential& p, const Rat& value) {
  if (sgn(value) == 0) throw Error("level value must be non-zero");
  RatFunc i = first_integral(p);
  LevelCurve out;
  out.lhs = i.den() * QuadScalar(Rat(value.get_num()));
  out.rhs = i.num() * QuadScalar(Rat(value.get_den()));
  auto a = pure_power(out.lhs);
  auto b = pure_power(out.rhs);
  if (a && b && a->first != b->first) {
    std::uint32_t lo = std::min(a->second, b->second);
    std::uint32_t hi = std::max(a->second, b->second);
    out.cusp = std::gcd(lo, hi) == 1 && lo == 2 && hi == 3;
  }
  const auto& names = plane_context()->names();
  out.equation = out.lhs.to_string(names) + " = " + out.rhs.to_string(names);
  return out;
}

std::vector<std::pair<double, double>> curvature_samples(const std::vector<double>& xs) {
  std::vector<std::pair<double, double>> out;
  for (double x : xs) {
    if (!(x > 0)) throw NonPositiveSample("curvature sample must be positive, got " + std::to_string(x));
    double kappa = 0.75 / std::sqrt(x) / std::pow(1.0 + 2.25 * x, 1.5);
    out.emplace_back(x, kappa);
  }
  return out;
}

}  // namespace rpv
