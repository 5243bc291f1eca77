#include <algorithm>
#include <cmath>
#include <limits>
#include <variant>

#include "tunnelgauge/uncertainty.hpp"

#include "tunnelgauge/scattering.hpp"

namespace tunnelgauge {

namespace {

// Width parameter the derivative is taken against: the single-barrier width,
// or the vacuum gap of the double barrier.
double varied_width(const BarrierShape& shape) {
  return std::visit(
      [](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, DoubleBarrier>)
          return s.l1;
        else
          return s.l;
      },
      shape);
}

BarrierSpec with_width(const BarrierSpec& spec, double w) {
  BarrierSpec out = spec;
  std::visit(
      [w](auto& s) {
        using S = std::decay_t<std::remove_reference_t<decltype(s)>>;
        if constexpr (std::is_same_v<S, DoubleBarrier>)
          s.l1 = w;
        else
          s.l = w;
      },
      out.shape);
  return out;
}

double dTdl_rect_analytic(double E, double V0, double l) {
  const double T = rectangular_transmission(E, V0, l);
  if (E < V0) {
    const double k0 = std::sqrt((V0 - E) / r_c);
    const double c = V0 * V0 / (4.0 * E * (V0 - E));
    return -T * T * c * k0 * std::sinh(2.0 * k0 * l);
  }
  const double k0p = std::sqrt((E - V0) / r_c);
  const double c = V0 * V0 / (4.0 * E * (E - V0));
  return -T * T * c * k0p * std::sin(2.0 * k0p * l);
}

double fd_transmission(const BarrierSpec& spec, double E, double w) {
  return transmission(build_profile(with_width(spec, w)), E);
}

}  // namespace

double dT_dl(const BarrierSpec& spec, double E, DerivativeMethod method) {
  if (method == DerivativeMethod::analytic) {
    if (const auto* rect = std::get_if<Rectangular>(&spec.shape))
      return dTdl_rect_analytic(E, rect->V0, rect->l);
    throw MethodUnavailable(
        "analytic width derivative exists only for the rectangular barrier");
  }
  const double l = varied_width(spec.shape);
  const double h = std::max(1e-6 * l, 1e-6);
  const double tp = fd_transmission(spec, E, l + h);
  const double tm = fd_transmission(spec, E, l - h);
  return (tp - tm) / (2.0 * h);
}

double d2T_dl2(const BarrierSpec& spec, double E) {
  const double l = varied_width(spec.shape);
  const double h = 1e-4 * l;
  const double tp = fd_transmission(spec, E, l + h);
  const double t0 = fd_transmission(spec, E, l);
  const double tm = fd_transmission(spec, E, l - h);
  return (tp - 2.0 * t0 + tm) / (h * h);
}

double dp2_per_electron(double m1, double m2) { return -m2 + m1 * m1; }

double dp2_per_electron(const CurrentsReport& report) {
  return dp2_per_electron(report.m1, report.m2);
}

namespace {

double counting_noise(double N, double T) {
  return std::sqrt(std::max(0.0, T * (1.0 - T)) / N);
}

}  // namespace

double delta_l(double N, double T, double dTdl) {
  if (std::abs(dTdl) < divergence_eps)
    throw DivergentDeltaL("width uncertainty diverges where dT/dl vanishes");
  return counting_noise(N, T) / std::abs(dTdl);
}

double delta_l_second_order(double N, double T, double dTdl, double d2Tdl2) {
  const double eps = counting_noise(N, T);
  if (eps == 0.0) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const double rhs : {eps, -eps}) {
    if (d2Tdl2 == 0.0) {
      if (dTdl == 0.0) continue;
      const double x = rhs / dTdl;
      if (x > 0.0) best = std::min(best, x);
      continue;
    }
    // d2/2 x^2 + d1 x - rhs = 0
    const double disc = dTdl * dTdl + 2.0 * d2Tdl2 * rhs;
    if (disc < 0.0) continue;
    const double sq = std::sqrt(disc);
    for (const double x : {(-dTdl + sq) / d2Tdl2, (-dTdl - sq) / d2Tdl2})
      if (x > 0.0) best = std::min(best, x);
  }
  if (!std::isfinite(best))
    throw NoPositiveRoot("transmission change has no positive-width solution");
  return best;
}

double uncertainty_product(const BarrierSpec& spec, double E, Model model) {
  const ScatteringSolution sol = solve(build_profile(spec), E);
  const CurrentsReport rep = model == Model::elastic
                                 ? transferred_elastic(sol)
                                 : transferred_inelastic(sol);
  const DerivativeMethod method =
      std::holds_alternative<Rectangular>(spec.shape)
          ? DerivativeMethod::analytic
          : DerivativeMethod::finite_difference;
  const double dTdl = dT_dl(spec, sol.E, method);
  if (std::abs(dTdl) < divergence_eps)
    throw DivergentDeltaL("uncertainty product diverges at a dead point");
  const double spread = std::sqrt(std::max(0.0, sol.T * (1.0 - sol.T)));
  return spread * std::sqrt(dp2_per_electron(rep)) / std::abs(dTdl);
}

UncertaintyReport analyze(const BarrierSpec& spec, double E) {
  const ScatteringSolution sol = solve(build_profile(spec), E);
  const CurrentsReport elastic = transferred_elastic(sol);
  const CurrentsReport inelastic = transferred_inelastic(sol);

  UncertaintyReport rep;
  rep.E = sol.E;
  rep.T = sol.T;
  rep.flags.underflow_T = sol.underflow;
  rep.flags.nudged_energy = sol.nudged;

  const DerivativeMethod method =
      std::holds_alternative<Rectangular>(spec.shape)
          ? DerivativeMethod::analytic
          : DerivativeMethod::finite_difference;
  rep.dTdl = dT_dl(spec, sol.E, method);
  rep.flags.divergent_dTdl = std::abs(rep.dTdl) < divergence_eps;

  rep.dp2_elastic = dp2_per_electron(elastic);
  rep.dp2_inelastic = dp2_per_electron(inelastic);
  rep.flags.negative_dp2_elastic = rep.dp2_elastic < 0.0;
  rep.flags.negative_dp2_inelastic = rep.dp2_inelastic < 0.0;

  const double spread = std::sqrt(std::max(0.0, sol.T * (1.0 - sol.T)));
  const double inf = std::numeric_limits<double>::infinity();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto product = [&](double dp2, bool negative) {
    if (negative) return nan;
    if (rep.flags.divergent_dTdl) return inf;
    return spread * std::sqrt(dp2) / std::abs(rep.dTdl);
  };
  rep.product_elastic =
      product(rep.dp2_elastic, rep.flags.negative_dp2_elastic);
  rep.product_inelastic =
      product(rep.dp2_inelastic, rep.flags.negative_dp2_inelastic);
  return rep;
}

}  // namespace tunnelgauge
