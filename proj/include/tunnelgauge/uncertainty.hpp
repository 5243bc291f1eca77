#pragma once

#include "tunnelgauge/currents.hpp"
#include "tunnelgauge/potential.hpp"

namespace tunnelgauge {

// |dT/dl| below this threshold counts as a transducer dead point.
inline constexpr double divergence_eps = 1e-12;  // 1/A

enum class DerivativeMethod { analytic, finite_difference };

struct UncertaintyFlags {
  bool divergent_dTdl = false;
  bool negative_dp2_elastic = false;
  bool negative_dp2_inelastic = false;
  bool underflow_T = false;
  bool nudged_energy = false;
};

// Single-energy summary behind the uncertainty-product figures. Products are
// independent of the electron count N, which cancels between the width and
// momentum uncertainties; divergent dT/dl reports +inf, negative variance
// reports NaN, each with its flag set.
struct UncertaintyReport {
  double E = 0.0;
  double T = 0.0;
  double dTdl = 0.0;  // 1/A
  double dp2_elastic = 0.0;
  double dp2_inelastic = 0.0;
  double product_elastic = 0.0;    // Delta l * Delta p, units of hbar
  double product_inelastic = 0.0;
  UncertaintyFlags flags;
};

// Derivative of T with respect to the barrier width: l for the single
// barriers, the vacuum gap l1 for the double barrier. The analytic method
// exists only for Rectangular (closed-form T); everything else takes a
// central difference with step max(1e-6 * l, 1e-6 A).
double dT_dl(const BarrierSpec& spec, double E, DerivativeMethod method);

// Central second difference with step 1e-4 * l (wider to control rounding).
double d2T_dl2(const BarrierSpec& spec, double E);

// Per-electron momentum variance -m2 + m1^2 of either model. May be
// negative just above the barrier top; callers flag, never clamp.
double dp2_per_electron(double m1, double m2);
double dp2_per_electron(const CurrentsReport& report);

// Width uncertainty from counting statistics: sqrt(T(1-T)/N) / |dTdl|.
// Throws DivergentDeltaL when |dTdl| < divergence_eps.
double delta_l(double N, double T, double dTdl);

// Solves dTdl x + d2Tdl2 x^2 / 2 = +-sqrt(T(1-T)/N) and returns the smallest
// positive real root; finite at dead points where the first-order form
// diverges. Throws NoPositiveRoot when no branch has one.
double delta_l_second_order(double N, double T, double dTdl, double d2Tdl2);

// sqrt(T(1-T)) sqrt(dp2) / |dTdl|: the N-independent uncertainty product.
// Throws DivergentDeltaL at dead points (use analyze for flagged reporting).
double uncertainty_product(const BarrierSpec& spec, double E, Model model);

// Full flagged report at one energy: solve, both models' transferred
// currents, dT/dl (analytic when available), variances and products.
UncertaintyReport analyze(const BarrierSpec& spec, double E);

}  // namespace tunnelgauge
