#pragma once

#include <utility>

#include "tunnelgauge/scattering.hpp"

namespace tunnelgauge {

// elastic: the electron traverses the test mass ballistically and exchanges
// momentum only at the potential steps assigned to the mass. inelastic: the
// electron additionally releases its full transmitted momentum flux.
enum class Model { elastic, inelastic };

struct CurrentsReport {
  Model model = Model::elastic;
  double Jp_t = 0.0;   // transferred momentum current, 1/(2 pi) normalization
  double Jp2_t = 0.0;  // transferred momentum-squared current
  double m1 = 0.0;     // Jp_t / j_inc: mean momentum per incident electron
  double m2 = 0.0;     // Jp2_t / j_inc: second moment per incident electron
  double T = 0.0;
};

// Momentum current r_c (|psi'|^2 + k^2 |psi|^2) at x, constant inside each
// region for a stationary state. Throws AtInterface when x sits exactly on a
// step (the second derivative is undefined there).
double momentum_current_at(const ScatteringSolution& sol, double x);

// Momentum-squared current 2 r_c k^2 Im(conj(psi) psi') at x.
double momentum2_current_at(const ScatteringSolution& sol, double x);

// Step-sum transferred currents: sum over mass steps of dV |psi|^2 and
// 2 dV Im(conj(psi) psi').
CurrentsReport transferred_elastic(const ScatteringSolution& sol);

// Adds the transmitted-lead momentum and momentum-squared currents to the
// elastic step sums (full release to the test mass).
CurrentsReport transferred_inelastic(const ScatteringSolution& sol);

// (Jp_t, Jp2_t) of the symmetric rectangular barrier evaluated from the
// closed forms, k0^2 continued to -k0'^2 above the top; cross-check for the
// generic step-sum path. Rejects E <= 0 and E within degenerate_energy_tol
// of V0.
std::pair<double, double> closed_form_rectangular(double E, double V0,
                                                  double l, Model model);

}  // namespace tunnelgauge
