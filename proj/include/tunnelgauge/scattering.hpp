#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "tunnelgauge/errors.hpp"
#include "tunnelgauge/potential.hpp"
#include "tunnelgauge/units.hpp"

namespace tunnelgauge {

// Plane-wave coefficients of one region, stored as mantissa plus natural-log
// magnitude so deeply evanescent regions cannot overflow a double:
//   psi(x) = fwd exp(fwd_log) exp(+ik(x - x_ref))
//          + bwd exp(bwd_log) exp(-ik(x - x_ref)).
// x_ref is the region's left edge; the incident lead, having none, uses its
// right edge.
struct RegionWave {
  std::complex<double> k;
  std::complex<double> fwd{0.0, 0.0};
  std::complex<double> bwd{0.0, 0.0};
  double fwd_log = 0.0;
  double bwd_log = 0.0;
  double x_ref = 0.0;
};

// Stationary scattering state at one energy, normalized to an incident
// amplitude of 1/sqrt(2 pi) (per unit wavevector).
struct ScatteringSolution {
  PotentialProfile profile;
  double E = 0.0;  // possibly nudged away from a region potential
  std::vector<RegionWave> waves;
  std::complex<double> t{0.0, 0.0};
  std::complex<double> r{0.0, 0.0};
  double T = 0.0;
  double R = 0.0;
  double j_inc = 0.0;    // incident probability flux
  double j_trans = 0.0;  // transmitted probability flux
  bool nudged = false;
  bool underflow = false;  // T lost to double underflow (opaque barrier)
};

// Matches psi, psi' across every step by right-to-left transfer matrices with
// per-region log rescaling. Throws NonPropagatingLead if E <= V in either
// lead (after the degeneracy nudge).
ScatteringSolution solve(const PotentialProfile& profile, double E);

double transmission(const PotentialProfile& profile, double E);

// Closed-form transmission of the symmetric rectangular barrier; the
// evanescent wavevector continues as k0 -> i k0' above the top. Rejects
// E <= 0 and |E - V0| <= degenerate_energy_tol.
double rectangular_transmission(double E, double V0, double l);

// psi and psi' at x; an x exactly on a step evaluates to the matched
// (continuous) interface value.
std::pair<std::complex<double>, std::complex<double>> eval_psi(
    const ScatteringSolution& sol, double x);

// Probability flux of the stationary state (constant across regions);
// evaluated from the transmitted lead.
double probability_current(const ScatteringSolution& sol);

// Flux computed from one region's own amplitudes; exact within the region.
double region_flux(const ScatteringSolution& sol, int region);

// Independent cross-check: integrates the stationary Schrodinger equation
// backwards on a fixed grid with a fourth-order three-point recurrence,
// matching plane waves in lead stubs truncated 1 A beyond the outer steps.
// h <= 0 selects the default min(0.01 A, 0.1 / k_max). Throws GridTooCoarse
// when k_max * h >= 0.1.
double numerov_transmission(const PotentialProfile& profile, double E,
                            double h = 0.0);

// Doubles the staircase resolution of a linearly slowing barrier starting
// from n_start until transmission changes by at most tol (relative) across
// one more doubling; returns that converged resolution. Throws Error if
// n_max is exceeded.
int staircase_convergence(const LinearSlowing& shape, double E, double tol,
                          int n_start = 64, int n_max = 1 << 15);

}  // namespace tunnelgauge
