#pragma once

#include <complex>

namespace tunnelgauge {

// Unit system: energies in eV, lengths in angstrom, hbar = 1, and the
// electron mass folded into a single constant r_c = hbar^2 / (2 m_e).
// Kinetic energy is then r_c * k^2 and momentum is numerically equal to the
// wavevector, so every formula below reduces to wavevector arithmetic.
inline constexpr double r_c = 3.8099821;  // eV * A^2

// Energies closer than this to a region potential are treated as degenerate
// (the solver nudges them instead of handling the k = 0 linear solution).
inline constexpr double degenerate_energy_tol = 1e-12;  // eV
inline constexpr double energy_nudge = 1e-9;            // eV

// k = sqrt((E - V) / r_c) for E > V, the decaying branch i*sqrt((V - E)/r_c)
// for E < V, and 0 when |E - V| <= degenerate_energy_tol. Total function:
// Im(k) >= 0 and Re(k) * Im(k) = 0 always.
std::complex<double> wavevector(double energy, double potential);

}  // namespace tunnelgauge
