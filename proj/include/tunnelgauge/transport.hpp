#pragma once

namespace tunnelgauge {

// Empirical low-energy electron mean free path A/E^2 + B/sqrt(E) in A, with
// A in eV^2*A and B in eV^(1/2)*A. The coefficients are material data and
// have no defaults. Throws std::invalid_argument on E <= 0 or negative
// coefficients.
double mfp_empirical(double E, double A, double B);

// Mean free path from the electron mobility (m^2/Vs) at energy E (eV):
// lambda = mobility * sqrt(2 m_e E) / e, converted to A. Throws
// std::invalid_argument on non-positive inputs.
double mfp_from_mobility(double mobility, double E);

enum class TransportRegime { elastic, inelastic };

struct BallisticAssessment {
  double ratio = 0.0;  // lambda / device size
  TransportRegime regime = TransportRegime::inelastic;
};

// Electrons crossing a device smaller than their mean free path move
// ballistically: ratio >= 1 selects the elastic model (ties included).
BallisticAssessment ballistic_ratio(double lambda, double device_size);

}  // namespace tunnelgauge
