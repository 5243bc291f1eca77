#include <cmath>
#include <stdexcept>

#include "tunnelgauge/transport.hpp"

namespace tunnelgauge {

double mfp_empirical(double E, double A, double B) {
  if (E <= 0.0) throw std::invalid_argument("energy must be positive");
  if (A < 0.0 || B < 0.0)
    throw std::invalid_argument("mean-free-path coefficients must be >= 0");
  return A / (E * E) + B / std::sqrt(E);
}

double mfp_from_mobility(double mobility, double E) {
  if (mobility <= 0.0) throw std::invalid_argument("mobility must be positive");
  if (E <= 0.0) throw std::invalid_argument("energy must be positive");
  constexpr double m_e = 9.1093837015e-31;  // kg
  constexpr double q_e = 1.602176634e-19;   // C
  // lambda = mu v m / e with v = sqrt(2 E / m); meters to Angstrom.
  const double v = std::sqrt(2.0 * E * q_e / m_e);
  return mobility * v * m_e / q_e * 1e10;
}

BallisticAssessment ballistic_ratio(double lambda, double device_size) {
  if (lambda <= 0.0) throw std::invalid_argument("mean free path must be > 0");
  if (device_size <= 0.0)
    throw std::invalid_argument("device size must be > 0");
  BallisticAssessment out;
  out.ratio = lambda / device_size;
  out.regime =
      out.ratio >= 1.0 ? TransportRegime::elastic : TransportRegime::inelastic;
  return out;
}

}  // namespace tunnelgauge
