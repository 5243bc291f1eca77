#include <cmath>
#include <complex>
#include <stdexcept>

#include "tunnelgauge/currents.hpp"

namespace tunnelgauge {

namespace {

using cd = std::complex<double>;

// Locate the region containing x, throwing if x sits exactly on a step where
// psi' jumps and the pointwise currents are ambiguous.
std::size_t region_index_checked(const PotentialProfile& profile, double x) {
  for (const Step& s : profile.steps)
    if (x == s.x)
      throw AtInterface("pointwise current requested exactly on a step");
  std::size_t i = 0;
  const auto& regions = profile.regions;
  while (i + 1 < regions.size() && x >= regions[i].x_right) ++i;
  return i;
}

}  // namespace

double momentum_current_at(const ScatteringSolution& sol, double x) {
  const std::size_t i = region_index_checked(sol.profile, x);
  const RegionWave& w = sol.waves[i];
  const double kr = w.k.real();
  const double ki = w.k.imag();
  if (ki == 0.0) {
    // Propagating region: |psi'|^2 + k^2 |psi|^2 = 2 k^2 (|F|^2 + |B|^2),
    // summed in amplitude form to dodge cancellation at large log offsets.
    const double f2 = std::norm(w.fwd) * std::exp(2.0 * w.fwd_log);
    const double b2 = std::norm(w.bwd) * std::exp(2.0 * w.bwd_log);
    return 2.0 * r_c * kr * kr * (f2 + b2);
  }
  // Evanescent region: only the cross term survives and the exp(±kappa dx)
  // factors cancel, so the current is position-free as it must be.
  const cd fb = std::conj(w.fwd) * w.bwd * std::exp(w.fwd_log + w.bwd_log);
  return -4.0 * r_c * ki * ki * std::real(fb);
}

double momentum2_current_at(const ScatteringSolution& sol, double x) {
  const std::size_t i = region_index_checked(sol.profile, x);
  const RegionWave& w = sol.waves[i];
  const double kr = w.k.real();
  const double ki = w.k.imag();
  if (ki == 0.0) {
    const double f2 = std::norm(w.fwd) * std::exp(2.0 * w.fwd_log);
    const double b2 = std::norm(w.bwd) * std::exp(2.0 * w.bwd_log);
    return 2.0 * r_c * kr * kr * kr * (f2 - b2);
  }
  const cd fb = std::conj(w.fwd) * w.bwd * std::exp(w.fwd_log + w.bwd_log);
  return -4.0 * r_c * ki * ki * ki * std::imag(fb);
}

namespace {

// Sum over the mass-owned steps of the force-like terms that feed the two
// transferred currents: each step of height dV at x_i contributes
// dV |psi(x_i)|^2 to J_p and 2 dV Im(conj(psi) psi') to J_{p^2}.
struct StepSums {
  double jp = 0.0;
  double jp2 = 0.0;
};

StepSums mass_step_sums(const ScatteringSolution& sol) {
  StepSums sums;
  for (const Step& s : mass_steps(sol.profile)) {
    const auto [psi, dpsi] = eval_psi(sol, s.x);
    sums.jp += s.dV * std::norm(psi);
    sums.jp2 += 2.0 * s.dV * std::imag(std::conj(psi) * dpsi);
  }
  return sums;
}

}  // namespace

CurrentsReport transferred_elastic(const ScatteringSolution& sol) {
  const StepSums sums = mass_step_sums(sol);
  CurrentsReport rep;
  rep.model = Model::elastic;
  rep.Jp_t = sums.jp;
  rep.Jp2_t = sums.jp2;
  rep.m1 = rep.Jp_t / sol.j_inc;
  rep.m2 = rep.Jp2_t / sol.j_inc;
  rep.T = sol.T;
  return rep;
}

CurrentsReport transferred_inelastic(const ScatteringSolution& sol) {
  // The mass also keeps whatever the electron carries past the barrier: add
  // the outgoing currents evaluated just beyond the last step.
  const StepSums sums = mass_step_sums(sol);
  const double b_plus = sol.profile.steps.back().x + 1.0;
  CurrentsReport rep;
  rep.model = Model::inelastic;
  rep.Jp_t = sums.jp + momentum_current_at(sol, b_plus);
  rep.Jp2_t = sums.jp2 + momentum2_current_at(sol, b_plus);
  rep.m1 = rep.Jp_t / sol.j_inc;
  rep.m2 = rep.Jp2_t / sol.j_inc;
  rep.T = sol.T;
  return rep;
}

std::pair<double, double> closed_form_rectangular(double E, double V0,
                                                  double l, Model model) {
  if (E <= 0.0) throw std::invalid_argument("energy must be positive");
  if (std::abs(E - V0) <= degenerate_energy_tol)
    throw std::invalid_argument("closed form is singular at E = V0");
  const double T = rectangular_transmission(E, V0, l);
  const double k2 = E / r_c;         // incident k^2
  const double q2 = (V0 - E) / r_c;  // in-barrier decay^2; < 0 above the top
  const double k = std::sqrt(k2);
  const double j_inc = r_c * k / M_PI;  // for incident amplitude 1/sqrt(2 pi)
  double m1 = 0.0;
  double m2 = 0.0;
  if (model == Model::elastic) {
    m1 = -T * (k2 + q2) / (2.0 * k);
    m2 = -T * (k2 + q2);
  } else {
    m1 = T * (k2 - q2) / (2.0 * k);
    m2 = -T * q2;
  }
  return {m1 * j_inc, m2 * j_inc};
}

}  // namespace tunnelgauge
