#include "tunnelgauge/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace tunnelgauge {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};
const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

// Incident-wave-only flux for amplitude a in a region of real wavevector k:
// j = 2 r_c k |a|^2.
double plane_flux(double k, double amp2) { return 2.0 * r_c * k * amp2; }

double nudge_degenerate(const PotentialProfile& profile, double E,
                        bool* nudged) {
  // A couple of passes in case the nudge lands on another potential.
  for (int pass = 0; pass < 3; ++pass) {
    bool hit = false;
    for (const Region& reg : profile.regions) {
      if (std::abs(E - reg.V) <= degenerate_energy_tol) hit = true;
    }
    if (!hit) return E;
    E += energy_nudge;
    *nudged = true;
  }
  return E;
}

}  // namespace

std::complex<double> wavevector(double energy, double potential) {
  const double d = energy - potential;
  if (std::abs(d) <= degenerate_energy_tol) return {0.0, 0.0};
  if (d > 0.0) return {std::sqrt(d / r_c), 0.0};
  return {0.0, std::sqrt(-d / r_c)};
}

double rectangular_transmission(double E, double V0, double l) {
  if (E <= 0.0) throw std::invalid_argument("energy must be positive");
  if (std::abs(E - V0) <= degenerate_energy_tol)
    throw std::invalid_argument("E = V0 is degenerate; nudge the energy");
  if (E < V0) {
    const double k0 = std::sqrt((V0 - E) / r_c);
    const double s = std::sinh(k0 * l);
    return 1.0 / (1.0 + V0 * V0 * s * s / (4.0 * E * (V0 - E)));
  }
  const double k0p = std::sqrt((E - V0) / r_c);
  const double s = std::sin(k0p * l);
  return 1.0 / (1.0 + V0 * V0 * s * s / (4.0 * E * (E - V0)));
}

ScatteringSolution solve(const PotentialProfile& profile, double E) {
  const auto n = profile.regions.size();
  ScatteringSolution sol;
  sol.profile = profile;
  sol.E = nudge_degenerate(profile, E, &sol.nudged);
  if (sol.E <= profile.regions.front().V)
    throw NonPropagatingLead("no propagating incident wave: E <= V(left lead)");
  if (sol.E <= profile.regions.back().V)
    throw NonPropagatingLead(
        "no propagating transmitted wave: E <= V(right lead)");

  std::vector<cd> ks(n);
  for (std::size_t i = 0; i < n; ++i) {
    ks[i] = wavevector(sol.E, profile.regions[i].V);
    if (ks[i] == cd{0.0, 0.0})
      throw Error("energy degenerate with a region potential after nudging");
  }
  const double k_in = ks.front().real();
  const double k_out = ks.back().real();
  const double x_first = profile.steps.front().x;
  const double x_last = profile.steps.back().x;

  // Backward pass: start from a pure transmitted wave exp(ik(x - x_last)) and
  // carry (psi, psi') exp(ell) right to left; ell absorbs the growth of the
  // counter-evanescent component so mantissas stay O(1).
  struct RawAmp {
    cd fwd, bwd;
    double fwd_log, bwd_log;
  };
  std::vector<RawAmp> raw(n);
  cd v{1.0, 0.0};
  cd d = I * ks.back();
  double ell = 0.0;
  raw[n - 1] = {cd{1.0, 0.0}, cd{0.0, 0.0}, 0.0, 0.0};
  for (std::size_t j = n - 2; j >= 1; --j) {
    const cd k = ks[j];
    const double w = profile.regions[j].x_right - profile.regions[j].x_left;
    const cd P = 0.5 * (v + d / (I * k));  // right-edge forward coefficient
    const cd M = 0.5 * (v - d / (I * k));
    const double kr = k.real();
    const double kappa = k.imag();
    // Left-edge-referenced coefficients with the e^{+-kappa w} growth kept in
    // the logs.
    const cd a_fwd = P * std::exp(-I * kr * w);
    const double e_fwd = ell + kappa * w;
    const cd a_bwd = M * std::exp(I * kr * w);
    const double e_bwd = ell - kappa * w;
    raw[j] = {a_fwd, a_bwd, e_fwd, e_bwd};
    const double em = std::max(e_fwd, e_bwd);
    const cd tf = a_fwd * std::exp(e_fwd - em);
    const cd tb = a_bwd * std::exp(e_bwd - em);
    v = tf + tb;
    d = I * k * (tf - tb);
    ell = em;
    const double s =
        std::max(std::abs(v), std::abs(d) / std::max(1.0, std::abs(k)));
    if (s > 0.0) {
      v /= s;
      d /= s;
      ell += std::log(s);
    }
  }
  const cd k0 = ks.front();
  const cd P0 = 0.5 * (v + d / (I * k0));
  const cd M0 = 0.5 * (v - d / (I * k0));

  sol.t = std::exp(-ell) * std::exp(I * (k_in * x_first - k_out * x_last)) / P0;
  sol.r = (M0 / P0) * std::exp(2.0 * I * k_in * x_first);
  sol.T = (k_out / k_in) * std::norm(sol.t);
  sol.R = std::norm(sol.r);
  sol.j_inc = plane_flux(k_in, inv_sqrt_2pi * inv_sqrt_2pi);
  sol.j_trans = sol.T * sol.j_inc;
  if (sol.T == 0.0 || std::fpclassify(sol.T) == FP_SUBNORMAL)
    sol.underflow = true;

  // Bake the incident normalization psi_in = exp(ik x)/sqrt(2 pi) into the
  // stored amplitudes: the raw construction carries exp(ell) P0 as incident
  // coefficient at x_first.
  const cd C = inv_sqrt_2pi * std::exp(I * k_in * x_first) / P0;
  const double log_C = std::log(std::abs(C));
  const cd phase_C = C / std::abs(C);
  sol.waves.resize(n);
  sol.waves[0] = {k0, cd{inv_sqrt_2pi, 0.0} * std::exp(I * k_in * x_first),
                  inv_sqrt_2pi * sol.r * std::exp(-I * k_in * x_first), 0.0,
                  0.0, x_first};
  for (std::size_t j = 1; j < n; ++j) {
    RegionWave w;
    w.k = ks[j];
    w.x_ref = profile.regions[j].x_left;
    w.fwd = raw[j].fwd * phase_C;
    w.bwd = raw[j].bwd * phase_C;
    w.fwd_log = raw[j].fwd_log - ell + log_C;
    w.bwd_log = raw[j].bwd_log - ell + log_C;
    sol.waves[j] = w;
  }
  return sol;
}

double transmission(const PotentialProfile& profile, double E) {
  return solve(profile, E).T;
}

std::pair<std::complex<double>, std::complex<double>> eval_psi(
    const ScatteringSolution& sol, double x) {
  const auto& regions = sol.profile.regions;
  std::size_t i = 0;
  while (i + 1 < regions.size() && x >= regions[i].x_right) ++i;
  const RegionWave& w = sol.waves[i];
  const double dx = x - w.x_ref;
  const double kr = w.k.real();
  const double kappa = w.k.imag();
  const cd osc = std::exp(I * kr * dx);
  const cd tf = w.fwd * std::exp(w.fwd_log - kappa * dx) * osc;
  const cd tb = w.bwd * std::exp(w.bwd_log + kappa * dx) / osc;
  return {tf + tb, I * w.k * (tf - tb)};
}

double region_flux(const ScatteringSolution& sol, int region) {
  const RegionWave& w = sol.waves.at(static_cast<std::size_t>(region));
  const double kr = w.k.real();
  const double kappa = w.k.imag();
  if (kappa == 0.0) {
    const double f2 = std::norm(w.fwd) * std::exp(2.0 * w.fwd_log);
    const double b2 = std::norm(w.bwd) * std::exp(2.0 * w.bwd_log);
    return 2.0 * r_c * kr * (f2 - b2);
  }
  // Evanescent region: only the decaying/growing cross term carries flux.
  const cd cross =
      std::conj(w.fwd) * w.bwd * std::exp(w.fwd_log + w.bwd_log);
  return 4.0 * r_c * kappa * cross.imag();
}

double probability_current(const ScatteringSolution& sol) {
  return region_flux(sol, static_cast<int>(sol.waves.size()) - 1);
}

int staircase_convergence(const LinearSlowing& shape, double E, double tol,
                          int n_start, int n_max) {
  if (tol <= 0.0) throw std::invalid_argument("tolerance must be positive");
  if (n_start < 1) throw std::invalid_argument("n_start must be >= 1");
  LinearSlowing s = shape;
  s.n_steps = n_start;
  double prev = transmission(build_profile({s, {}}), E);
  for (int n = 2 * n_start; n <= n_max; n *= 2) {
    s.n_steps = n;
    const double cur = transmission(build_profile({s, {}}), E);
    if (std::abs(cur - prev) <= tol * std::abs(cur)) return n;
    prev = cur;
  }
  throw Error("staircase transmission did not converge below tolerance");
}

}  // namespace tunnelgauge
