#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "tunnelgauge/scattering.hpp"

namespace tunnelgauge {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

// cos(sqrt(q) d) continued to cosh for q < 0.
double q_cos(double q, double d) {
  const double z = q * d * d;
  if (std::abs(z) < 1e-8) return 1.0 - z / 2.0 + z * z / 24.0;
  if (q > 0.0) return std::cos(std::sqrt(q) * d);
  return std::cosh(std::sqrt(-q) * d);
}

// sin(sqrt(q) d)/sqrt(q) continued to sinh for q < 0.
double q_sinc(double q, double d) {
  const double z = q * d * d;
  if (std::abs(z) < 1e-8) return d * (1.0 - z / 6.0 + z * z / 120.0);
  if (q > 0.0) return std::sin(std::sqrt(q) * d) / std::sqrt(q);
  const double s = std::sqrt(-q);
  return std::sinh(s * d) / s;
}

struct Segment {
  double x_left;
  double q;  // (E - V) / r_c
  int n_intervals;
  double h;
};

}  // namespace

double numerov_transmission(const PotentialProfile& profile, double E,
                            double h) {
  for (int pass = 0; pass < 3; ++pass) {
    bool hit = false;
    for (const Region& reg : profile.regions)
      if (std::abs(E - reg.V) <= degenerate_energy_tol) hit = true;
    if (!hit) break;
    E += energy_nudge;
  }
  if (E <= profile.regions.front().V || E <= profile.regions.back().V)
    throw NonPropagatingLead("finite-difference check needs propagating leads");

  double k_max = 0.0;
  for (const Region& reg : profile.regions)
    k_max = std::max(k_max, std::sqrt(std::abs(E - reg.V) / r_c));
  if (h > 0.0 && k_max * h >= 0.1)
    throw GridTooCoarse("grid step violates k_max * h < 0.1");
  if (h <= 0.0) h = std::min(0.01, 0.1 / k_max);

  // Segments between consecutive steps, with 1 A lead stubs on both sides so
  // plane waves can be matched on the grid. Nodes land exactly on each step.
  const auto& regions = profile.regions;
  const double x_lo = profile.steps.front().x - 1.0;
  const double x_hi = profile.steps.back().x + 1.0;
  std::vector<Segment> segs;
  segs.reserve(regions.size());
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const double left = (i == 0) ? x_lo : regions[i].x_left;
    const double right = (i + 1 == regions.size()) ? x_hi : regions[i].x_right;
    const double w = right - left;
    const int m = std::max(4, static_cast<int>(std::ceil(w / h)));
    segs.push_back({left, (E - regions[i].V) / r_c, m, w / m});
  }

  const double k_in = std::sqrt((E - regions.front().V) / r_c);
  const double k_out = std::sqrt((E - regions.back().V) / r_c);

  // March right to left, seeding the transmitted wave exp(ik(x - x_hi)) on
  // the right stub. Stored values carry an extracted exp(log_scale) factor so
  // opaque barriers stay inside double range. Each segment hands (psi, psi')
  // at its left edge to the next one; the first two nodes of that segment
  // follow from the constant-q closed form.
  double log_scale = 0.0;
  cd psi_edge{1.0, 0.0};
  cd dpsi_edge = I * k_out;
  for (auto it = segs.rbegin(); it != segs.rend(); ++it) {
    const Segment& sg = *it;
    const double hq = sg.h * sg.h * sg.q;
    const double F = 2.0 * (1.0 - 5.0 * hq / 12.0) / (1.0 + hq / 12.0);
    cd next = psi_edge;  // node M (right edge of segment)
    cd cur = psi_edge * q_cos(sg.q, sg.h) -
             dpsi_edge * q_sinc(sg.q, sg.h);  // node M-1
    // tail[0..4] tracks the five leftmost known nodes, left to right.
    cd tail[5] = {cur, next, 0.0, 0.0, 0.0};
    for (int i = sg.n_intervals - 1; i >= 1; --i) {
      const cd prev = F * cur - next;
      next = cur;
      cur = prev;
      for (int s = 4; s >= 1; --s) tail[s] = tail[s - 1];
      tail[0] = cur;
      const double mag = std::max(std::abs(cur), std::abs(next));
      if (mag > 1e100) {
        const double inv = 1.0 / mag;
        cur *= inv;
        next *= inv;
        for (cd& t : tail) t *= inv;
        log_scale += std::log(mag);
      }
    }
    // psi' at the left edge: one-sided five-point stencil, corrected for its
    // h^4 truncation term (psi''''' = q^2 psi' when psi'' = -q psi).
    psi_edge = cur;
    const cd stencil = (-25.0 * tail[0] + 48.0 * tail[1] - 36.0 * tail[2] +
                        16.0 * tail[3] - 3.0 * tail[4]) /
                       (12.0 * sg.h);
    const double h4 = sg.h * sg.h * sg.h * sg.h;
    dpsi_edge = stencil / (1.0 - sg.q * sg.q * h4 / 5.0);
  }

  // Incident amplitude: fit P exp(ikx) + M exp(-ikx) through (psi, psi') at
  // the left stub edge. The transmitted amplitude was 1 in true scale, so
  // T = (k_out / k_in) / |P_true|^2.
  const cd e0 = std::exp(I * k_in * x_lo);
  const cd P = 0.5 * (psi_edge + dpsi_edge / (I * k_in)) / e0;
  const double log_P = std::log(std::abs(P)) + log_scale;
  return std::exp(std::log(k_out / k_in) - 2.0 * log_P);
}

}  // namespace tunnelgauge
