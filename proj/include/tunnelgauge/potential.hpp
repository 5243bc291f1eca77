#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "json.hpp"

namespace tunnelgauge {

// Barrier shapes. The left lead is always the energy reference V = 0; phi is
// the voltage drop toward the right lead, which therefore sits at -phi eV.
struct Rectangular {
  double V0 = 0.0;  // eV
  double l = 0.0;   // A
};

struct AsymRectangular {
  double V0 = 0.0;
  double l = 0.0;
  double phi = 0.0;  // V
};

struct LinearSlowing {
  double V0 = 0.0;
  double l = 0.0;
  double phi = 0.0;
  int n_steps = 1;  // staircase resolution of the linear slope
};

struct DoubleBarrier {
  double V0 = 0.0;  // outer barrier height, eV
  double V1 = 0.0;  // well (adsorbed atom) depth, eV
  double l1 = 0.0;  // vacuum gap, A
  double l2 = 0.0;  // well width, A
  double l3 = 0.0;  // barrier between well and electrode, A
};

using BarrierShape =
    std::variant<Rectangular, AsymRectangular, LinearSlowing, DoubleBarrier>;

struct BarrierSpec {
  BarrierShape shape;
  // Overrides the shape's default split of steps between tip and test mass.
  std::optional<int> partition_index;
};

// One constant-potential region; leads use +-infinity edges.
struct Region {
  double x_left;
  double x_right;
  double V;
};

// Potential jump at x: dV = V(right) - V(left).
struct Step {
  double x;
  double dV;
};

// Ordered piecewise-constant potential. Steps with index < partition_index
// carry the force on the tip; steps with index >= partition_index carry the
// force on the test mass.
struct PotentialProfile {
  std::vector<Region> regions;  // first and last are semi-infinite leads
  std::vector<Step> steps;
  int partition_index = 1;
};

// Throws std::invalid_argument on non-positive widths, n_steps < 1, or a
// partition index outside [0, #steps].
PotentialProfile build_profile(const BarrierSpec& spec);

std::vector<Step> tip_steps(const PotentialProfile& profile);
std::vector<Step> mass_steps(const PotentialProfile& profile);

// The shape's V0 field (used for E/V0 output columns).
double barrier_height(const BarrierSpec& spec);

// Canonical JSON form: {"kind": "rectangular" | "asym_rectangular" |
// "linear_slowing" | "double_barrier", shape fields by name, optional
// "partition_index"}. Throws std::invalid_argument on malformed input.
BarrierSpec barrier_from_json(const nlohmann::json& j);
nlohmann::json barrier_to_json(const BarrierSpec& spec);

}  // namespace tunnelgauge
