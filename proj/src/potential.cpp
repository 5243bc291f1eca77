#include "tunnelgauge/potential.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "tunnelgauge/units.hpp"

namespace tunnelgauge {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// Region potentials and the interior interface positions; the barrier starts
// at x = 0.
struct Layout {
  std::vector<double> potentials;
  std::vector<double> interfaces;
};

Layout layout_of(const BarrierShape& shape) {
  Layout out;
  if (const auto* r = std::get_if<Rectangular>(&shape)) {
    require(r->l > 0.0, "barrier width must be positive");
    out.potentials = {0.0, r->V0, 0.0};
    out.interfaces = {0.0, r->l};
  } else if (const auto* a = std::get_if<AsymRectangular>(&shape)) {
    require(a->l > 0.0, "barrier width must be positive");
    out.potentials = {0.0, a->V0, -a->phi};
    out.interfaces = {0.0, a->l};
  } else if (const auto* s = std::get_if<LinearSlowing>(&shape)) {
    require(s->l > 0.0, "barrier width must be positive");
    require(s->n_steps >= 1, "staircase needs at least one step");
    const int n = s->n_steps;
    out.potentials.push_back(0.0);
    out.interfaces.push_back(0.0);
    for (int j = 0; j < n; ++j) {
      // Midpoint sample of the line from V0 down to V0 - phi.
      out.potentials.push_back(s->V0 - s->phi * (j + 0.5) / n);
      out.interfaces.push_back(s->l * (j + 1) / n);
    }
    out.potentials.push_back(-s->phi);
  } else {
    const auto& d = std::get<DoubleBarrier>(shape);
    require(d.l1 > 0.0 && d.l2 > 0.0 && d.l3 > 0.0,
            "barrier widths must be positive");
    out.potentials = {0.0, d.V0, d.V1, d.V0, 0.0};
    out.interfaces = {0.0, d.l1, d.l1 + d.l2, d.l1 + d.l2 + d.l3};
  }
  return out;
}

int default_partition(const BarrierShape&) {
  // The tip owns only the entrance step for every shape; the slope, well and
  // exit steps push on the test mass.
  return 1;
}

}  // namespace

PotentialProfile build_profile(const BarrierSpec& spec) {
  const Layout lay = layout_of(spec.shape);
  PotentialProfile profile;
  const auto n_regions = lay.potentials.size();
  profile.regions.reserve(n_regions);
  for (std::size_t i = 0; i < n_regions; ++i) {
    const double left = (i == 0) ? -inf : lay.interfaces[i - 1];
    const double right = (i + 1 == n_regions) ? inf : lay.interfaces[i];
    profile.regions.push_back({left, right, lay.potentials[i]});
  }
  profile.steps.reserve(lay.interfaces.size());
  for (std::size_t i = 0; i < lay.interfaces.size(); ++i) {
    profile.steps.push_back(
        {lay.interfaces[i], lay.potentials[i + 1] - lay.potentials[i]});
  }
  profile.partition_index =
      spec.partition_index.value_or(default_partition(spec.shape));
  require(profile.partition_index >= 0 &&
              profile.partition_index <= static_cast<int>(profile.steps.size()),
          "partition index outside [0, #steps]");
  return profile;
}

std::vector<Step> tip_steps(const PotentialProfile& profile) {
  return {profile.steps.begin(),
          profile.steps.begin() + profile.partition_index};
}

std::vector<Step> mass_steps(const PotentialProfile& profile) {
  return {profile.steps.begin() + profile.partition_index,
          profile.steps.end()};
}

double barrier_height(const BarrierSpec& spec) {
  return std::visit([](const auto& s) { return s.V0; }, spec.shape);
}

BarrierSpec barrier_from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    BarrierSpec spec;
    if (kind == "rectangular") {
      spec.shape = Rectangular{j.at("V0").get<double>(), j.at("l").get<double>()};
    } else if (kind == "asym_rectangular") {
      spec.shape = AsymRectangular{j.at("V0").get<double>(),
                                   j.at("l").get<double>(),
                                   j.at("phi").get<double>()};
    } else if (kind == "linear_slowing") {
      spec.shape =
          LinearSlowing{j.at("V0").get<double>(), j.at("l").get<double>(),
                        j.at("phi").get<double>(), j.at("n_steps").get<int>()};
    } else if (kind == "double_barrier") {
      spec.shape = DoubleBarrier{j.at("V0").get<double>(),
                                 j.at("V1").get<double>(),
                                 j.at("l1").get<double>(),
                                 j.at("l2").get<double>(),
                                 j.at("l3").get<double>()};
    } else {
      throw std::invalid_argument("unknown barrier kind: " + kind);
    }
    if (j.contains("partition_index")) {
      spec.partition_index = j.at("partition_index").get<int>();
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad barrier JSON: ") + e.what());
  }
}

nlohmann::json barrier_to_json(const BarrierSpec& spec) {
  nlohmann::json j;
  if (const auto* r = std::get_if<Rectangular>(&spec.shape)) {
    j = {{"kind", "rectangular"}, {"V0", r->V0}, {"l", r->l}};
  } else if (const auto* a = std::get_if<AsymRectangular>(&spec.shape)) {
    j = {{"kind", "asym_rectangular"}, {"V0", a->V0}, {"l", a->l},
         {"phi", a->phi}};
  } else if (const auto* s = std::get_if<LinearSlowing>(&spec.shape)) {
    j = {{"kind", "linear_slowing"}, {"V0", s->V0}, {"l", s->l},
         {"phi", s->phi}, {"n_steps", s->n_steps}};
  } else {
    const auto& d = std::get<DoubleBarrier>(spec.shape);
    j = {{"kind", "double_barrier"}, {"V0", d.V0}, {"V1", d.V1},
         {"l1", d.l1}, {"l2", d.l2}, {"l3", d.l3}};
  }
  if (spec.partition_index) j["partition_index"] = *spec.partition_index;
  return j;
}

}  // namespace tunnelgauge
