#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <variant>

#include "tunnelgauge/sweep.hpp"

#include "tunnelgauge/scattering.hpp"

namespace tunnelgauge {

namespace {

constexpr double quiet_nan = std::numeric_limits<double>::quiet_NaN();

Axis axis_from_string(const std::string& s) {
  if (s == "energy") return Axis::energy;
  if (s == "voltage") return Axis::voltage;
  throw std::invalid_argument("unknown axis: " + s);
}

Model model_from_string(const std::string& s) {
  if (s == "elastic") return Model::elastic;
  if (s == "inelastic") return Model::inelastic;
  throw std::invalid_argument("unknown model: " + s);
}

Observable observable_from_string(const std::string& s) {
  if (s == "T") return Observable::T;
  if (s == "m1") return Observable::m1;
  if (s == "m2") return Observable::m2;
  if (s == "dp2") return Observable::dp2;
  if (s == "product") return Observable::product;
  if (s == "dTdl") return Observable::dTdl;
  throw std::invalid_argument("unknown observable: " + s);
}

const char* observable_name(Observable o) {
  switch (o) {
    case Observable::T: return "T";
    case Observable::m1: return "m1";
    case Observable::m2: return "m2";
    case Observable::dp2: return "dp2";
    case Observable::product: return "product";
    case Observable::dTdl: return "dTdl";
  }
  return "";
}

bool has_phi(const BarrierShape& shape) {
  return std::holds_alternative<AsymRectangular>(shape) ||
         std::holds_alternative<LinearSlowing>(shape);
}

BarrierSpec with_phi(const BarrierSpec& spec, double phi) {
  BarrierSpec out = spec;
  if (auto* a = std::get_if<AsymRectangular>(&out.shape))
    a->phi = phi;
  else if (auto* s = std::get_if<LinearSlowing>(&out.shape))
    s->phi = phi;
  else
    throw std::invalid_argument(
        "voltage sweeps need a barrier with a contact potential");
  return out;
}

bool wants(const SweepSpec& spec, Observable o) {
  return std::find(spec.observables.begin(), spec.observables.end(), o) !=
         spec.observables.end();
}

bool wants(const SweepSpec& spec, Model m) {
  return std::find(spec.models.begin(), spec.models.end(), m) !=
         spec.models.end();
}

// The per-model columns actually emitted, in fixed order.
std::vector<Observable> model_observables(const SweepSpec& spec) {
  std::vector<Observable> out;
  for (Observable o :
       {Observable::m1, Observable::m2, Observable::dp2, Observable::product})
    if (wants(spec, o)) out.push_back(o);
  return out;
}

void validate(const SweepSpec& spec) {
  if (!(spec.min < spec.max))
    throw std::invalid_argument("sweep range must satisfy min < max");
  if (spec.n_points < 2)
    throw std::invalid_argument("sweep needs at least two grid points");
  if (spec.models.empty())
    throw std::invalid_argument("sweep needs at least one model");
  if (spec.observables.empty())
    throw std::invalid_argument("sweep needs at least one observable");
  if (spec.output.empty())
    throw std::invalid_argument("sweep needs an output path");
  if (spec.axis == Axis::voltage) {
    if (!has_phi(spec.barrier.shape))
      throw std::invalid_argument(
          "voltage sweeps need a barrier with a contact potential");
    if (!spec.fixed_energy)
      throw std::invalid_argument("voltage sweeps need fixed_energy");
    if (*spec.fixed_energy <= 0.0)
      throw std::invalid_argument("fixed_energy must be positive");
  } else if (spec.fixed_energy) {
    throw std::invalid_argument("fixed_energy only applies to voltage sweeps");
  }
  build_profile(spec.barrier);  // validates the shape parameters
}

struct RowTask {
  double axis_value;
  double energy;
  BarrierSpec barrier;
};

SweepRow compute_row(const SweepSpec& spec, const RowTask& task) {
  SweepRow row;
  row.axis_value = task.axis_value;
  const double v0 = barrier_height(task.barrier);
  row.e_over_v0 = v0 != 0.0 ? task.energy / v0 : quiet_nan;
  try {
    const ScatteringSolution sol = solve(build_profile(task.barrier),
                                         task.energy);
    row.T = sol.T;
    if (sol.underflow) row.flags.push_back("underflow_T");
    if (sol.nudged) row.flags.push_back("nudged_energy");

    const DerivativeMethod method =
        std::holds_alternative<Rectangular>(task.barrier.shape)
            ? DerivativeMethod::analytic
            : DerivativeMethod::finite_difference;
    row.dTdl = dT_dl(task.barrier, sol.E, method);
    const bool divergent = std::abs(row.dTdl) < divergence_eps;
    if (divergent) row.flags.push_back("divergent_dTdl");

    const double spread = std::sqrt(std::max(0.0, sol.T * (1.0 - sol.T)));
    auto fill = [&](Model model, ModelColumns& cols, const char* dp2_flag) {
      const CurrentsReport rep = model == Model::elastic
                                     ? transferred_elastic(sol)
                                     : transferred_inelastic(sol);
      cols.m1 = rep.m1;
      cols.m2 = rep.m2;
      cols.dp2 = dp2_per_electron(rep);
      if (cols.dp2 < 0.0) {
        row.flags.push_back(dp2_flag);
        cols.product = quiet_nan;
      } else if (divergent) {
        cols.product = std::numeric_limits<double>::infinity();
      } else {
        cols.product = spread * std::sqrt(cols.dp2) / std::abs(row.dTdl);
      }
    };
    if (wants(spec, Model::elastic))
      fill(Model::elastic, row.elastic, "negative_dp2_elastic");
    if (wants(spec, Model::inelastic))
      fill(Model::inelastic, row.inelastic, "negative_dp2_inelastic");
  } catch (const NonPropagatingLead&) {
    row.T = quiet_nan;
    row.dTdl = quiet_nan;
    row.flags.push_back("non_propagating_lead");
  } catch (const std::exception&) {
    row.T = quiet_nan;
    row.dTdl = quiet_nan;
    row.flags.push_back("error");
  }
  return row;
}

// %.8e keeps nine significant digits; non-finite values print as nan/inf.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8e", v);
  return buf;
}

nlohmann::json json_value(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

SweepSpec sweep_from_json(const nlohmann::json& j) {
  SweepSpec spec;
  try {
    spec.axis = axis_from_string(j.at("axis").get<std::string>());
    const auto& range = j.at("range");
    if (!range.is_array() || range.size() != 2)
      throw std::invalid_argument("range must be [min, max]");
    spec.min = range[0].get<double>();
    spec.max = range[1].get<double>();
    spec.n_points = j.at("n_points").get<int>();
    spec.barrier = barrier_from_json(j.at("barrier"));
    for (const auto& m : j.at("models")) {
      const Model model = model_from_string(m.get<std::string>());
      if (!wants(spec, model)) spec.models.push_back(model);
    }
    std::sort(spec.models.begin(), spec.models.end());
    for (const auto& o : j.at("observables")) {
      const Observable obs = observable_from_string(o.get<std::string>());
      if (!wants(spec, obs)) spec.observables.push_back(obs);
    }
    std::sort(spec.observables.begin(), spec.observables.end());
    if (j.contains("fixed_energy"))
      spec.fixed_energy = j.at("fixed_energy").get<double>();
    spec.output = j.at("output").get<std::string>();
    if (j.contains("format")) {
      const std::string f = j.at("format").get<std::string>();
      if (f == "csv")
        spec.format = OutputFormat::csv;
      else if (f == "json")
        spec.format = OutputFormat::json;
      else
        throw std::invalid_argument("unknown format: " + f);
    }
    if (j.contains("notes"))
      for (const auto& n : j.at("notes"))
        spec.notes.push_back(n.get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad sweep JSON: ") + e.what());
  }
  validate(spec);
  return spec;
}

std::vector<double> sweep_grid(const SweepSpec& spec) {
  validate(spec);
  const double h = (spec.max - spec.min) / (spec.n_points - 1);
  std::vector<double> grid(spec.n_points);
  for (int i = 0; i < spec.n_points; ++i) grid[i] = spec.min + i * h;
  if (spec.axis == Axis::energy) {
    // An energy exactly on a region potential (or zero) cannot propagate or
    // would be nudged; shift the whole grid up half a spacing instead so the
    // sweep stays uniform.
    std::vector<double> potentials{0.0};
    for (const Region& reg : build_profile(spec.barrier).regions)
      potentials.push_back(reg.V);
    bool collision = false;
    for (double g : grid)
      for (double v : potentials)
        if (std::abs(g - v) <= degenerate_energy_tol) collision = true;
    if (collision)
      for (double& g : grid) g += h / 2.0;
  }
  return grid;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int threads) {
  const std::vector<double> grid = sweep_grid(spec);
  std::vector<RowTask> tasks;
  tasks.reserve(grid.size());
  for (double g : grid) {
    if (spec.axis == Axis::energy)
      tasks.push_back({g, g, spec.barrier});
    else
      tasks.push_back({g, *spec.fixed_energy, with_phi(spec.barrier, g)});
  }

  std::vector<SweepRow> rows(tasks.size());
  unsigned n_threads = threads > 0
                           ? static_cast<unsigned>(threads)
                           : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, tasks.size());
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i)
      rows[i] = compute_row(spec, tasks[i]);
    return rows;
  }

  // Static contiguous chunks: the row at index i is computed identically no
  // matter how many workers run, keeping output bytes worker-count free.
  std::vector<std::thread> workers;
  workers.reserve(n_threads);
  const std::size_t chunk = (tasks.size() + n_threads - 1) / n_threads;
  for (unsigned w = 0; w < n_threads; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(tasks.size(), begin + chunk);
    if (begin >= end) break;
    workers.emplace_back([&, begin, end] {
      for (std::size_t i = begin; i < end; ++i)
        rows[i] = compute_row(spec, tasks[i]);
    });
  }
  for (std::thread& w : workers) w.join();
  return rows;
}

void write_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows,
               std::ostream& out) {
  out << "# tunnelgauge-v1\n";
  for (const std::string& note : spec.notes) out << "# note: " << note << "\n";

  const bool energy_axis = spec.axis == Axis::energy;
  out << (energy_axis ? "E_eV" : "phi_V");
  if (energy_axis) out << ",E_over_V0";
  out << ",T";
  const std::vector<Observable> obs = model_observables(spec);
  for (Observable o : obs)
    for (Model m : spec.models)
      out << ',' << observable_name(o)
          << (m == Model::elastic ? "_elastic" : "_inelastic");
  out << ",dTdl,flags\n";

  for (const SweepRow& row : rows) {
    out << fmt(row.axis_value);
    if (energy_axis) out << ',' << fmt(row.e_over_v0);
    out << ',' << fmt(row.T);
    for (Observable o : obs) {
      for (Model m : spec.models) {
        const ModelColumns& cols =
            m == Model::elastic ? row.elastic : row.inelastic;
        double v = quiet_nan;
        switch (o) {
          case Observable::m1: v = cols.m1; break;
          case Observable::m2: v = cols.m2; break;
          case Observable::dp2: v = cols.dp2; break;
          case Observable::product: v = cols.product; break;
          default: break;
        }
        out << ',' << fmt(v);
      }
    }
    out << ',' << fmt(row.dTdl) << ',';
    for (std::size_t i = 0; i < row.flags.size(); ++i) {
      if (i) out << ';';
      out << row.flags[i];
    }
    out << '\n';
  }
}

void write_json(const SweepSpec& spec, const std::vector<SweepRow>& rows,
                std::ostream& out) {
  const bool energy_axis = spec.axis == Axis::energy;
  const std::vector<Observable> obs = model_observables(spec);
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const SweepRow& row : rows) {
    nlohmann::ordered_json r;
    r[energy_axis ? "E_eV" : "phi_V"] = json_value(row.axis_value);
    if (energy_axis) r["E_over_V0"] = json_value(row.e_over_v0);
    r["T"] = json_value(row.T);
    for (Observable o : obs) {
      for (Model m : spec.models) {
        const ModelColumns& cols =
            m == Model::elastic ? row.elastic : row.inelastic;
        double v = quiet_nan;
        switch (o) {
          case Observable::m1: v = cols.m1; break;
          case Observable::m2: v = cols.m2; break;
          case Observable::dp2: v = cols.dp2; break;
          case Observable::product: v = cols.product; break;
          default: break;
        }
        r[std::string(observable_name(o)) +
          (m == Model::elastic ? "_elastic" : "_inelastic")] = json_value(v);
      }
    }
    r["dTdl"] = json_value(row.dTdl);
    r["flags"] = row.flags;
    doc.push_back(std::move(r));
  }
  out << doc.dump(2) << '\n';
}

void write_output(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  std::ofstream out(spec.output);
  if (!out)
    throw std::invalid_argument("cannot open output file: " + spec.output);
  if (spec.format == OutputFormat::csv)
    write_csv(spec, rows, out);
  else
    write_json(spec, rows, out);
  out.flush();
  if (!out)
    throw std::invalid_argument("failed writing output file: " + spec.output);
}

namespace {

std::string join_path(const std::string& dir, const std::string& file) {
  if (dir.empty()) return file;
  return (std::filesystem::path(dir) / file).string();
}

SweepSpec voltage_preset(const BarrierSpec& barrier, double energy,
                         const std::string& path, const std::string& note) {
  SweepSpec spec;
  spec.axis = Axis::voltage;
  spec.min = 0.0;
  spec.max = 2.0;
  spec.n_points = 201;
  spec.barrier = barrier;
  spec.models = {Model::elastic, Model::inelastic};
  spec.observables = {Observable::product};
  spec.fixed_energy = energy;
  spec.output = path;
  spec.notes = {note};
  return spec;
}

std::string energy_tag(double energy) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.1f", energy);
  return buf;
}

}  // namespace

std::vector<SweepSpec> presets(const std::string& name,
                               const std::string& out_dir) {
  if (name == "fig1") {
    SweepSpec spec;
    spec.axis = Axis::energy;
    spec.min = 0.0;
    spec.max = 15.0;
    spec.n_points = 3000;
    spec.barrier = BarrierSpec{Rectangular{5.0, 5.0}, std::nullopt};
    spec.models = {Model::elastic, Model::inelastic};
    spec.observables = {Observable::product};
    spec.output = join_path(out_dir, "fig1.csv");
    spec.notes = {
        "preset fig1: rectangular barrier V0=5 eV, l=5 A; uncertainty "
        "products on a 3000-point energy grid over (0, 3 V0]"};
    return {spec};
  }
  if (name == "fig3" || name == "fig4") {
    const bool ramp = name == "fig4";
    std::vector<SweepSpec> specs;
    for (double energy : {1.0, 2.5, 4.0}) {
      BarrierSpec barrier =
          ramp ? BarrierSpec{LinearSlowing{5.0, 5.0, 0.0, 128}, std::nullopt}
               : BarrierSpec{AsymRectangular{5.0, 5.0, 0.0}, std::nullopt};
      const std::string file =
          name + "_E" + energy_tag(energy) + "eV.csv";
      const std::string note =
          "preset " + name + ": " +
          (ramp ? std::string("linearly slowing barrier (128-step staircase)")
                : std::string("asymmetric rectangular barrier")) +
          " V0=5 eV, l=5 A; uncertainty products on a 201-point contact-"
          "potential grid over [0, 2] V at fixed energy " +
          energy_tag(energy) + " eV";
      specs.push_back(
          voltage_preset(barrier, energy, join_path(out_dir, file), note));
    }
    return specs;
  }
  if (name == "fig6") {
    SweepSpec spec;
    spec.axis = Axis::energy;
    spec.min = 0.0;
    spec.max = 4.0;
    spec.n_points = 2000;
    spec.barrier =
        BarrierSpec{DoubleBarrier{4.0, -2.1, 8.0, 2.0, 1.2}, std::nullopt};
    spec.models = {Model::elastic, Model::inelastic};
    spec.observables = {Observable::T, Observable::m1};
    spec.output = join_path(out_dir, "fig6.csv");
    spec.notes = {
        "preset fig6: double barrier (V0=4 eV over 8 A gap, well -2.1 eV "
        "over 2 A, 1.2 A exit barrier); transmission and mean momentum "
        "transfer on a 2000-point energy grid over (0, 4] eV"};
    return {spec};
  }
  throw UnknownPreset("unknown preset: " + name);
}

}  // namespace tunnelgauge
