#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tunnelgauge/uncertainty.hpp"

namespace tunnelgauge {

enum class Axis { energy, voltage };
enum class Observable { T, m1, m2, dp2, product, dTdl };
enum class OutputFormat { csv, json };

// One deterministic parameter sweep. The voltage axis varies phi of an
// AsymRectangular or LinearSlowing barrier at a fixed electron energy.
struct SweepSpec {
  Axis axis = Axis::energy;
  double min = 0.0;
  double max = 0.0;
  int n_points = 2;  // uniform grid, inclusive endpoints
  BarrierSpec barrier;
  std::vector<Model> models;            // canonical order, deduplicated
  std::vector<Observable> observables;  // canonical order, deduplicated
  std::optional<double> fixed_energy;   // required for the voltage axis
  std::string output;                   // file path
  OutputFormat format = OutputFormat::csv;
  std::vector<std::string> notes;  // emitted as header comment lines
};

// Per-model observable columns; NaN when not requested or not computable.
struct ModelColumns {
  double m1 = std::numeric_limits<double>::quiet_NaN();
  double m2 = std::numeric_limits<double>::quiet_NaN();
  double dp2 = std::numeric_limits<double>::quiet_NaN();
  double product = std::numeric_limits<double>::quiet_NaN();
};

// T, dTdl and flags are always emitted; per-model columns follow the
// requested observables. Row-level solver failures land in flags.
struct SweepRow {
  double axis_value = 0.0;
  double e_over_v0 = 0.0;  // energy axis only
  double T = 0.0;
  ModelColumns elastic;
  ModelColumns inelastic;
  double dTdl = 0.0;
  std::vector<std::string> flags;
};

// JSON form: {"axis": "energy"|"voltage", "range": [min, max], "n_points",
// "barrier": <barrier JSON>, "models": [...], "observables": [...],
// "fixed_energy", "output", "format"}. Throws std::invalid_argument on
// malformed or inconsistent specs.
SweepSpec sweep_from_json(const nlohmann::json& j);

// Uniform inclusive grid; an energy grid that lands on 0 or any region
// potential is shifted up by half a spacing.
std::vector<double> sweep_grid(const SweepSpec& spec);

// Rows in ascending axis order, computed independently per grid point;
// identical results for any worker count. threads <= 0 uses the hardware
// concurrency. Per-row numeric failures are flagged, never aborting.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, int threads = 0);

void write_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows,
               std::ostream& out);
void write_json(const SweepSpec& spec, const std::vector<SweepRow>& rows,
                std::ostream& out);

// Writes to spec.output in spec.format.
void write_output(const SweepSpec& spec, const std::vector<SweepRow>& rows);

// Bundled figure datasets: "fig1" (rectangular energy sweep of the
// uncertainty products), "fig3"/"fig4" (voltage sweeps at three fixed
// energies, three files), "fig6" (double-barrier transmission and momentum
// transfer). Output paths land in out_dir. Throws UnknownPreset.
std::vector<SweepSpec> presets(const std::string& name,
                               const std::string& out_dir);

}  // namespace tunnelgauge
