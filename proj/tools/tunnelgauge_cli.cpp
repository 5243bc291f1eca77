#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "tunnelgauge/sweep.hpp"
#include "tunnelgauge/transport.hpp"

namespace {

using nlohmann::ordered_json;

ordered_json json_value(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("bad JSON in " + path + ": " + e.what());
  }
}

std::vector<std::string> flag_names(const tunnelgauge::UncertaintyFlags& f) {
  std::vector<std::string> out;
  if (f.divergent_dTdl) out.push_back("divergent_dTdl");
  if (f.negative_dp2_elastic) out.push_back("negative_dp2_elastic");
  if (f.negative_dp2_inelastic) out.push_back("negative_dp2_inelastic");
  if (f.underflow_T) out.push_back("underflow_T");
  if (f.nudged_energy) out.push_back("nudged_energy");
  return out;
}

int run_sweep_command(const std::string& config_path, int threads) {
  const tunnelgauge::SweepSpec spec =
      tunnelgauge::sweep_from_json(load_json_file(config_path));
  tunnelgauge::write_output(spec, tunnelgauge::run_sweep(spec, threads));
  std::cout << spec.output << "\n";
  return 0;
}

int run_fig_command(const std::string& name, const std::string& out_dir,
                    int threads) {
  for (const tunnelgauge::SweepSpec& spec :
       tunnelgauge::presets(name, out_dir)) {
    tunnelgauge::write_output(spec, tunnelgauge::run_sweep(spec, threads));
    std::cout << spec.output << "\n";
  }
  return 0;
}

int run_analyze_command(const std::string& barrier_path, double energy,
                        const std::optional<std::string>& model_str) {
  const tunnelgauge::BarrierSpec barrier =
      tunnelgauge::barrier_from_json(load_json_file(barrier_path));
  std::optional<tunnelgauge::Model> model;
  if (model_str) {
    if (*model_str == "elastic")
      model = tunnelgauge::Model::elastic;
    else if (*model_str == "inelastic")
      model = tunnelgauge::Model::inelastic;
    else
      throw std::invalid_argument("unknown model: " + *model_str);
  }

  const tunnelgauge::UncertaintyReport rep =
      tunnelgauge::analyze(barrier, energy);
  const tunnelgauge::ScatteringSolution sol =
      tunnelgauge::solve(tunnelgauge::build_profile(barrier), energy);

  ordered_json out;
  out["E_eV"] = json_value(rep.E);
  out["T"] = json_value(rep.T);
  out["dTdl"] = json_value(rep.dTdl);
  const tunnelgauge::CurrentsReport elastic =
      tunnelgauge::transferred_elastic(sol);
  const tunnelgauge::CurrentsReport inelastic =
      tunnelgauge::transferred_inelastic(sol);
  if (model) {
    const bool el = *model == tunnelgauge::Model::elastic;
    const tunnelgauge::CurrentsReport& rep_m = el ? elastic : inelastic;
    out["model"] = el ? "elastic" : "inelastic";
    out["m1"] = json_value(rep_m.m1);
    out["m2"] = json_value(rep_m.m2);
    out["dp2"] = json_value(el ? rep.dp2_elastic : rep.dp2_inelastic);
    out["product"] =
        json_value(el ? rep.product_elastic : rep.product_inelastic);
  } else {
    out["m1_elastic"] = json_value(elastic.m1);
    out["m1_inelastic"] = json_value(inelastic.m1);
    out["m2_elastic"] = json_value(elastic.m2);
    out["m2_inelastic"] = json_value(inelastic.m2);
    out["dp2_elastic"] = json_value(rep.dp2_elastic);
    out["dp2_inelastic"] = json_value(rep.dp2_inelastic);
    out["product_elastic"] = json_value(rep.product_elastic);
    out["product_inelastic"] = json_value(rep.product_inelastic);
  }
  out["flags"] = flag_names(rep.flags);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_mfp_command(std::optional<double> mobility, std::optional<double> A,
                    std::optional<double> B, double energy,
                    std::optional<double> size) {
  if (mobility && (A || B))
    throw std::invalid_argument("give either --mobility or --A/--B, not both");
  if (!mobility && !(A && B))
    throw std::invalid_argument("give either --mobility or both --A and --B");
  const double lambda = mobility
                            ? tunnelgauge::mfp_from_mobility(*mobility, energy)
                            : tunnelgauge::mfp_empirical(energy, *A, *B);
  ordered_json out;
  out["E_eV"] = energy;
  out["lambda_A"] = json_value(lambda);
  if (size) {
    const tunnelgauge::BallisticAssessment a =
        tunnelgauge::ballistic_ratio(lambda, *size);
    out["ratio"] = json_value(a.ratio);
    out["regime"] =
        a.regime == tunnelgauge::TransportRegime::elastic ? "elastic"
                                                          : "inelastic";
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "tunnelgauge: stationary tunneling observables for piecewise-constant "
      "barriers"};
  app.require_subcommand(1);

  std::string config_path;
  int threads = 0;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "run a sweep described by a JSON config");
  sweep_cmd->add_option("--config", config_path, "sweep config JSON file")
      ->required();
  sweep_cmd->add_option("--threads", threads,
                        "worker threads (default: hardware)");

  std::string fig_name;
  std::string out_dir = ".";
  CLI::App* fig_cmd =
      app.add_subcommand("fig", "write a bundled figure dataset");
  fig_cmd->add_option("name", fig_name, "preset name (fig1, fig3, fig4, fig6)")
      ->required();
  fig_cmd->add_option("--out", out_dir, "output directory (default: .)");
  fig_cmd->add_option("--threads", threads,
                      "worker threads (default: hardware)");

  std::string barrier_path;
  double energy = 0.0;
  std::string model_str;
  CLI::App* analyze_cmd = app.add_subcommand(
      "analyze", "single-energy observables for a barrier JSON");
  analyze_cmd->add_option("--barrier", barrier_path, "barrier JSON file")
      ->required();
  analyze_cmd->add_option("--energy", energy, "electron energy (eV)")
      ->required();
  CLI::Option* model_opt = analyze_cmd->add_option(
      "--model", model_str, "elastic or inelastic (default: both)");

  double mobility = 0.0;
  double coef_A = 0.0;
  double coef_B = 0.0;
  double mfp_energy = 0.0;
  double size = 0.0;
  CLI::App* mfp_cmd =
      app.add_subcommand("mfp", "mean free path and transport regime");
  CLI::Option* mob_opt =
      mfp_cmd->add_option("--mobility", mobility, "electron mobility (m^2/Vs)");
  CLI::Option* a_opt =
      mfp_cmd->add_option("--A", coef_A, "low-energy coefficient (eV^2 A)");
  CLI::Option* b_opt =
      mfp_cmd->add_option("--B", coef_B, "high-energy coefficient (eV^0.5 A)");
  mfp_cmd->add_option("--energy", mfp_energy, "electron energy (eV)")
      ->required();
  CLI::Option* size_opt =
      mfp_cmd->add_option("--size", size, "device size (A) for the regime");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sweep_cmd->parsed()) return run_sweep_command(config_path, threads);
    if (fig_cmd->parsed()) return run_fig_command(fig_name, out_dir, threads);
    if (analyze_cmd->parsed()) {
      std::optional<std::string> model;
      if (model_opt->count() > 0) model = model_str;
      return run_analyze_command(barrier_path, energy, model);
    }
    if (mfp_cmd->parsed()) {
      std::optional<double> mob, a, b, sz;
      if (mob_opt->count() > 0) mob = mobility;
      if (a_opt->count() > 0) a = coef_A;
      if (b_opt->count() > 0) b = coef_B;
      if (size_opt->count() > 0) sz = size;
      return run_mfp_command(mob, a, b, mfp_energy, sz);
    }
  } catch (const tunnelgauge::UnknownPreset& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const tunnelgauge::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
