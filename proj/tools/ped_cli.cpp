#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "ped/serialize.hpp"
#include "ped/verification.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;

void print_config(const ped::PedConfig& cfg) {
  std::cout << "config: lambda_grid = {";
  for (std::size_t i = 0; i < cfg.lambda_grid.size(); ++i)
    std::cout << (i ? ", " : "") << cfg.lambda_grid[i];
  std::cout << "}, C_grid = {";
  for (std::size_t i = 0; i < cfg.C_grid.size(); ++i)
    std::cout << (i ? ", " : "") << cfg.C_grid[i];
  std::cout << "}, alpha = " << cfg.alpha << ", c = " << cfg.c
            << ", rounds = " << cfg.iterative_rounds << ", selection = "
            << (cfg.selection == ped::Selection::aic ? "aic" : "khat")
            << ", seed = " << cfg.seed << ", threads = " << cfg.threads
            << ", kernels = " << ped::kernels::backend_name() << "\n";
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ped::DataError("cannot write output file: " + path);
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Penalized Euclidean distance regression"};
  app.require_subcommand(1);

  ped::PedConfig cfg;
  std::string selection = "khat";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--lambda-grid", cfg.lambda_grid, "Candidate lambda0 values");
    sub->add_option("--c-grid", cfg.C_grid, "Candidate C(p) values");
    sub->add_option("--alpha", cfg.alpha, "Confidence level for the lambda formula");
    sub->add_option("--c", cfg.c, "Multiplier c > 1 in the lambda formula");
    sub->add_option("--rounds", cfg.iterative_rounds, "Iterative screening rounds");
    sub->add_option("--selection", selection, "Grid selection rule")
        ->check(CLI::IsMember({"khat", "aic"}));
    sub->add_option("--seed", cfg.seed, "Master RNG seed");
    sub->add_option("--threads", cfg.threads, "Worker thread cap (0 = all cores)");
    sub->add_option("--max-iters", cfg.optimizer.max_iters, "Optimizer iteration cap");
    sub->add_option("--grad-tol", cfg.optimizer.grad_tol, "Gradient tolerance");
  };

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "Fit a CSV dataset");
  std::string input_path, response_column, output_path;
  fit_cmd->add_option("--input", input_path, "Input CSV")->required();
  fit_cmd->add_option("--response", response_column, "Response column name or index")
      ->required();
  fit_cmd->add_option("--output", output_path, "Result file (default stdout)");
  add_common(fit_cmd);

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Run the simulation study");
  ped::SimulationSpec spec;
  spec.replicates = 0;  // must be set explicitly or via default below
  std::string csv_path;
  sim_cmd->add_option("--n", spec.n, "Observations")->required();
  sim_cmd->add_option("--p", spec.p, "Predictors")->required();
  sim_cmd->add_option("--rho", spec.rho, "AR(1) correlation")->required();
  sim_cmd->add_option("--sigma", spec.sigma, "Noise standard deviation");
  sim_cmd->add_option("--replicates", spec.replicates, "Replicate count")->required();
  sim_cmd->add_option("--csv", csv_path, "Per-replicate CSV output path");
  add_common(sim_cmd);

  // verify
  auto* ver_cmd = app.add_subcommand("verify", "Run the structural-theorem checks");
  ped::VerifyOptions vopts;
  ver_cmd->add_option("--only", vopts.only, "Run only the named checks");
  ver_cmd->add_option("--tol", vopts.tol_scale, "Tolerance scale (<1 tightens)");
  ver_cmd->add_option("--seed", vopts.seed, "RNG seed for constructed instances");
  ver_cmd->add_option("--threads", vopts.threads, "Worker thread cap");
  ver_cmd->add_flag("--skip-rate", [&](std::int64_t) { vopts.include_rate_check = false; },
                    "Skip the slow error-rate scaling sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitInput;
  }

  cfg.selection = selection == "aic" ? ped::Selection::aic : ped::Selection::maximize_k_hat;

  try {
    if (fit_cmd->parsed()) {
      print_config(cfg);
      const ped::RawDataset raw = ped::load_csv(input_path, response_column);
      const ped::StandardizedDataset ds = ped::standardize(raw);
      std::cout << "loaded " << raw.n() << " x " << raw.p() << " ("
                << ds.dropped_columns.size() << " constant columns dropped)\n";
      const ped::FitResult fit = ped::ped_fit(ds, cfg);
      write_output(output_path, ped::serialize_fit_result(fit, ds));
      return kExitOk;
    }

    if (sim_cmd->parsed()) {
      if (spec.replicates < 1) {
        std::cerr << "error: --replicates must be >= 1\n";
        return kExitInput;
      }
      spec.seed = cfg.seed;
      print_config(cfg);
      std::cout << "master seed: " << spec.seed << "\n";
      const ped::MetricsReport report = ped::run_study(spec, cfg);
      std::cout << ped::metrics_to_table(spec, report);
      if (!csv_path.empty()) write_output(csv_path, ped::metrics_to_csv(report));
      return kExitOk;
    }

    // verify
    std::cout << "verify: tol_scale = " << vopts.tol_scale << ", seed = " << vopts.seed
              << ", kernels = " << ped::kernels::backend_name() << "\n";
    const auto outcomes = ped::run_verification_suite(vopts);
    bool all = true;
    for (const auto& o : outcomes) {
      std::cout << (o.pass ? "PASS" : "FAIL") << "  " << o.name << "  " << o.detail
                << "\n";
      all = all && o.pass;
    }
    return all ? kExitOk : 1;
  } catch (const ped::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ped::InterpolationRegimeError& e) {
    std::cerr << "degenerate: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const ped::StudyError& e) {
    std::cerr << "degenerate: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
