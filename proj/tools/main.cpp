#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "funcint/error.hpp"
#include "funcint/mesh.hpp"
#include "run_config.hpp"

namespace {

using namespace funcint;

bool is_numerical(ErrorCode c) {
  switch (c) {
    case ErrorCode::SingularAfterBC:
    case ErrorCode::NotPositiveDefinite:
    case ErrorCode::NonSymmetric:
    case ErrorCode::NonFiniteEnergy:
      return true;
    default:
      return false;
  }
}

int run_command(const std::string& config_path, const std::string& output_override,
                const std::optional<std::uint64_t>& seed_override) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read config '" << config_path << "'\n";
    return 1;
  }
  std::ostringstream text;
  text << in.rdbuf();
  const std::string base_dir = std::filesystem::path(config_path).parent_path().string();

  cli::RunConfig cfg;
  try {
    cfg = cli::parse_run_config(text.str(), base_dir);
  } catch (const cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const cli::ModelError& e) {
    if (is_numerical(e.code())) {
      std::cerr << "numerical failure in model '" << e.model() << "': " << e.what() << '\n';
      return 2;
    }
    std::cerr << "error in model '" << e.model() << "': " << e.what() << '\n';
    return 1;
  }
  if (!output_override.empty()) cfg.output_path = output_override;
  if (cfg.output_path.empty()) {
    std::cerr << "error: config field 'output.path' is required (or pass --output)\n";
    return 1;
  }
  if (seed_override) cfg.mcmc.chain.seed = *seed_override;

  cli::RunResult result;
  try {
    result = cli::execute(cfg);
  } catch (const Error& e) {
    if (is_numerical(e.code())) {
      std::cerr << "numerical failure in model '" << cfg.model_name << "': " << e.what() << '\n';
      return 2;
    }
    std::cerr << "error in model '" << cfg.model_name << "': " << e.what() << '\n';
    return 1;
  }

  const std::string body = cfg.format == cli::OutputFormat::Csv ? cli::format_csv(result.table)
                                                                 : cli::format_json(result.table);
  std::ofstream out(cfg.output_path, std::ios::binary);
  out << body;
  out.close();
  if (!out) {
    std::cerr << "error: cannot write '" << cfg.output_path << "'\n";
    return 1;
  }
  std::cout << "model=" << cfg.model_name << " dofs=" << result.n_dofs
            << " rows=" << result.table.rows.size() << " output=" << cfg.output_path << '\n';
  return 0;
}

int mesh_info_command(const std::string& path, const std::vector<double>& positions) {
  try {
    if (!positions.empty()) {
      std::cout << cli::mesh_summary(build_interval_mesh(positions.back(), positions));
    } else {
      std::cout << cli::mesh_summary(read_msh_file(path));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << (path.empty() ? std::string("positions") : path) << ": " << e.what()
              << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-element functional integrals"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Evaluate a model described by a JSON config");
  std::string config_path, output_path;
  std::uint64_t seed = 0;
  run->add_option("--config", config_path, "Run configuration (JSON)")->required();
  run->add_option("--output", output_path, "Output file, overrides output.path");
  auto* seed_opt = run->add_option("--seed-override", seed, "Replace mcmc.seed");

  auto* info = app.add_subcommand("mesh-info", "Summarize a mesh");
  std::string mesh_path;
  std::vector<double> positions;
  info->add_option("path", mesh_path, "Gmsh MSH 2.2 ASCII file");
  info->add_option("--positions", positions, "Interval mesh node positions from 0 to L")
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    std::optional<std::uint64_t> override;
    if (seed_opt->count()) override = seed;
    return run_command(config_path, output_path, override);
  }
  if (mesh_path.empty() == positions.empty()) {
    std::cerr << "error: mesh-info needs a file path or --positions\n";
    return 1;
  }
  return mesh_info_command(mesh_path, positions);
}
