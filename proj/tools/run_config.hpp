#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "funcint/error.hpp"
#include "funcint/models.hpp"
#include "funcint/sampler.hpp"
#include "funcint/sweep.hpp"

namespace funcint::cli {

/// Schema violation; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Library failure while building the named model from its parameters.
class ModelError : public Error {
 public:
  ModelError(std::string model, const Error& cause)
      : Error(cause.code(), cause.what()), model_(std::move(model)) {}

  const std::string& model() const noexcept { return model_; }

 private:
  std::string model_;
};

enum class ModelKind { String, Beam, Membrane, Adhesion };
enum class Method { Analytic, Mcmc };
enum class OutputFormat { Csv, Json };

struct McmcConfig {
  ChainConfig chain;
  std::size_t chains = 1;
};

struct RunConfig {
  ModelKind model = ModelKind::String;
  std::string model_name;
  /// Built quadratic model, or adhesion parameters.
  std::variant<std::monostate, ModelSystem, AdhesionParams> system;
  bool scaled_units = false;  ///< adhesion: beta in 1/E0, u_bar in U, force in E0/U
  std::vector<double> betas;
  std::optional<SweepVariable> sweep_variable;
  std::vector<double> sweep_values;
  Method method = Method::Analytic;
  McmcConfig mcmc;
  std::string output_path;
  OutputFormat format = OutputFormat::Csv;
};

/// Parses and validates the JSON text. Relative mesh paths resolve against
/// `base_dir`. Throws ConfigError, or funcint::Error from model construction.
RunConfig parse_run_config(const std::string& text, const std::string& base_dir);

struct RunResult {
  Table table;
  std::size_t n_dofs = 0;
};

RunResult execute(const RunConfig& cfg);

std::string format_csv(const Table& t);
std::string format_json(const Table& t);

/// Node count, element counts per kind, h and bounding box.
std::string mesh_summary(const Mesh& mesh);

}  // namespace funcint::cli
