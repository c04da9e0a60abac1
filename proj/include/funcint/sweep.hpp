#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "funcint/models.hpp"

namespace funcint {

enum class SweepVariable { Beta, UBar };

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Quadratic models are swept from their assembled system; the adhesion model
/// is rebuilt per row.
using SweepModel = std::variant<ModelSystem, AdhesionParams>;

/// Column sets:
///   quadratic models: beta, log_Z, min_energy, mean_energy, mean_norm
///   adhesion:         u_bar, beta, mean_force, mean_xi, log_Z
///
/// Sweeping `Beta` produces one row per value. Sweeping `UBar` (adhesion only)
/// produces one row per (beta, u_bar) pair, beta-major. Rows are evaluated in
/// parallel and returned in input order; the first failing row (in input
/// order) is rethrown and no table is returned.
Table sweep(const SweepModel& model, SweepVariable variable, std::span<const double> values,
            std::span<const double> betas = {});

/// Single-threaded reference of `sweep`; identical output.
Table sweep_serial(const SweepModel& model, SweepVariable variable,
                   std::span<const double> values, std::span<const double> betas = {});

}  // namespace funcint
