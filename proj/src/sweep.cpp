#include "funcint/sweep.hpp"

#include <exception>

#include "funcint/error.hpp"

namespace funcint {
namespace {

struct RowPlan {
  double beta;
  double u_bar;
};

std::vector<std::string> columns_for(const SweepModel& model) {
  if (std::holds_alternative<AdhesionParams>(model)) {
    return {"u_bar", "beta", "mean_force", "mean_xi", "log_Z"};
  }
  return {"beta", "log_Z", "min_energy", "mean_energy", "mean_norm"};
}

std::vector<RowPlan> plan_rows(const SweepModel& model, SweepVariable variable,
                               std::span<const double> values, std::span<const double> betas) {
  const bool adhesion = std::holds_alternative<AdhesionParams>(model);
  std::vector<RowPlan> plan;
  if (variable == SweepVariable::Beta) {
    const double u_bar = adhesion ? std::get<AdhesionParams>(model).u_bar : 0.0;
    for (double b : values) plan.push_back({b, u_bar});
    return plan;
  }
  if (!adhesion) {
    throw Error(ErrorCode::InvalidParameter, "u_bar sweeps apply to the adhesion model only");
  }
  if (betas.empty() && !values.empty()) {
    throw Error(ErrorCode::InvalidParameter, "a u_bar sweep needs at least one beta");
  }
  for (double b : betas) {
    for (double u : values) plan.push_back({b, u});
  }
  return plan;
}

std::vector<double> evaluate_row(const SweepModel& model, const RowPlan& row) {
  if (const auto* sys = std::get_if<ModelSystem>(&model)) {
    const GaussianStats g = moments({row.beta, sys->form}, false);
    return {row.beta, g.log_Z, g.min_energy, g.mean_energy, g.mean.norm()};
  }
  AdhesionParams p = std::get<AdhesionParams>(model);
  p.u_bar = row.u_bar;
  const SpinEnsemble se = build_spin_ensemble(p, row.beta);
  const SpinObservables obs = spin_observables(se);
  return {row.u_bar, row.beta, mean_force(se), obs.mean_xi, obs.log_Z_total};
}

}  // namespace

Table sweep(const SweepModel& model, SweepVariable variable, std::span<const double> values,
            std::span<const double> betas) {
  const auto plan = plan_rows(model, variable, values, betas);
  Table t{columns_for(model), std::vector<std::vector<double>>(plan.size())};
  std::vector<std::exception_ptr> errors(plan.size());
  const auto count = static_cast<long long>(plan.size());
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    try {
      t.rows[i] = evaluate_row(model, plan[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return t;
}

Table sweep_serial(const SweepModel& model, SweepVariable variable,
                   std::span<const double> values, std::span<const double> betas) {
  const auto plan = plan_rows(model, variable, values, betas);
  Table t{columns_for(model), {}};
  t.rows.reserve(plan.size());
  for (const auto& row : plan) t.rows.push_back(evaluate_row(model, row));
  return t;
}

}  // namespace funcint
