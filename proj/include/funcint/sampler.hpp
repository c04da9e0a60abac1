#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "funcint/assembly.hpp"

namespace funcint {

/// One step is one sweep of single-coordinate random-walk proposals over every
/// dof (plus one heat-bath update of the spin for spin chains). `n_steps`
/// counts burn-in. A proposal scale giving 20-50% acceptance is a good start.
struct ChainConfig {
  std::size_t n_steps = 0;
  std::size_t burn_in = 0;
  double proposal_scale = 1.0;
  std::uint64_t seed = 0;
  std::size_t thin = 1;
};

struct Estimate {
  std::vector<double> value;
  std::vector<double> std_error;  ///< batch means; +inf with fewer than 2 batches
  std::size_t n_effective_batches = 0;
  std::size_t n_samples = 0;
  double acceptance_rate = 0.0;
};

/// Energy with single-coordinate updates. Implementations keep the current
/// state and whatever cache makes `delta` cheap.
class EnergyModel {
 public:
  virtual ~EnergyModel() = default;

  virtual std::size_t dim() const = 0;
  virtual void reset(std::span<const double> d) = 0;
  virtual std::span<const double> state() const = 0;
  virtual double energy() const = 0;
  /// Energy change if coordinate i moves by `step`.
  virtual double delta(std::size_t i, double step) = 0;
  virtual void apply(std::size_t i, double step) = 0;
};

/// Adds a finite spin variable xi in {0, .., n_spin_states()-1}.
class SpinEnergyModel : public EnergyModel {
 public:
  virtual std::size_t n_spin_states() const = 0;
  virtual std::size_t spin() const = 0;
  virtual void set_spin(std::size_t xi) = 0;
  /// Unnormalized log p(xi | d) at the current state, for every xi.
  virtual void conditional_log_weights(double beta, std::span<double> out) const = 0;
};

using EnergyFn = std::function<double(std::span<const double>)>;
using Observable = std::function<std::vector<double>(std::span<const double>)>;
using SpinEnergyFn = std::function<double(std::span<const double>, std::size_t)>;
using SpinLogWeightsFn = std::function<void(std::span<const double>, std::span<double>)>;
using SpinObservable = std::function<std::vector<double>(std::span<const double>, std::size_t)>;

/// Black-box energy; every delta costs one full evaluation.
class FunctionEnergy final : public EnergyModel {
 public:
  FunctionEnergy(EnergyFn fn, std::size_t dim);

  std::size_t dim() const override { return d_.size(); }
  void reset(std::span<const double> d) override;
  std::span<const double> state() const override { return d_; }
  double energy() const override { return e_; }
  double delta(std::size_t i, double step) override;
  void apply(std::size_t i, double step) override;

 private:
  EnergyFn fn_;
  std::vector<double> d_;
  double e_ = 0.0;
  double proposed_ = 0.0;
};

/// Quadratic energy 1/2 d^T K d + b^T d + c with a cached gradient; a
/// coordinate update costs O(nonzeros in one column of K).
class QuadraticEnergy final : public EnergyModel {
 public:
  explicit QuadraticEnergy(const QuadraticForm& form);

  std::size_t dim() const override { return d_.size(); }
  void reset(std::span<const double> d) override;
  std::span<const double> state() const override { return d_; }
  double energy() const override { return e_; }
  double delta(std::size_t i, double step) override;
  void apply(std::size_t i, double step) override;

 private:
  std::vector<std::vector<std::pair<std::size_t, double>>> columns_;
  std::vector<double> diag_;
  std::vector<double> b_;
  double c_;
  std::vector<double> d_;
  std::vector<double> grad_;
  double e_ = 0.0;
  std::size_t updates_ = 0;
};

/// Family of quadratic forms indexed by the spin; all share the dof layout.
class SpinQuadraticEnergy final : public SpinEnergyModel {
 public:
  SpinQuadraticEnergy(std::vector<QuadraticForm> forms, std::size_t initial_spin = 0);

  std::size_t dim() const override { return active().dim(); }
  void reset(std::span<const double> d) override { active().reset(d); }
  std::span<const double> state() const override { return active().state(); }
  double energy() const override { return active().energy(); }
  double delta(std::size_t i, double step) override { return active().delta(i, step); }
  void apply(std::size_t i, double step) override { active().apply(i, step); }

  std::size_t n_spin_states() const override { return forms_.size(); }
  std::size_t spin() const override { return spin_; }
  void set_spin(std::size_t xi) override;
  void conditional_log_weights(double beta, std::span<double> out) const override;

 private:
  QuadraticEnergy& active() { return energies_[spin_]; }
  const QuadraticEnergy& active() const { return energies_[spin_]; }

  std::vector<QuadraticForm> forms_;
  std::vector<QuadraticEnergy> energies_;
  std::size_t spin_;
};

/// Black-box joint energy E(d, xi). Log weights default to -beta E(d, xi).
class FunctionSpinEnergy final : public SpinEnergyModel {
 public:
  FunctionSpinEnergy(SpinEnergyFn fn, std::size_t dim, std::size_t n_states,
                     SpinLogWeightsFn log_weights = {});

  std::size_t dim() const override { return inner_.dim(); }
  void reset(std::span<const double> d) override { inner_.reset(d); }
  std::span<const double> state() const override { return inner_.state(); }
  double energy() const override { return inner_.energy(); }
  double delta(std::size_t i, double step) override { return inner_.delta(i, step); }
  void apply(std::size_t i, double step) override { inner_.apply(i, step); }

  std::size_t n_spin_states() const override { return n_states_; }
  std::size_t spin() const override { return *spin_; }
  void set_spin(std::size_t xi) override;
  void conditional_log_weights(double beta, std::span<double> out) const override;

 private:
  SpinEnergyFn fn_;
  SpinLogWeightsFn log_weights_;
  std::size_t n_states_;
  std::shared_ptr<std::size_t> spin_;
  FunctionEnergy inner_;
};

/// Random-walk Metropolis: each coordinate gets a N(0, scale^2) proposal,
/// accepted with probability min(1, exp(-beta dE)). The estimate is the mean of
/// the post-burn-in, thinned samples with batch-means error bars over
/// floor(sqrt(samples)) batches. Deterministic for a fixed seed.
Estimate metropolis(EnergyModel& model, double beta, std::span<const double> init,
                    const Observable& observable, const ChainConfig& cfg);
Estimate metropolis(const EnergyFn& energy_fn, double beta, std::span<const double> init,
                    const Observable& observable, const ChainConfig& cfg);

/// Alternates a Metropolis sweep over d at fixed xi with an exact heat-bath
/// draw of xi from p(xi | d).
Estimate metropolis_with_spin(SpinEnergyModel& model, double beta, std::span<const double> init_d,
                              std::size_t init_xi, const SpinObservable& observable,
                              const ChainConfig& cfg);
Estimate metropolis_with_spin(const SpinEnergyFn& energy_fn, std::size_t n_states, double beta,
                              std::span<const double> init_d, std::size_t init_xi,
                              const SpinLogWeightsFn& log_weights,
                              const SpinObservable& observable, const ChainConfig& cfg);

/// Seed of chain `index` in a multi-chain run.
std::uint64_t chain_seed(std::uint64_t base, std::size_t index);

/// Inverse-variance weighted merge of independent chains.
Estimate combine_estimates(std::span<const Estimate> chains);

using ModelFactory = std::function<std::unique_ptr<EnergyModel>()>;

/// `n_chains` independent chains (seeds from `chain_seed`) run with OpenMP and
/// merged by `combine_estimates`. `run_chains_serial` is the single-threaded
/// reference and returns identical results.
Estimate run_chains(const ModelFactory& make_model, double beta, std::span<const double> init,
                    const Observable& observable, const ChainConfig& cfg, std::size_t n_chains);
Estimate run_chains_serial(const ModelFactory& make_model, double beta,
                           std::span<const double> init, const Observable& observable,
                           const ChainConfig& cfg, std::size_t n_chains);

}  // namespace funcint
