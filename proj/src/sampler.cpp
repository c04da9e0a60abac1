#include "funcint/sampler.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "funcint/error.hpp"

namespace funcint {
namespace {

void validate(const ChainConfig& cfg, std::size_t dim, std::size_t init_size) {
  if (init_size != dim) {
    throw Error(ErrorCode::DimensionMismatch, "initial state has wrong dimension");
  }
  if (!(cfg.proposal_scale > 0.0) || !std::isfinite(cfg.proposal_scale)) {
    throw Error(ErrorCode::InvalidChainConfig, "proposal_scale must be positive");
  }
  if (cfg.thin == 0) throw Error(ErrorCode::InvalidChainConfig, "thin must be >= 1");
  if (cfg.burn_in > cfg.n_steps) {
    throw Error(ErrorCode::InvalidChainConfig, "burn_in exceeds n_steps");
  }
  if ((cfg.n_steps - cfg.burn_in) / cfg.thin == 0) {
    throw Error(ErrorCode::EmptyChain, "no samples remain after burn-in and thinning");
  }
}

[[noreturn]] void non_finite(std::size_t step, std::size_t coord, double value,
                             std::span<const double> state) {
  std::ostringstream msg;
  msg << "energy is not finite (" << value << ") at step " << step << ", coordinate " << coord
      << "; state = [";
  for (std::size_t i = 0; i < state.size() && i < 16; ++i) msg << (i ? ", " : "") << state[i];
  if (state.size() > 16) msg << ", ...";
  msg << "]";
  throw Error(ErrorCode::NonFiniteEnergy, msg.str());
}

// Accumulates samples and reduces them to batch-means estimates.
class SampleStore {
 public:
  void add(const std::vector<double>& v) {
    if (width_ == 0) width_ = v.size();
    if (v.size() != width_) {
      throw Error(ErrorCode::DimensionMismatch, "observable changed its output size");
    }
    data_.insert(data_.end(), v.begin(), v.end());
    ++count_;
  }

  Estimate finish(double acceptance_rate) const {
    Estimate est;
    est.n_samples = count_;
    est.acceptance_rate = acceptance_rate;
    est.value.assign(width_, 0.0);
    est.std_error.assign(width_, std::numeric_limits<double>::infinity());
    for (std::size_t s = 0; s < count_; ++s) {
      for (std::size_t k = 0; k < width_; ++k) est.value[k] += data_[s * width_ + k];
    }
    for (auto& v : est.value) v /= static_cast<double>(count_);

    const auto n_batches = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(count_))));
    est.n_effective_batches = n_batches;
    if (n_batches < 2) return est;
    const std::size_t batch = count_ / n_batches;
    std::vector<double> means(n_batches * width_, 0.0);
    for (std::size_t bi = 0; bi < n_batches; ++bi) {
      for (std::size_t s = bi * batch; s < (bi + 1) * batch; ++s) {
        for (std::size_t k = 0; k < width_; ++k) means[bi * width_ + k] += data_[s * width_ + k];
      }
    }
    for (auto& m : means) m /= static_cast<double>(batch);
    for (std::size_t k = 0; k < width_; ++k) {
      double mu = 0.0;
      for (std::size_t bi = 0; bi < n_batches; ++bi) mu += means[bi * width_ + k];
      mu /= static_cast<double>(n_batches);
      double var = 0.0;
      for (std::size_t bi = 0; bi < n_batches; ++bi) {
        const double r = means[bi * width_ + k] - mu;
        var += r * r;
      }
      var /= static_cast<double>(n_batches - 1);
      est.std_error[k] = std::sqrt(var / static_cast<double>(n_batches));
    }
    return est;
  }

 private:
  std::vector<double> data_;
  std::size_t width_ = 0;
  std::size_t count_ = 0;
};

struct SweepCounter {
  std::size_t proposed = 0;
  std::size_t accepted = 0;
};

void metropolis_sweep(EnergyModel& model, double beta, double scale, std::mt19937_64& rng,
                      SweepCounter& counter, std::size_t step) {
  std::normal_distribution<double> normal(0.0, scale);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (std::size_t i = 0; i < model.dim(); ++i) {
    const double step_size = normal(rng);
    const double de = model.delta(i, step_size);
    if (!std::isfinite(de)) non_finite(step, i, de, model.state());
    ++counter.proposed;
    if (de <= 0.0 || uniform(rng) < std::exp(-beta * de)) {
      model.apply(i, step_size);
      ++counter.accepted;
    }
  }
}

std::size_t heat_bath(SpinEnergyModel& model, double beta, std::mt19937_64& rng,
                      std::vector<double>& weights, std::size_t step) {
  model.conditional_log_weights(beta, weights);
  double top = -std::numeric_limits<double>::infinity();
  for (double w : weights) top = std::max(top, w);
  if (!std::isfinite(top)) non_finite(step, model.dim(), top, model.state());
  double total = 0.0;
  for (auto& w : weights) {
    w = std::exp(w - top);
    total += w;
  }
  std::uniform_real_distribution<double> uniform(0.0, total);
  double u = uniform(rng);
  for (std::size_t xi = 0; xi < weights.size(); ++xi) {
    if (u < weights[xi]) return xi;
    u -= weights[xi];
  }
  return weights.size() - 1;
}

void check_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorCode::InvalidParameter, "beta must be positive");
  }
}

}  // namespace

// --- FunctionEnergy ---------------------------------------------------------

FunctionEnergy::FunctionEnergy(EnergyFn fn, std::size_t dim) : fn_(std::move(fn)), d_(dim, 0.0) {}

void FunctionEnergy::reset(std::span<const double> d) {
  if (d.size() != d_.size()) throw Error(ErrorCode::DimensionMismatch, "state size mismatch");
  d_.assign(d.begin(), d.end());
  e_ = fn_(d_);
  if (!std::isfinite(e_)) non_finite(0, 0, e_, d_);
}

double FunctionEnergy::delta(std::size_t i, double step) {
  const double old = d_[i];
  d_[i] = old + step;
  proposed_ = fn_(d_);
  d_[i] = old;
  return proposed_ - e_;
}

void FunctionEnergy::apply(std::size_t i, double step) {
  d_[i] += step;
  e_ = proposed_;
}

// --- QuadraticEnergy --------------------------------------------------------

QuadraticEnergy::QuadraticEnergy(const QuadraticForm& form)
    : columns_(form.n()), diag_(form.n()), b_(form.b.data(), form.b.data() + form.b.size()),
      c_(form.c), d_(form.n(), 0.0), grad_(form.n(), 0.0) {
  const auto n = static_cast<Eigen::Index>(form.n());
  for (Eigen::Index j = 0; j < n; ++j) {
    diag_[j] = form.K(j, j);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (form.K(i, j) != 0.0) columns_[j].emplace_back(static_cast<std::size_t>(i), form.K(i, j));
    }
  }
  reset(d_);
}

void QuadraticEnergy::reset(std::span<const double> d) {
  if (d.size() != d_.size()) throw Error(ErrorCode::DimensionMismatch, "state size mismatch");
  if (d.data() != d_.data()) d_.assign(d.begin(), d.end());
  grad_ = b_;
  for (std::size_t j = 0; j < d_.size(); ++j) {
    for (const auto& [i, k] : columns_[j]) grad_[i] += k * d_[j];
  }
  // E = 1/2 d.(g + b) + c with g = K d + b.
  e_ = c_;
  for (std::size_t i = 0; i < d_.size(); ++i) e_ += 0.5 * d_[i] * (grad_[i] + b_[i]);
  updates_ = 0;
}

double QuadraticEnergy::delta(std::size_t i, double step) {
  return step * grad_[i] + 0.5 * diag_[i] * step * step;
}

void QuadraticEnergy::apply(std::size_t i, double step) {
  e_ += delta(i, step);
  d_[i] += step;
  for (const auto& [r, k] : columns_[i]) grad_[r] += k * step;
  // Periodic refresh bounds round-off drift of the cached gradient.
  if (++updates_ >= 64 * (d_.size() + 1)) reset(d_);
}

// --- spin models ------------------------------------------------------------

SpinQuadraticEnergy::SpinQuadraticEnergy(std::vector<QuadraticForm> forms,
                                         std::size_t initial_spin)
    : forms_(std::move(forms)), spin_(initial_spin) {
  if (forms_.empty()) throw Error(ErrorCode::InvalidParameter, "need at least one spin state");
  for (const auto& f : forms_) {
    if (f.n() != forms_.front().n()) {
      throw Error(ErrorCode::DimensionMismatch, "spin forms must share the dof layout");
    }
    energies_.emplace_back(f);
  }
  if (spin_ >= forms_.size()) throw Error(ErrorCode::InvalidParameter, "spin out of range");
}

void SpinQuadraticEnergy::set_spin(std::size_t xi) {
  if (xi >= forms_.size()) throw Error(ErrorCode::InvalidParameter, "spin out of range");
  if (xi == spin_) return;
  const std::vector<double> d(state().begin(), state().end());
  spin_ = xi;
  energies_[spin_].reset(d);
}

void SpinQuadraticEnergy::conditional_log_weights(double beta, std::span<double> out) const {
  const auto s = state();
  const Eigen::Map<const Eigen::VectorXd> d(s.data(), static_cast<Eigen::Index>(s.size()));
  for (std::size_t xi = 0; xi < forms_.size(); ++xi) {
    out[xi] = -beta * funcint::energy(forms_[xi], Eigen::VectorXd(d));
  }
}

FunctionSpinEnergy::FunctionSpinEnergy(SpinEnergyFn fn, std::size_t dim, std::size_t n_states,
                                       SpinLogWeightsFn log_weights)
    : fn_(std::move(fn)),
      log_weights_(std::move(log_weights)),
      n_states_(n_states),
      spin_(std::make_shared<std::size_t>(0)),
      inner_([f = fn_, s = spin_](std::span<const double> d) { return f(d, *s); }, dim) {
  if (n_states_ == 0) throw Error(ErrorCode::InvalidParameter, "need at least one spin state");
}

void FunctionSpinEnergy::set_spin(std::size_t xi) {
  if (xi >= n_states_) throw Error(ErrorCode::InvalidParameter, "spin out of range");
  *spin_ = xi;
  const std::vector<double> d(inner_.state().begin(), inner_.state().end());
  inner_.reset(d);
}

void FunctionSpinEnergy::conditional_log_weights(double beta, std::span<double> out) const {
  if (log_weights_) {
    log_weights_(inner_.state(), out);
    return;
  }
  for (std::size_t xi = 0; xi < n_states_; ++xi) out[xi] = -beta * fn_(inner_.state(), xi);
}

// --- chains -----------------------------------------------------------------

Estimate metropolis(EnergyModel& model, double beta, std::span<const double> init,
                    const Observable& observable, const ChainConfig& cfg) {
  check_beta(beta);
  validate(cfg, model.dim(), init.size());
  model.reset(init);
  std::mt19937_64 rng(cfg.seed);
  SweepCounter counter;
  SampleStore store;
  for (std::size_t step = 0; step < cfg.n_steps; ++step) {
    metropolis_sweep(model, beta, cfg.proposal_scale, rng, counter, step);
    if (step >= cfg.burn_in && (step - cfg.burn_in) % cfg.thin == 0) {
      store.add(observable(model.state()));
    }
  }
  const double rate = counter.proposed ? static_cast<double>(counter.accepted) /
                                             static_cast<double>(counter.proposed)
                                       : 0.0;
  return store.finish(rate);
}

Estimate metropolis(const EnergyFn& energy_fn, double beta, std::span<const double> init,
                    const Observable& observable, const ChainConfig& cfg) {
  FunctionEnergy model(energy_fn, init.size());
  return metropolis(model, beta, init, observable, cfg);
}

Estimate metropolis_with_spin(SpinEnergyModel& model, double beta, std::span<const double> init_d,
                              std::size_t init_xi, const SpinObservable& observable,
                              const ChainConfig& cfg) {
  check_beta(beta);
  validate(cfg, model.dim(), init_d.size());
  if (init_xi >= model.n_spin_states()) {
    throw Error(ErrorCode::InvalidParameter, "initial spin out of range");
  }
  model.reset(init_d);
  model.set_spin(init_xi);
  std::mt19937_64 rng(cfg.seed);
  SweepCounter counter;
  SampleStore store;
  std::vector<double> weights(model.n_spin_states());
  for (std::size_t step = 0; step < cfg.n_steps; ++step) {
    metropolis_sweep(model, beta, cfg.proposal_scale, rng, counter, step);
    model.set_spin(heat_bath(model, beta, rng, weights, step));
    if (step >= cfg.burn_in && (step - cfg.burn_in) % cfg.thin == 0) {
      store.add(observable(model.state(), model.spin()));
    }
  }
  const double rate = counter.proposed ? static_cast<double>(counter.accepted) /
                                             static_cast<double>(counter.proposed)
                                       : 0.0;
  return store.finish(rate);
}

Estimate metropolis_with_spin(const SpinEnergyFn& energy_fn, std::size_t n_states, double beta,
                              std::span<const double> init_d, std::size_t init_xi,
                              const SpinLogWeightsFn& log_weights,
                              const SpinObservable& observable, const ChainConfig& cfg) {
  FunctionSpinEnergy model(energy_fn, init_d.size(), n_states, log_weights);
  return metropolis_with_spin(model, beta, init_d, init_xi, observable, cfg);
}

std::uint64_t chain_seed(std::uint64_t base, std::size_t index) {
  // splitmix64 of (base + index * golden ratio)
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Estimate combine_estimates(std::span<const Estimate> chains) {
  if (chains.empty()) throw Error(ErrorCode::EmptyChain, "no chains to combine");
  if (chains.size() == 1) return chains.front();
  const std::size_t width = chains.front().value.size();
  Estimate out;
  out.value.assign(width, 0.0);
  out.std_error.assign(width, 0.0);
  double accepted = 0.0;
  for (const auto& c : chains) {
    if (c.value.size() != width) throw Error(ErrorCode::DimensionMismatch, "chain widths differ");
    out.n_effective_batches += c.n_effective_batches;
    out.n_samples += c.n_samples;
    accepted += c.acceptance_rate * static_cast<double>(c.n_samples);
  }
  out.acceptance_rate = accepted / static_cast<double>(out.n_samples);
  for (std::size_t k = 0; k < width; ++k) {
    double wsum = 0.0, acc = 0.0;
    bool all_finite = true;
    for (const auto& c : chains) {
      const double se = c.std_error[k];
      if (!(se > 0.0) || !std::isfinite(se)) {
        all_finite = false;
        break;
      }
      wsum += 1.0 / (se * se);
      acc += c.value[k] / (se * se);
    }
    if (all_finite) {
      out.value[k] = acc / wsum;
      out.std_error[k] = 1.0 / std::sqrt(wsum);
    } else {
      // Without usable error bars fall back to a plain average. Zero error on
      // every chain means a constant observable.
      double mean = 0.0;
      bool all_zero = true;
      for (const auto& c : chains) {
        mean += c.value[k];
        all_zero &= c.std_error[k] == 0.0;
      }
      out.value[k] = mean / static_cast<double>(chains.size());
      out.std_error[k] = all_zero ? 0.0 : std::numeric_limits<double>::infinity();
    }
  }
  return out;
}

namespace {

Estimate run_one_chain(const ModelFactory& make_model, double beta, std::span<const double> init,
                       const Observable& observable, ChainConfig cfg, std::size_t index) {
  cfg.seed = chain_seed(cfg.seed, index);
  auto model = make_model();
  return metropolis(*model, beta, init, observable, cfg);
}

}  // namespace

Estimate run_chains(const ModelFactory& make_model, double beta, std::span<const double> init,
                    const Observable& observable, const ChainConfig& cfg, std::size_t n_chains) {
  if (n_chains == 0) throw Error(ErrorCode::EmptyChain, "n_chains must be positive");
  std::vector<Estimate> results(n_chains);
  std::vector<std::exception_ptr> errors(n_chains);
  const auto count = static_cast<long long>(n_chains);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    try {
      results[i] = run_one_chain(make_model, beta, init, observable, cfg, static_cast<std::size_t>(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return combine_estimates(results);
}

Estimate run_chains_serial(const ModelFactory& make_model, double beta,
                           std::span<const double> init, const Observable& observable,
                           const ChainConfig& cfg, std::size_t n_chains) {
  if (n_chains == 0) throw Error(ErrorCode::EmptyChain, "n_chains must be positive");
  std::vector<Estimate> results;
  results.reserve(n_chains);
  for (std::size_t i = 0; i < n_chains; ++i) {
    results.push_back(run_one_chain(make_model, beta, init, observable, cfg, i));
  }
  return combine_estimates(results);
}

}  // namespace funcint
