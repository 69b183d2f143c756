#pragma once

#include "gsp/circuit.hpp"
#include "gsp/simulate.hpp"
#include "gsp/tfim.hpp"

#include <functional>
#include <vector>

namespace gsp {

// Per-iteration shot budget of the training loop: the system register is
// measured in both bases, the ancilla register in Z only.
struct ShotsPlan {
    long system_x = 8192;
    long system_z = 8192;
    long ancilla_z = 16384;
};

struct CostBreakdown {
    double energy = 0.0;
    double entropy = 0.0; // nats
    double beta = 0.0;
    double cost = 0.0; // energy - entropy / beta
};

// <H> from system-register counts: the XX bond terms come from X-basis bit
// parities on cyclically adjacent pairs, the field terms from Z-basis bits.
double estimate_energy(const Counts& counts_x, const Counts& counts_z, const TFIMParams& p);

// Plug-in entropy of the ancilla Z-basis frequency distribution.
double estimate_entropy(const Counts& counts_z_ancilla);

// Build the GSP circuit for `params`, execute it under `noise`, sample the
// shot plan, and combine the estimators into the variational free energy.
CostBreakdown evaluate_cost_shots(const ParamSet& params, const GibbsTarget& target,
                                  const NoiseProfile& noise, const ShotsPlan& plan,
                                  std::uint64_t seed);

// Infinite-shot version: energy from tr(H rho_S), entropy from the exact
// ancilla Z diagonal.
CostBreakdown evaluate_cost_exact(const ParamSet& params, const GibbsTarget& target,
                                  const NoiseProfile& noise);

struct SpsaGains {
    double alpha = 0.602;
    double gamma = 0.101;
    double stability = 10.0; // the A offset in a_k = a/(k+1+A)^alpha
    double c = 0.2;
    double first_step = 0.1; // calibrated infinity-norm of the first update
    int calibration_probes = 10;
};

struct OptResult {
    ParamSet best_params;
    double best_cost = 0.0;
    std::vector<double> cost_trace; // objective at the iterate, per iteration
    int iterations = 0;
    std::uint64_t seed = 0;
};

// Standard SPSA minimization: one Rademacher perturbation and two objective
// evaluations per iteration, gain schedules a_k = a/(k+1+A)^alpha and
// c_k = c/(k+1)^gamma. The coefficient `a` is calibrated from an initial
// gradient-magnitude probe so the first update step has infinity-norm
// approximately `first_step`. Returns the best iterate seen.
OptResult spsa_minimize(const std::function<double(const ParamSet&)>& objective,
                        const ParamSet& init, int max_iter, const SpsaGains& gains,
                        std::uint64_t seed);

enum class SelectBy { Cost, Fidelity };

struct TrainOptions {
    int ancilla_layers = 1;
    int system_layers = 1;
    int max_iterations = 100;
    ShotsPlan shots;
    SpsaGains gains;
    SelectBy select_by = SelectBy::Fidelity;
    int workers = 1;
};

// Run `restarts` independent SPSA minimizations from fresh random initial
// parameters (restart i uses the stream derived from (seed, i)) and return
// the winner: highest fidelity of the prepared state against the exact
// Gibbs state, or lowest cost when the oracle is withheld.
OptResult train(const GibbsTarget& target, const NoiseProfile& noise, int restarts,
                std::uint64_t seed, const TrainOptions& options = {});

// Prepared reduced system state for a parameter set under a profile.
DensityMatrix prepare_system_state(const ParamSet& params, const NoiseProfile& noise);

} // namespace gsp
