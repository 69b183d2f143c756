#pragma once

#include "gsp/simulate.hpp"
#include "gsp/tfim.hpp"
#include "gsp/vqa.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace gsp {

// Full-state tomography data: Z-basis counts after rotating each qubit into
// the local basis named by the setting string, for all 3^n settings over
// {X, Y, Z}, each with the same shot budget.
struct TomographyData {
    int n = 0;
    long shots_per_setting = 0;
    std::map<std::string, Counts> settings;

    void check_complete() const;
};

// All 3^n measurement settings in lexicographic order (X < Y < Z).
std::vector<std::string> tomography_settings(int n);

// Rotate-and-sample each setting of `rho` (an n-qubit state).
TomographyData tomography_collect(const DensityMatrix& rho, long shots_per_setting, double p_spam,
                                  RngStream& rng);

// Exact expectation of every Pauli string over {I,X,Y,Z}^n.
std::map<std::string, double> exact_pauli_moments(const DensityMatrix& rho);

// Linear inversion from moments, then PSD projection (clip negative
// eigenvalues, renormalize the trace).
DensityMatrix reconstruct_from_moments(int n, const std::map<std::string, double>& moments);

// Moments are estimated from counts; a string containing I is marginalized
// from its lexicographically smallest covering setting (I -> X).
DensityMatrix reconstruct(const TomographyData& data);

// Fraction of Z-basis shots whose bitstring has even Hamming weight.
double parity_even_fraction(const Counts& counts_z);

// Even-parity fractions observed in the original trapped-ion hardware runs.
// Reference metadata for reports only, not reproduction targets (the noise
// model here is a simplified depolarizing + readout-flip stand-in).
struct HardwareParityReference {
    int n;          // 0 = aggregate over all runs
    double percent; // even-parity percentage observed on hardware
};
std::vector<HardwareParityReference> hardware_parity_reference();

struct BetaSweepResult {
    double beta_true = 0.0;
    std::vector<double> grid;
    std::vector<double> fidelities;
    double beta_star = 0.0;  // smallest grid beta attaining the max fidelity
    double delta_beta = 0.0; // beta_true - beta_star
};

// {1e-8} followed by 60 equally spaced points on [0.05, 6.0].
std::vector<double> default_sweep_grid();

// Fidelity of rho_exp against the exact Gibbs state at every grid beta.
BetaSweepResult beta_sweep(const DensityMatrix& rho_exp, const TFIMParams& params,
                           double beta_true, const std::vector<double>& grid);

struct DeltaBetaOptions {
    int restarts = 5;
    TrainOptions train;
    long tomography_shots = 1024;
    std::vector<double> grid; // empty -> default_sweep_grid()
};

// End-to-end digital-heating probe: for each beta, train under the profile,
// prepare, tomograph, reconstruct, and sweep. Returns (beta, delta_beta).
std::vector<std::pair<double, double>> delta_beta_curve(const NoiseProfile& profile,
                                                        const TFIMParams& params,
                                                        const std::vector<double>& betas,
                                                        const DeltaBetaOptions& options,
                                                        std::uint64_t seed);

} // namespace gsp
