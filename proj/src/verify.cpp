#include "gsp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gsp {

namespace {

// Rotation taking the +1/-1 eigenstates of the named Pauli to |0>/|1>.
Mat basis_rotation(char pauli) {
    switch (pauli) {
        case 'Z': return pauli_i();
        case 'X': return hadamard();
        case 'Y': {
            // H * S^dagger maps the sigma_y eigenbasis onto the Z basis.
            Mat sdg(2, 2);
            sdg << 1, 0, 0, cplx(0, -1);
            return hadamard() * sdg;
        }
        default: throw std::invalid_argument("basis_rotation: bad Pauli letter");
    }
}

Mat pauli_matrix(char p) {
    switch (p) {
        case 'I': return pauli_i();
        case 'X': return pauli_x();
        case 'Y': return pauli_y();
        case 'Z': return pauli_z();
        default: throw std::invalid_argument("pauli_matrix: bad letter");
    }
}

Mat pauli_string_matrix(const std::string& s) {
    Mat out = pauli_matrix(s[0]);
    for (std::size_t i = 1; i < s.size(); ++i) out = kron(out, pauli_matrix(s[i]));
    return out;
}

void enumerate_strings(int n, const std::string& alphabet, std::string& prefix,
                       std::vector<std::string>& out) {
    if (static_cast<int>(prefix.size()) == n) {
        out.push_back(prefix);
        return;
    }
    for (char ch : alphabet) {
        prefix.push_back(ch);
        enumerate_strings(n, alphabet, prefix, out);
        prefix.pop_back();
    }
}

} // namespace

std::vector<std::string> tomography_settings(int n) {
    std::vector<std::string> out;
    std::string prefix;
    enumerate_strings(n, "XYZ", prefix, out);
    return out;
}

void TomographyData::check_complete() const {
    const auto expected = tomography_settings(n);
    if (settings.size() != expected.size())
        throw std::invalid_argument("tomography data: wrong number of settings");
    for (const auto& s : expected) {
        const auto it = settings.find(s);
        if (it == settings.end())
            throw std::invalid_argument("tomography data: missing setting " + s);
        if (it->second.shots != shots_per_setting)
            throw std::invalid_argument("tomography data: uneven shot budgets");
    }
    if (shots_per_setting <= 0) throw std::invalid_argument("tomography data: zero shots");
}

TomographyData tomography_collect(const DensityMatrix& rho, long shots_per_setting, double p_spam,
                                  RngStream& rng) {
    if (shots_per_setting <= 0)
        throw std::invalid_argument("tomography_collect: shots must be > 0");
    TomographyData data;
    data.n = rho.num_qubits;
    data.shots_per_setting = shots_per_setting;
    std::uint64_t setting_index = 0;
    for (const auto& setting : tomography_settings(rho.num_qubits)) {
        DensityMatrix rotated = rho;
        for (int q = 0; q < rho.num_qubits; ++q) {
            const Mat r = basis_rotation(setting[static_cast<std::size_t>(q)]);
            if (setting[static_cast<std::size_t>(q)] != 'Z')
                apply_gate_density(rotated.mat, r, {q}, rho.num_qubits);
        }
        RngStream setting_rng = rng.split(setting_index++);
        data.settings[setting] = sample_state(rotated, Basis::Z, Register::System,
                                              shots_per_setting, p_spam, setting_rng);
    }
    return data;
}

std::map<std::string, double> exact_pauli_moments(const DensityMatrix& rho) {
    std::map<std::string, double> out;
    std::vector<std::string> strings;
    std::string prefix;
    enumerate_strings(rho.num_qubits, "IXYZ", prefix, strings);
    for (const auto& s : strings)
        out[s] = (pauli_string_matrix(s) * rho.mat).trace().real();
    return out;
}

DensityMatrix reconstruct_from_moments(int n, const std::map<std::string, double>& moments) {
    const std::size_t dim = dim_of(n);
    Mat acc = Mat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    std::vector<std::string> strings;
    std::string prefix;
    enumerate_strings(n, "IXYZ", prefix, strings);
    for (const auto& s : strings) {
        const auto it = moments.find(s);
        if (it == moments.end())
            throw std::invalid_argument("reconstruct_from_moments: missing moment " + s);
        acc += it->second * pauli_string_matrix(s);
    }
    acc /= static_cast<double>(dim);

    // PSD projection: clip negative eigenvalues, renormalize the trace.
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (acc + Mat(acc.adjoint())));
    RVec lam = es.eigenvalues().cwiseMax(0.0);
    const double total = lam.sum();
    if (total <= 0.0) throw std::runtime_error("reconstruct: projection produced the zero matrix");
    lam /= total;

    DensityMatrix rho;
    rho.num_qubits = n;
    rho.mat = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
    rho.mat = 0.5 * (rho.mat + Mat(rho.mat.adjoint()));
    return rho;
}

namespace {

// Estimate <P> for a Pauli string from the counts of a covering setting:
// average the product of (-1)^bit over the qubits in P's support.
double moment_from_counts(const std::string& pauli, const Counts& counts) {
    double acc = 0.0;
    for (const auto& [bits, count] : counts.histogram) {
        double v = 1.0;
        for (std::size_t q = 0; q < pauli.size(); ++q)
            if (pauli[q] != 'I') v *= (bits[q] == '0') ? 1.0 : -1.0;
        acc += v * static_cast<double>(count);
    }
    return acc / static_cast<double>(counts.shots);
}

} // namespace

DensityMatrix reconstruct(const TomographyData& data) {
    data.check_complete();
    std::map<std::string, double> moments;
    std::vector<std::string> strings;
    std::string prefix;
    enumerate_strings(data.n, "IXYZ", prefix, strings);
    for (const auto& s : strings) {
        if (s.find_first_not_of('I') == std::string::npos) {
            moments[s] = 1.0;
            continue;
        }
        // Lexicographically smallest covering setting: I -> X.
        std::string setting = s;
        std::replace(setting.begin(), setting.end(), 'I', 'X');
        moments[s] = moment_from_counts(s, data.settings.at(setting));
    }
    return reconstruct_from_moments(data.n, moments);
}

double parity_even_fraction(const Counts& counts_z) {
    if (counts_z.shots <= 0) throw std::invalid_argument("parity_even_fraction: zero shots");
    long even = 0;
    for (const auto& [bits, count] : counts_z.histogram) {
        const auto weight = std::count(bits.begin(), bits.end(), '1');
        if (weight % 2 == 0) even += count;
    }
    return static_cast<double>(even) / static_cast<double>(counts_z.shots);
}

std::vector<HardwareParityReference> hardware_parity_reference() {
    return {{0, 91.30}, {2, 95.89}, {3, 88.48}, {4, 87.35}};
}

std::vector<double> default_sweep_grid() {
    std::vector<double> grid;
    grid.push_back(1e-8);
    const int k = 60;
    const double lo = 0.05, hi = 6.0;
    for (int i = 0; i < k; ++i)
        grid.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(k - 1));
    return grid;
}

BetaSweepResult beta_sweep(const DensityMatrix& rho_exp, const TFIMParams& params,
                           double beta_true, const std::vector<double>& grid) {
    if (grid.empty()) throw std::invalid_argument("beta_sweep: empty grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 0.0) throw std::invalid_argument("beta_sweep: negative beta in grid");
        if (i > 0 && grid[i] <= grid[i - 1])
            throw std::invalid_argument("beta_sweep: grid must be strictly increasing");
    }

    BetaSweepResult out;
    out.beta_true = beta_true;
    out.grid = grid;
    out.fidelities.reserve(grid.size());
    // The spectrum does not depend on beta; diagonalize once.
    GibbsTarget base = GibbsTarget::make(params, grid[0]);
    for (double b : grid) {
        base.beta = b;
        out.fidelities.push_back(uhlmann_fidelity(rho_exp, exact_gibbs(base)));
    }
    // Ties resolve to the smallest beta attaining the maximum (within 1e-12).
    const double fmax = *std::max_element(out.fidelities.begin(), out.fidelities.end());
    std::size_t star = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (out.fidelities[i] >= fmax - 1e-12) {
            star = i;
            break;
        }
    }
    out.beta_star = grid[star];
    out.delta_beta = beta_true - out.beta_star;
    return out;
}

std::vector<std::pair<double, double>> delta_beta_curve(const NoiseProfile& profile,
                                                        const TFIMParams& params,
                                                        const std::vector<double>& betas,
                                                        const DeltaBetaOptions& options,
                                                        std::uint64_t seed) {
    std::vector<std::pair<double, double>> out;
    const std::vector<double> grid = options.grid.empty() ? default_sweep_grid() : options.grid;
    for (double beta : betas) {
        if (beta <= 0.0) throw std::invalid_argument("delta_beta_curve: beta must be > 0");
        const GibbsTarget target = GibbsTarget::make(params, beta);
        const std::uint64_t point_seed =
            RngStream::derive(seed, RngStream::encode_double(beta), static_cast<std::uint64_t>(params.n));
        const OptResult trained =
            train(target, profile, options.restarts, point_seed, options.train);
        const DensityMatrix rho = prepare_system_state(trained.best_params, profile);
        RngStream tomo_rng(RngStream::derive(point_seed, 0x746f6d6fULL));
        const TomographyData data =
            tomography_collect(rho, options.tomography_shots, profile.p_spam, tomo_rng);
        const DensityMatrix reconstructed = reconstruct(data);
        const BetaSweepResult sweep = beta_sweep(reconstructed, params, beta, grid);
        out.emplace_back(beta, sweep.delta_beta);
    }
    return out;
}

} // namespace gsp
