#include "gsp/vqa.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

namespace gsp {

namespace {

// Mean of (-1)^bit over a histogram, per qubit position.
std::vector<double> bit_expectations(const Counts& counts, int width) {
    std::vector<double> acc(static_cast<std::size_t>(width), 0.0);
    for (const auto& [bits, count] : counts.histogram)
        for (int q = 0; q < width; ++q)
            acc[static_cast<std::size_t>(q)] +=
                (bits[static_cast<std::size_t>(q)] == '0' ? 1.0 : -1.0) * static_cast<double>(count);
    for (auto& v : acc) v /= static_cast<double>(counts.shots);
    return acc;
}

} // namespace

double estimate_energy(const Counts& counts_x, const Counts& counts_z, const TFIMParams& p) {
    if (counts_x.basis != Basis::X || counts_z.basis != Basis::Z)
        throw std::invalid_argument("estimate_energy: basis mismatch");
    if (counts_x.width() != p.n || counts_z.width() != p.n)
        throw std::invalid_argument("estimate_energy: register width mismatch");
    if (counts_x.shots <= 0 || counts_z.shots <= 0)
        throw std::invalid_argument("estimate_energy: zero shots");

    // <sx_i sx_{i+1}> from X-basis pair parities, cyclic.
    std::vector<double> xx(static_cast<std::size_t>(p.n), 0.0);
    for (const auto& [bits, count] : counts_x.histogram) {
        for (int i = 0; i < p.n; ++i) {
            const int j = (i + 1) % p.n;
            const double vi = bits[static_cast<std::size_t>(i)] == '0' ? 1.0 : -1.0;
            const double vj = bits[static_cast<std::size_t>(j)] == '0' ? 1.0 : -1.0;
            xx[static_cast<std::size_t>(i)] += vi * vj * static_cast<double>(count);
        }
    }
    double energy = 0.0;
    for (int i = 0; i < p.n; ++i)
        energy += -0.5 * xx[static_cast<std::size_t>(i)] / static_cast<double>(counts_x.shots);
    for (double z : bit_expectations(counts_z, p.n)) energy += -p.h * z;
    return energy;
}

double estimate_entropy(const Counts& counts_z_ancilla) {
    if (counts_z_ancilla.shots <= 0) throw std::invalid_argument("estimate_entropy: zero shots");
    std::vector<double> freq;
    freq.reserve(counts_z_ancilla.histogram.size());
    for (const auto& [bits, count] : counts_z_ancilla.histogram)
        freq.push_back(static_cast<double>(count) / static_cast<double>(counts_z_ancilla.shots));
    return shannon_entropy(freq);
}

DensityMatrix prepare_system_state(const ParamSet& params, const NoiseProfile& noise) {
    const Circuit c = build_gsp_circuit(params);
    return reduced_system_state(run_density(c, noise), c.num_ancilla);
}

CostBreakdown evaluate_cost_shots(const ParamSet& params, const GibbsTarget& target,
                                  const NoiseProfile& noise, const ShotsPlan& plan,
                                  std::uint64_t seed) {
    if (target.beta <= 0.0) throw std::invalid_argument("evaluate_cost: beta must be > 0");
    const Circuit c = build_gsp_circuit(params);
    const DensityMatrix rho = run_density(c, noise);

    RngStream rng_x(RngStream::derive(seed, 1));
    RngStream rng_z(RngStream::derive(seed, 2));
    RngStream rng_a(RngStream::derive(seed, 3));
    const Counts cx = sample_counts(rho, c.num_ancilla, Basis::X, Register::System, plan.system_x,
                                    noise.p_spam, rng_x);
    const Counts cz = sample_counts(rho, c.num_ancilla, Basis::Z, Register::System, plan.system_z,
                                    noise.p_spam, rng_z);
    const Counts ca = sample_counts(rho, c.num_ancilla, Basis::Z, Register::Ancilla, plan.ancilla_z,
                                    noise.p_spam, rng_a);

    CostBreakdown out;
    out.beta = target.beta;
    out.energy = estimate_energy(cx, cz, target.params);
    out.entropy = estimate_entropy(ca);
    out.cost = out.energy - out.entropy / out.beta;
    return out;
}

CostBreakdown evaluate_cost_exact(const ParamSet& params, const GibbsTarget& target,
                                  const NoiseProfile& noise) {
    if (target.beta <= 0.0) throw std::invalid_argument("evaluate_cost: beta must be > 0");
    const Circuit c = build_gsp_circuit(params);
    const DensityMatrix rho = run_density(c, noise);
    const DensityMatrix rho_s = reduced_system_state(rho, c.num_ancilla);
    const DensityMatrix rho_a = reduced_ancilla_state(rho, c.num_ancilla);

    CostBreakdown out;
    out.beta = target.beta;
    out.energy = (target.hamiltonian.mat * rho_s.mat).trace().real();
    out.entropy = shannon_entropy(z_probabilities(rho_a));
    out.cost = out.energy - out.entropy / out.beta;
    return out;
}

namespace {

std::vector<double> flatten(const ParamSet& p) {
    std::vector<double> x(p.theta);
    x.insert(x.end(), p.phi.begin(), p.phi.end());
    return x;
}

ParamSet unflatten(const ParamSet& shape, const std::vector<double>& x) {
    ParamSet p = shape;
    std::copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(shape.theta.size()),
              p.theta.begin());
    std::copy(x.begin() + static_cast<std::ptrdiff_t>(shape.theta.size()), x.end(), p.phi.begin());
    return p;
}

} // namespace

OptResult spsa_minimize(const std::function<double(const ParamSet&)>& objective,
                        const ParamSet& init, int max_iter, const SpsaGains& gains,
                        std::uint64_t seed) {
    init.check_valid();
    if (max_iter < 1) throw std::invalid_argument("spsa_minimize: max_iter must be >= 1");
    RngStream rng(RngStream::derive(seed, 0x5053415au)); // perturbation stream

    const std::size_t d = init.theta.size() + init.phi.size();
    std::vector<double> x = flatten(init);

    auto eval = [&](const std::vector<double>& v) {
        const double f = objective(unflatten(init, v));
        if (!std::isfinite(f))
            throw std::runtime_error("spsa_minimize: objective returned a non-finite value");
        return f;
    };

    // Calibrate `a`: estimate the typical gradient magnitude at x0 and set
    // the first step a_0 * |g| to gains.first_step in infinity norm.
    double gmag = 0.0;
    for (int probe = 0; probe < gains.calibration_probes; ++probe) {
        std::vector<double> delta(d);
        for (auto& s : delta) s = static_cast<double>(rng.rademacher());
        std::vector<double> xp = x, xm = x;
        for (std::size_t i = 0; i < d; ++i) {
            xp[i] += gains.c * delta[i];
            xm[i] -= gains.c * delta[i];
        }
        gmag += std::abs(eval(xp) - eval(xm)) / (2.0 * gains.c);
    }
    gmag /= std::max(1, gains.calibration_probes);
    const double a = (gmag > 1e-30)
                         ? gains.first_step * std::pow(1.0 + gains.stability, gains.alpha) / gmag
                         : gains.first_step;

    OptResult result;
    result.seed = seed;
    result.cost_trace.reserve(static_cast<std::size_t>(max_iter) + 1);
    result.cost_trace.push_back(eval(x));
    result.best_cost = result.cost_trace[0];
    std::vector<double> best_x = x;

    for (int k = 0; k < max_iter; ++k) {
        const double ak = a / std::pow(k + 1.0 + gains.stability, gains.alpha);
        const double ck = gains.c / std::pow(k + 1.0, gains.gamma);
        std::vector<double> delta(d);
        for (auto& s : delta) s = static_cast<double>(rng.rademacher());
        std::vector<double> xp = x, xm = x;
        for (std::size_t i = 0; i < d; ++i) {
            xp[i] += ck * delta[i];
            xm[i] -= ck * delta[i];
        }
        const double diff = eval(xp) - eval(xm);
        for (std::size_t i = 0; i < d; ++i) x[i] -= ak * diff / (2.0 * ck * delta[i]);

        const double fx = eval(x);
        result.cost_trace.push_back(fx);
        if (fx < result.best_cost) {
            result.best_cost = fx;
            best_x = x;
        }
    }
    result.iterations = max_iter;
    result.best_params = unflatten(init, best_x);
    return result;
}

OptResult train(const GibbsTarget& target, const NoiseProfile& noise, int restarts,
                std::uint64_t seed, const TrainOptions& options) {
    if (restarts < 1) throw std::invalid_argument("train: restarts must be >= 1");

    const DensityMatrix gibbs = exact_gibbs(target);

    auto run_restart = [&](int r) {
        const std::uint64_t rseed = RngStream::derive(seed, static_cast<std::uint64_t>(r));
        ParamSet init = param_init(target.params.n, options.ancilla_layers, options.system_layers,
                                   RngStream::derive(rseed, 0));
        // Fresh shot noise for every objective evaluation, like hardware.
        std::uint64_t eval_counter = 0;
        auto objective = [&, rseed](const ParamSet& p) mutable {
            return evaluate_cost_shots(p, target, noise, options.shots,
                                       RngStream::derive(rseed, 1, eval_counter++))
                .cost;
        };
        OptResult res = spsa_minimize(objective, init, options.max_iterations, options.gains, rseed);
        return res;
    };

    std::vector<OptResult> results(static_cast<std::size_t>(restarts));
    if (options.workers > 1 && restarts > 1) {
        // Bounded fan-out: launch up to `workers` restarts at a time.
        int next = 0;
        while (next < restarts) {
            const int batch = std::min(options.workers, restarts - next);
            std::vector<std::future<OptResult>> futures;
            futures.reserve(static_cast<std::size_t>(batch));
            for (int i = 0; i < batch; ++i)
                futures.push_back(std::async(std::launch::async, run_restart, next + i));
            for (int i = 0; i < batch; ++i)
                results[static_cast<std::size_t>(next + i)] = futures[static_cast<std::size_t>(i)].get();
            next += batch;
        }
    } else {
        for (int r = 0; r < restarts; ++r) results[static_cast<std::size_t>(r)] = run_restart(r);
    }

    std::size_t best = 0;
    if (options.select_by == SelectBy::Fidelity) {
        double best_f = -1.0;
        for (std::size_t r = 0; r < results.size(); ++r) {
            const DensityMatrix rho = prepare_system_state(results[r].best_params, noise);
            const double f = uhlmann_fidelity(rho, gibbs);
            if (f > best_f) {
                best_f = f;
                best = r;
            }
        }
    } else {
        for (std::size_t r = 1; r < results.size(); ++r)
            if (results[r].best_cost < results[best].best_cost) best = r;
    }
    return results[best];
}

} // namespace gsp
