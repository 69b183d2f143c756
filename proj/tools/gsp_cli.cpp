// Command-line front end. Talks to the library exclusively through the
// C API in gsp.h; exit codes: 0 ok, 2 bad arguments, 3 runtime failure,
// 4 I/O failure.

#include "gsp.h"

#include "CLI11.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace {

int status_to_exit(gsp_status st) {
    switch (st) {
        case GSP_OK: return 0;
        case GSP_ERR_INVALID_ARGUMENT: return 2;
        case GSP_ERR_IO: return 4;
        default: return 3;
    }
}

int fail(gsp_status st) {
    std::fprintf(stderr, "error: %s\n", gsp_last_error());
    return status_to_exit(st);
}

// 17 significant digits, matching the library's file formats.
std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct TargetArgs {
    int n = 2;
    double h = 1.0;
    double beta = 1.0;
};

void add_target_args(CLI::App* cmd, TargetArgs& args) {
    cmd->add_option("--n", args.n, "number of spins (>= 2)")->required();
    cmd->add_option("--h", args.h, "transverse field strength")->required();
    cmd->add_option("--beta", args.beta, "inverse temperature")->required();
}

// --h is taken by the field strength, so help lives on --help alone.
CLI::App* add_subcommand(CLI::App& app, const std::string& name, const std::string& desc) {
    CLI::App* cmd = app.add_subcommand(name, desc);
    cmd->set_help_flag("--help", "print help");
    return cmd;
}

int cmd_exact_gibbs(const TargetArgs& t) {
    gsp_target* target = nullptr;
    if (gsp_status st = gsp_target_create(t.n, t.h, t.beta, &target)) return fail(st);
    const int64_t dim = gsp_target_dim(target);
    std::vector<double> eig(static_cast<std::size_t>(dim)), diag(static_cast<std::size_t>(dim));
    double z = 0.0;
    gsp_status st = gsp_target_eigenvalues(target, eig.data());
    if (!st) st = gsp_target_partition_function(target, &z);
    if (!st) st = gsp_target_gibbs_diagonal(target, diag.data());
    if (st) {
        gsp_target_destroy(target);
        return fail(st);
    }
    std::printf("n=%d h=%s beta=%s\n", t.n, g17(t.h).c_str(), g17(t.beta).c_str());
    std::printf("eigenvalues:");
    for (double e : eig) std::printf(" %s", g17(e).c_str());
    std::printf("\npartition_function: %s\n", g17(z).c_str());
    std::printf("gibbs_diagonal:");
    for (double d : diag) std::printf(" %s", g17(d).c_str());
    std::printf("\n");
    gsp_target_destroy(target);
    return 0;
}

int cmd_train(const TargetArgs& t, const std::string& profile, int restarts, int iterations,
              int la, int ls, bool select_by_cost, uint64_t seed, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    gsp_train_result* result = nullptr;
    if (gsp_status st = gsp_train(t.n, t.h, t.beta, profile.c_str(), la, ls, restarts, iterations,
                                  select_by_cost ? 0 : 1, seed, &result))
        return fail(st);

    double best_cost = 0.0;
    gsp_train_result_best_cost(result, &best_cost);
    const int64_t len = gsp_train_result_trace_length(result);
    std::vector<double> trace(static_cast<std::size_t>(len));
    gsp_train_result_cost_trace(result, trace.data());

    gsp_params* params = nullptr;
    gsp_status st = gsp_train_result_params(result, &params);
    const std::string params_path = (std::filesystem::path(out_dir) / "params.json").string();
    if (!st) st = gsp_params_save(params, params_path.c_str());
    if (st) {
        gsp_params_destroy(params);
        gsp_train_result_destroy(result);
        return fail(st);
    }

    const std::string trace_path = (std::filesystem::path(out_dir) / "cost_trace.csv").string();
    std::ofstream trace_file(trace_path);
    trace_file << "iteration,cost\n";
    for (std::size_t i = 0; i < trace.size(); ++i)
        trace_file << i << ',' << g17(trace[i]) << '\n';
    trace_file.close();

    gsp_state* state = nullptr;
    gsp_target* target = nullptr;
    double fidelity = -1.0;
    if (!gsp_prepare(params, profile.c_str(), &state) &&
        !gsp_target_create(t.n, t.h, t.beta, &target))
        gsp_state_fidelity(state, target, &fidelity);

    std::printf("best_cost: %s\n", g17(best_cost).c_str());
    std::printf("iterations: %d\n", gsp_train_result_iterations(result));
    if (fidelity >= 0.0) std::printf("fidelity_vs_exact: %s\n", g17(fidelity).c_str());
    std::printf("params: %s\n", params_path.c_str());
    std::printf("cost_trace: %s\n", trace_path.c_str());

    gsp_state_destroy(state);
    gsp_target_destroy(target);
    gsp_params_destroy(params);
    gsp_train_result_destroy(result);
    return 0;
}

int fail_and_free(gsp_status st, gsp_params* params) {
    gsp_params_destroy(params);
    return fail(st);
}

int load_params_with_profile(const std::string& params_path, std::string& profile,
                             gsp_params** params, double* h, double* beta) {
    if (gsp_status st = gsp_params_load(params_path.c_str(), params)) return fail(st);
    char prof_buf[128] = {0};
    if (gsp_params_meta(*params, h, beta, prof_buf, sizeof(prof_buf)) == GSP_OK) {
        if (profile.empty()) profile = prof_buf;
    }
    if (profile.empty()) profile = "noiseless";
    return 0;
}

int cmd_prepare(const std::string& params_path, std::string profile, bool feedforward,
                const std::string& out_dir) {
    gsp_params* params = nullptr;
    double h = 0.0, beta = 0.0;
    if (int rc = load_params_with_profile(params_path, profile, &params, &h, &beta)) return rc;

    std::filesystem::create_directories(out_dir);
    gsp_circuit* circuit = nullptr;
    gsp_status st = gsp_circuit_build(params, feedforward ? 1 : 0, &circuit);
    const std::string circuit_path = (std::filesystem::path(out_dir) / "circuit.txt").string();
    if (!st) st = gsp_circuit_save(circuit, circuit_path.c_str());

    gsp_state* state = nullptr;
    const std::string state_path = (std::filesystem::path(out_dir) / "rho_s.txt").string();
    if (!st) st = gsp_prepare(params, profile.c_str(), &state);
    if (!st) st = gsp_state_save(state, state_path.c_str());
    if (st) {
        gsp_circuit_destroy(circuit);
        gsp_state_destroy(state);
        return fail_and_free(st, params);
    }

    std::printf("profile: %s\n", profile.c_str());
    std::printf("circuit: %s (%" PRId64 " ops on %d qubits)\n", circuit_path.c_str(),
                gsp_circuit_num_ops(circuit), gsp_circuit_num_qubits(circuit));
    std::printf("state: %s\n", state_path.c_str());

    gsp_target* target = nullptr;
    int n = 0, la = 0, ls = 0;
    gsp_params_shape(params, &n, &la, &ls);
    if (beta > 0.0 && !gsp_target_create(n, h, beta, &target)) {
        double fidelity = 0.0;
        if (!gsp_state_fidelity(state, target, &fidelity))
            std::printf("fidelity_vs_exact: %s\n", g17(fidelity).c_str());
        gsp_target_destroy(target);
    }

    gsp_circuit_destroy(circuit);
    gsp_state_destroy(state);
    gsp_params_destroy(params);
    return 0;
}

int cmd_tomo(const std::string& params_path, std::string profile, int64_t shots, uint64_t seed,
             const std::string& out_dir) {
    gsp_params* params = nullptr;
    double h = 0.0, beta = 0.0;
    if (int rc = load_params_with_profile(params_path, profile, &params, &h, &beta)) return rc;

    std::filesystem::create_directories(out_dir);
    gsp_state* reconstructed = nullptr;
    double parity = 0.0;
    gsp_status st = gsp_tomography(params, profile.c_str(), shots, seed, out_dir.c_str(),
                                   &reconstructed, &parity);
    const std::string rec_path =
        (std::filesystem::path(out_dir) / "rho_reconstructed.txt").string();
    if (!st) st = gsp_state_save(reconstructed, rec_path.c_str());
    if (st) {
        gsp_state_destroy(reconstructed);
        return fail_and_free(st, params);
    }

    std::printf("profile: %s\n", profile.c_str());
    std::printf("reconstructed: %s\n", rec_path.c_str());
    std::printf("even_parity_fraction: %s\n", g17(parity).c_str());

    int n = 0, la = 0, ls = 0;
    gsp_params_shape(params, &n, &la, &ls);
    gsp_target* target = nullptr;
    if (beta > 0.0 && !gsp_target_create(n, h, beta, &target)) {
        double fidelity = 0.0;
        if (!gsp_state_fidelity(reconstructed, target, &fidelity))
            std::printf("fidelity_vs_exact: %s\n", g17(fidelity).c_str());
        gsp_target_destroy(target);
    }

    gsp_state_destroy(reconstructed);
    gsp_params_destroy(params);
    return 0;
}

int cmd_beta_sweep(const std::string& state_path, double h, double beta_true,
                   const std::vector<double>& grid, const std::string& out_path) {
    gsp_state* state = nullptr;
    if (gsp_status st = gsp_state_load(state_path.c_str(), &state)) return fail(st);

    std::vector<double> g = grid;
    if (g.empty()) {
        g.resize(static_cast<std::size_t>(gsp_default_sweep_grid_length()));
        gsp_default_sweep_grid(g.data());
    }
    std::vector<double> fidelities(g.size());
    double beta_star = 0.0, delta_beta = 0.0;
    if (gsp_status st = gsp_beta_sweep(state, h, beta_true, g.data(),
                                       static_cast<int64_t>(g.size()), fidelities.data(),
                                       &beta_star, &delta_beta)) {
        gsp_state_destroy(state);
        return fail(st);
    }

    std::ofstream out(out_path);
    if (!out) {
        std::fprintf(stderr, "error: cannot write '%s'\n", out_path.c_str());
        gsp_state_destroy(state);
        return 4;
    }
    out << "beta,fidelity\n";
    for (std::size_t i = 0; i < g.size(); ++i)
        out << g17(g[i]) << ',' << g17(fidelities[i]) << '\n';
    out << "# beta_true=" << g17(beta_true) << " beta_star=" << g17(beta_star)
        << " delta_beta=" << g17(delta_beta) << '\n';
    out.close();

    std::printf("beta_star: %s\n", g17(beta_star).c_str());
    std::printf("delta_beta: %s\n", g17(delta_beta).c_str());
    std::printf("sweep: %s\n", out_path.c_str());
    gsp_state_destroy(state);
    return 0;
}

int cmd_gate_count(const std::string& circuit_path, const std::string& gateset,
                   const std::string& lowered_path, bool check) {
    gsp_circuit* circuit = nullptr;
    if (gsp_status st = gsp_circuit_load(circuit_path.c_str(), &circuit)) return fail(st);

    int64_t one_q = 0, two_q = 0, virt = 0;
    if (gsp_status st = gsp_circuit_gate_counts(circuit, gateset.c_str(), &one_q, &two_q, &virt)) {
        gsp_circuit_destroy(circuit);
        return fail(st);
    }
    std::printf("category,count\n");
    std::printf("one_qubit,%" PRId64 "\n", one_q);
    std::printf("two_qubit,%" PRId64 "\n", two_q);
    std::printf("virtual_z,%" PRId64 "\n", virt);

    if (!lowered_path.empty()) {
        if (gsp_status st =
                gsp_circuit_lower_to_file(circuit, gateset.c_str(), lowered_path.c_str())) {
            gsp_circuit_destroy(circuit);
            return fail(st);
        }
        std::printf("lowered,%s\n", lowered_path.c_str());
    }
    if (check) {
        double distance = 0.0;
        if (gsp_status st = gsp_circuit_lowering_distance(circuit, gateset.c_str(), &distance)) {
            gsp_circuit_destroy(circuit);
            return fail(st);
        }
        std::printf("equivalence_distance,%s\n", g17(distance).c_str());
    }
    gsp_circuit_destroy(circuit);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variational Gibbs state preparation for the periodic TFIM"};
    app.require_subcommand(1);

    // global flags shared by the subcommands
    std::string config_path, out_path, profile;
    uint64_t seed = 1;
    bool seed_given = false;
    int workers = 1;
    app.add_option("--config", config_path, "experiment config file");
    app.add_option("--seed", seed, "RNG seed / master seed override")
        ->each([&](const std::string&) { seed_given = true; });
    app.add_option("--out", out_path, "output directory or file");
    app.add_option("--workers", workers, "concurrent grid workers");
    app.add_option("--profile", profile, "noise profile name");
    app.fallthrough();

    TargetArgs target;
    auto* exact =
        add_subcommand(app, "exact-gibbs", "print the exact spectrum, Z and Gibbs diagonal");
    add_target_args(exact, target);

    TargetArgs train_target;
    int restarts = 10, iterations = 100, la = 1, ls = 1;
    bool select_by_cost = false;
    auto* train_cmd = add_subcommand(app, "train", "train the variational parameters");
    add_target_args(train_cmd, train_target);
    train_cmd->add_option("--restarts", restarts, "independent SPSA restarts");
    train_cmd->add_option("--iterations", iterations, "SPSA iterations per restart");
    train_cmd->add_option("--ancilla-layers", la, "ancilla layers");
    train_cmd->add_option("--system-layers", ls, "system layers");
    train_cmd->add_flag("--select-by-cost", select_by_cost,
                        "pick the restart with the lowest cost instead of best fidelity");

    std::string params_path;
    bool feedforward = false;
    auto* prepare_cmd = add_subcommand(app, "prepare", "build and execute the final circuit");
    prepare_cmd->add_option("--params", params_path, "trained parameter file")->required();
    prepare_cmd->add_flag("--feedforward", feedforward, "use the measure-and-feedforward variant");

    std::string tomo_params;
    int64_t tomo_shots = 1024;
    auto* tomo_cmd =
        add_subcommand(app, "tomo", "state tomography of the prepared system register");
    tomo_cmd->add_option("--params", tomo_params, "trained parameter file")->required();
    tomo_cmd->add_option("--shots", tomo_shots, "shots per tomography setting");

    std::string state_path;
    double sweep_h = 1.0, beta_true = 1.0;
    std::vector<double> grid;
    auto* sweep_cmd =
        add_subcommand(app, "beta-sweep", "fidelity against exact Gibbs states on a beta grid");
    sweep_cmd->add_option("--state", state_path, "density matrix file")->required();
    sweep_cmd->add_option("--h", sweep_h, "transverse field strength")->required();
    sweep_cmd->add_option("--beta-true", beta_true, "the beta the state was prepared for")
        ->required();
    sweep_cmd->add_option("--grid", grid, "explicit beta grid (default: built-in 61-point grid)");

    std::string circuit_path, gateset = "ms", lowered_path;
    bool check_equiv = false;
    auto* count_cmd = add_subcommand(app, "gate-count", "lower a circuit and count native gates");
    count_cmd->add_option("--circuit", circuit_path, "abstract circuit file")->required();
    count_cmd->add_option("--gateset", gateset, "native set: ms or zz");
    count_cmd->add_option("--lowered", lowered_path, "write the lowered circuit here");
    count_cmd->add_flag("--check", check_equiv, "verify unitary equivalence of the lowering");

    auto* run_cmd = add_subcommand(app, "run", "run the full experiment grid from a config file");
    auto* report_cmd =
        add_subcommand(app, "report", "write results.csv and plot data from records");
    std::string records_dir;
    report_cmd->add_option("--records", records_dir, "directory with record files")->required();

    CLI11_PARSE(app, argc, argv);

    if (exact->parsed()) return cmd_exact_gibbs(target);
    if (train_cmd->parsed()) {
        if (out_path.empty()) out_path = ".";
        return cmd_train(train_target, profile.empty() ? "noiseless" : profile, restarts,
                         iterations, la, ls, select_by_cost, seed, out_path);
    }
    if (prepare_cmd->parsed()) {
        if (out_path.empty()) out_path = ".";
        return cmd_prepare(params_path, profile, feedforward, out_path);
    }
    if (tomo_cmd->parsed()) {
        if (out_path.empty()) out_path = ".";
        return cmd_tomo(tomo_params, profile, tomo_shots, seed, out_path);
    }
    if (sweep_cmd->parsed())
        return cmd_beta_sweep(state_path, sweep_h, beta_true, grid,
                              out_path.empty() ? "sweep.csv" : out_path);
    if (count_cmd->parsed())
        return cmd_gate_count(circuit_path, gateset, lowered_path, check_equiv);
    if (run_cmd->parsed()) {
        if (config_path.empty()) {
            std::fprintf(stderr, "error: run requires --config\n");
            return 2;
        }
        int64_t num_records = 0;
        if (gsp_status st = gsp_run_grid(config_path.c_str(),
                                         out_path.empty() ? nullptr : out_path.c_str(), workers,
                                         seed_given ? 1 : 0, seed, &num_records))
            return fail(st);
        std::printf("records: %" PRId64 "\n", num_records);
        return 0;
    }
    if (report_cmd->parsed()) {
        if (out_path.empty()) out_path = records_dir;
        if (gsp_status st = gsp_report(records_dir.c_str(), out_path.c_str())) return fail(st);
        std::printf("report: %s\n", out_path.c_str());
        return 0;
    }
    return 2;
}
