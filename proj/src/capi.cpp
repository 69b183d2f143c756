#include "gsp.h"

#include "gsp/runner.hpp"
#include "gsp/transpile.hpp"
#include "gsp/verify.hpp"
#include "gsp/vqa.hpp"

#include "json.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename F>
gsp_status guard(F&& fn) {
    try {
        fn();
        return GSP_OK;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return GSP_ERR_INVALID_ARGUMENT;
    } catch (const std::ios_base::failure& e) {
        set_error(e.what());
        return GSP_ERR_IO;
    } catch (const fs::filesystem_error& e) {
        set_error(e.what());
        return GSP_ERR_IO;
    } catch (const std::exception& e) {
        set_error(e.what());
        // File-path failures in this library surface as runtime_errors whose
        // message mentions the path; classify those as I/O.
        const std::string what = e.what();
        if (what.find("cannot open") != std::string::npos ||
            what.find("cannot write") != std::string::npos ||
            what.find("short write") != std::string::npos)
            return GSP_ERR_IO;
        return GSP_ERR_RUNTIME;
    }
}

gsp_status require(bool cond, const char* msg) {
    if (cond) return GSP_OK;
    set_error(msg);
    return GSP_ERR_INVALID_ARGUMENT;
}

gsp_status copy_string(const std::string& s, char* buf, size_t bufsize) {
    if (buf == nullptr || bufsize == 0) {
        set_error("output buffer is null or empty");
        return GSP_ERR_INVALID_ARGUMENT;
    }
    if (s.size() + 1 > bufsize) {
        set_error("output buffer too small");
        return GSP_ERR_INVALID_ARGUMENT;
    }
    std::memcpy(buf, s.c_str(), s.size() + 1);
    return GSP_OK;
}

} // namespace

// Handle definitions. gsp_params keeps the training provenance around so a
// saved parameter file is enough to rebuild its target and profile.
struct gsp_target {
    gsp::GibbsTarget t;
};

struct gsp_params {
    gsp::ParamSet p;
    double h = 0.0;
    double beta = 0.0;
    std::string profile; // empty when untrained
    bool has_meta = false;
};

struct gsp_train_result {
    gsp::OptResult r;
    double h = 0.0;
    double beta = 0.0;
    std::string profile;
};

struct gsp_circuit {
    gsp::Circuit c;
};

struct gsp_state {
    gsp::DensityMatrix rho;
};

extern "C" {

const char* gsp_version(void) { return "1.0.0"; }

const char* gsp_last_error(void) { return g_last_error.c_str(); }

/* ---- profiles ---------------------------------------------------------- */

int gsp_profile_count(void) { return static_cast<int>(gsp::builtin_profiles().size()); }

gsp_status gsp_profile_name(int index, char* buf, size_t bufsize) {
    const auto profiles = gsp::builtin_profiles();
    if (auto st = require(index >= 0 && index < static_cast<int>(profiles.size()),
                          "profile index out of range"))
        return st;
    return copy_string(profiles[static_cast<std::size_t>(index)].name, buf, bufsize);
}

gsp_status gsp_profile_params(const char* name, double* p1, double* p2, double* p_spam) {
    if (auto st = require(name && p1 && p2 && p_spam, "null argument")) return st;
    return guard([&] {
        const gsp::NoiseProfile prof = gsp::find_profile(name);
        *p1 = prof.p1;
        *p2 = prof.p2;
        *p_spam = prof.p_spam;
    });
}

/* ---- target ------------------------------------------------------------ */

gsp_status gsp_target_create(int n, double h, double beta, gsp_target** out) {
    if (auto st = require(out != nullptr, "null output handle")) return st;
    *out = nullptr;
    return guard([&] { *out = new gsp_target{gsp::GibbsTarget::make({n, h}, beta)}; });
}

void gsp_target_destroy(gsp_target* t) { delete t; }

int64_t gsp_target_dim(const gsp_target* t) {
    return t ? static_cast<int64_t>(gsp::dim_of(t->t.params.n)) : 0;
}

gsp_status gsp_target_eigenvalues(const gsp_target* t, double* out) {
    if (auto st = require(t && out, "null argument")) return st;
    for (Eigen::Index i = 0; i < t->t.spectrum.eigenvalues.size(); ++i)
        out[i] = t->t.spectrum.eigenvalues(i);
    return GSP_OK;
}

gsp_status gsp_target_partition_function(const gsp_target* t, double* out) {
    if (auto st = require(t && out, "null argument")) return st;
    return guard([&] { *out = gsp::partition_function(t->t); });
}

gsp_status gsp_target_gibbs_diagonal(const gsp_target* t, double* out) {
    if (auto st = require(t && out, "null argument")) return st;
    return guard([&] {
        const gsp::DensityMatrix rho = gsp::exact_gibbs(t->t);
        for (Eigen::Index i = 0; i < rho.mat.rows(); ++i) out[i] = rho.mat(i, i).real();
    });
}

/* ---- params ------------------------------------------------------------ */

gsp_status gsp_params_random(int n, int ancilla_layers, int system_layers, uint64_t seed,
                             gsp_params** out) {
    if (auto st = require(out != nullptr, "null output handle")) return st;
    *out = nullptr;
    return guard([&] {
        auto* h = new gsp_params;
        h->p = gsp::param_init(n, ancilla_layers, system_layers, seed);
        *out = h;
    });
}

void gsp_params_destroy(gsp_params* p) { delete p; }

gsp_status gsp_params_shape(const gsp_params* p, int* n, int* ancilla_layers, int* system_layers) {
    if (auto st = require(p != nullptr, "null handle")) return st;
    if (n) *n = p->p.n;
    if (ancilla_layers) *ancilla_layers = p->p.ancilla_layers;
    if (system_layers) *system_layers = p->p.system_layers;
    return GSP_OK;
}

gsp_status gsp_params_meta(const gsp_params* p, double* h, double* beta, char* profile_buf,
                           size_t bufsize) {
    if (auto st = require(p != nullptr, "null handle")) return st;
    if (auto st = require(p->has_meta, "parameters carry no training metadata")) return st;
    if (h) *h = p->h;
    if (beta) *beta = p->beta;
    if (profile_buf) return copy_string(p->profile, profile_buf, bufsize);
    return GSP_OK;
}

gsp_status gsp_params_save(const gsp_params* p, const char* path) {
    if (auto st = require(p && path, "null argument")) return st;
    return guard([&] {
        json j;
        j["n"] = p->p.n;
        j["ancilla_layers"] = p->p.ancilla_layers;
        j["system_layers"] = p->p.system_layers;
        j["theta"] = p->p.theta;
        j["phi"] = p->p.phi;
        if (p->has_meta) {
            j["h"] = p->h;
            j["beta"] = p->beta;
            j["profile"] = p->profile;
        }
        gsp::atomic_write_file(path, j.dump(2) + "\n");
    });
}

gsp_status gsp_params_load(const char* path, gsp_params** out) {
    if (auto st = require(path && out, "null argument")) return st;
    *out = nullptr;
    return guard([&] {
        std::ifstream in(path);
        if (!in) throw std::runtime_error(std::string("cannot open '") + path + "'");
        const json j = json::parse(in);
        auto* h = new gsp_params;
        h->p.n = j.at("n").get<int>();
        h->p.ancilla_layers = j.at("ancilla_layers").get<int>();
        h->p.system_layers = j.at("system_layers").get<int>();
        h->p.theta = j.at("theta").get<std::vector<double>>();
        h->p.phi = j.at("phi").get<std::vector<double>>();
        if (j.contains("h")) {
            h->h = j.at("h").get<double>();
            h->beta = j.at("beta").get<double>();
            h->profile = j.at("profile").get<std::string>();
            h->has_meta = true;
        }
        h->p.check_valid();
        *out = h;
    });
}

/* ---- training ---------------------------------------------------------- */

gsp_status gsp_train(int n, double h, double beta, const char* profile_name, int ancilla_layers,
                     int system_layers, int restarts, int max_iterations, int select_by_fidelity,
                     uint64_t seed, gsp_train_result** out) {
    if (auto st = require(profile_name && out, "null argument")) return st;
    *out = nullptr;
    return guard([&] {
        const gsp::NoiseProfile profile = gsp::find_profile(profile_name);
        const gsp::GibbsTarget target = gsp::GibbsTarget::make({n, h}, beta);
        gsp::TrainOptions opts;
        opts.ancilla_layers = ancilla_layers;
        opts.system_layers = system_layers;
        opts.max_iterations = max_iterations;
        opts.select_by = select_by_fidelity ? gsp::SelectBy::Fidelity : gsp::SelectBy::Cost;
        auto* r = new gsp_train_result;
        r->r = gsp::train(target, profile, restarts, seed, opts);
        r->h = h;
        r->beta = beta;
        r->profile = profile_name;
        *out = r;
    });
}

void gsp_train_result_destroy(gsp_train_result* r) { delete r; }

gsp_status gsp_train_result_best_cost(const gsp_train_result* r, double* out) {
    if (auto st = require(r && out, "null argument")) return st;
    *out = r->r.best_cost;
    return GSP_OK;
}

int gsp_train_result_iterations(const gsp_train_result* r) { return r ? r->r.iterations : 0; }

int64_t gsp_train_result_trace_length(const gsp_train_result* r) {
    return r ? static_cast<int64_t>(r->r.cost_trace.size()) : 0;
}

gsp_status gsp_train_result_cost_trace(const gsp_train_result* r, double* out) {
    if (auto st = require(r && out, "null argument")) return st;
    for (std::size_t i = 0; i < r->r.cost_trace.size(); ++i) out[i] = r->r.cost_trace[i];
    return GSP_OK;
}

gsp_status gsp_train_result_params(const gsp_train_result* r, gsp_params** out) {
    if (auto st = require(r && out, "null argument")) return st;
    auto* p = new gsp_params;
    p->p = r->r.best_params;
    p->h = r->h;
    p->beta = r->beta;
    p->profile = r->profile;
    p->has_meta = true;
    *out = p;
    return GSP_OK;
}

/* ---- circuits ---------------------------------------------------------- */

gsp_status gsp_circuit_build(const gsp_params* p, int feedforward, gsp_circuit** out) {
    if (auto st = require(p && out, "null argument")) return st;
    *out = nullptr;
    return guard([&] {
        *out = new gsp_circuit{feedforward ? gsp::build_feedforward_variant(p->p)
                                           : gsp::build_gsp_circuit(p->p)};
    });
}

void gsp_circuit_destroy(gsp_circuit* c) { delete c; }

int gsp_circuit_num_qubits(const gsp_circuit* c) { return c ? c->c.num_qubits : 0; }

int64_t gsp_circuit_num_ops(const gsp_circuit* c) {
    return c ? static_cast<int64_t>(c->c.ops.size()) : 0;
}

gsp_status gsp_circuit_save(const gsp_circuit* c, const char* path) {
    if (auto st = require(c && path, "null argument")) return st;
    return guard([&] { gsp::atomic_write_file(path, gsp::circuit_to_text(c->c)); });
}

gsp_status gsp_circuit_load(const char* path, gsp_circuit** out) {
    if (auto st = require(path && out, "null argument")) return st;
    *out = nullptr;
    return guard([&] {
        std::ifstream in(path);
        if (!in) throw std::runtime_error(std::string("cannot open '") + path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        *out = new gsp_circuit{gsp::circuit_from_text(buf.str())};
    });
}

/* ---- transpilation ------------------------------------------------------ */

gsp_status gsp_circuit_gate_counts(const gsp_circuit* c, const char* gateset, int64_t* one_qubit,
                                   int64_t* two_qubit, int64_t* virtual_z) {
    if (auto st = require(c && gateset, "null argument")) return st;
    return guard([&] {
        const gsp::NativeCircuit nc = gsp::lower(c->c, gsp::NativeGateSet::from_name(gateset));
        const gsp::GateCounts gc = gsp::gate_counts(nc);
        if (one_qubit) *one_qubit = gc.one_qubit;
        if (two_qubit) *two_qubit = gc.two_qubit;
        if (virtual_z) *virtual_z = gc.virtual_z;
    });
}

gsp_status gsp_circuit_lower_to_file(const gsp_circuit* c, const char* gateset, const char* path) {
    if (auto st = require(c && gateset && path, "null argument")) return st;
    return guard([&] {
        const gsp::NativeCircuit nc = gsp::lower(c->c, gsp::NativeGateSet::from_name(gateset));
        gsp::atomic_write_file(path, gsp::native_circuit_to_text(nc));
    });
}

gsp_status gsp_circuit_lowering_distance(const gsp_circuit* c, const char* gateset, double* out) {
    if (auto st = require(c && gateset && out, "null argument")) return st;
    return guard([&] {
        const gsp::NativeCircuit nc = gsp::lower(c->c, gsp::NativeGateSet::from_name(gateset));
        *out = gsp::verify_equivalence(c->c, nc);
    });
}

/* ---- states ------------------------------------------------------------- */

gsp_status gsp_prepare(const gsp_params* p, const char* profile_name, gsp_state** out) {
    if (auto st = require(p && profile_name && out, "null argument")) return st;
    *out = nullptr;
    return guard([&] {
        const gsp::NoiseProfile profile = gsp::find_profile(profile_name);
        *out = new gsp_state{gsp::prepare_system_state(p->p, profile)};
    });
}

void gsp_state_destroy(gsp_state* s) { delete s; }

int gsp_state_num_qubits(const gsp_state* s) { return s ? s->rho.num_qubits : 0; }

gsp_status gsp_state_get(const gsp_state* s, double* re, double* im) {
    if (auto st = require(s && re && im, "null argument")) return st;
    const auto dim = s->rho.mat.rows();
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            re[r * dim + c] = s->rho.mat(r, c).real();
            im[r * dim + c] = s->rho.mat(r, c).imag();
        }
    }
    return GSP_OK;
}

gsp_status gsp_state_save(const gsp_state* s, const char* path) {
    if (auto st = require(s && path, "null argument")) return st;
    return guard([&] {
        std::ostringstream out;
        out << "# qubits " << s->rho.num_qubits << "\n";
        const auto dim = s->rho.mat.rows();
        for (Eigen::Index r = 0; r < dim; ++r) {
            for (Eigen::Index c = 0; c < dim; ++c) {
                if (c > 0) out << ' ';
                out << gsp::format_g17(s->rho.mat(r, c).real()) << ' '
                    << gsp::format_g17(s->rho.mat(r, c).imag());
            }
            out << '\n';
        }
        gsp::atomic_write_file(path, out.str());
    });
}

gsp_status gsp_state_load(const char* path, gsp_state** out) {
    if (auto st = require(path && out, "null argument")) return st;
    *out = nullptr;
    return guard([&] {
        std::ifstream in(path);
        if (!in) throw std::runtime_error(std::string("cannot open '") + path + "'");
        std::string hash, key;
        int n = -1;
        in >> hash >> key >> n;
        if (hash != "#" || key != "qubits" || n < 0)
            throw std::runtime_error("state file: bad header");
        const auto dim = static_cast<Eigen::Index>(gsp::dim_of(n));
        gsp::DensityMatrix rho;
        rho.num_qubits = n;
        rho.mat = gsp::Mat(dim, dim);
        for (Eigen::Index r = 0; r < dim; ++r) {
            for (Eigen::Index c = 0; c < dim; ++c) {
                double re, im;
                if (!(in >> re >> im)) throw std::runtime_error("state file: truncated matrix");
                rho.mat(r, c) = gsp::cplx(re, im);
            }
        }
        *out = new gsp_state{std::move(rho)};
    });
}

gsp_status gsp_state_fidelity(const gsp_state* s, const gsp_target* t, double* out) {
    if (auto st = require(s && t && out, "null argument")) return st;
    return guard([&] { *out = gsp::uhlmann_fidelity(s->rho, gsp::exact_gibbs(t->t)); });
}

/* ---- tomography ---------------------------------------------------------- */

gsp_status gsp_tomography(const gsp_params* p, const char* profile_name,
                          int64_t shots_per_setting, uint64_t seed, const char* counts_dir,
                          gsp_state** reconstructed, double* even_parity) {
    if (auto st = require(p && profile_name, "null argument")) return st;
    if (reconstructed) *reconstructed = nullptr;
    return guard([&] {
        const gsp::NoiseProfile profile = gsp::find_profile(profile_name);
        const gsp::DensityMatrix rho = gsp::prepare_system_state(p->p, profile);
        gsp::RngStream rng(seed);
        const gsp::TomographyData data =
            gsp::tomography_collect(rho, shots_per_setting, profile.p_spam, rng);
        if (counts_dir) {
            fs::create_directories(counts_dir);
            for (const auto& [setting, counts] : data.settings)
                gsp::atomic_write_file((fs::path(counts_dir) / ("tomo_" + setting + ".txt")).string(),
                                       counts.to_text());
        }
        if (even_parity) {
            const std::string all_z(static_cast<std::size_t>(data.n), 'Z');
            *even_parity = gsp::parity_even_fraction(data.settings.at(all_z));
        }
        if (reconstructed) *reconstructed = new gsp_state{gsp::reconstruct(data)};
    });
}

/* ---- beta sweep ------------------------------------------------------------ */

int gsp_default_sweep_grid_length(void) {
    return static_cast<int>(gsp::default_sweep_grid().size());
}

gsp_status gsp_default_sweep_grid(double* out) {
    if (auto st = require(out != nullptr, "null argument")) return st;
    const auto grid = gsp::default_sweep_grid();
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = grid[i];
    return GSP_OK;
}

gsp_status gsp_beta_sweep(const gsp_state* s, double h, double beta_true, const double* grid,
                          int64_t grid_len, double* fidelities, double* beta_star,
                          double* delta_beta) {
    if (auto st = require(s != nullptr, "null handle")) return st;
    return guard([&] {
        const std::vector<double> g = (grid && grid_len > 0)
                                          ? std::vector<double>(grid, grid + grid_len)
                                          : gsp::default_sweep_grid();
        const gsp::TFIMParams params{s->rho.num_qubits, h};
        const gsp::BetaSweepResult res = gsp::beta_sweep(s->rho, params, beta_true, g);
        if (fidelities)
            for (std::size_t i = 0; i < res.fidelities.size(); ++i) fidelities[i] = res.fidelities[i];
        if (beta_star) *beta_star = res.beta_star;
        if (delta_beta) *delta_beta = res.delta_beta;
    });
}

/* ---- runner ------------------------------------------------------------------ */

gsp_status gsp_run_grid(const char* config_path, const char* out_dir_override, int workers,
                        int has_seed_override, uint64_t seed_override, int64_t* num_records) {
    if (auto st = require(config_path != nullptr, "null config path")) return st;
    return guard([&] {
        gsp::ExperimentConfig cfg = gsp::load_config(config_path);
        if (out_dir_override) cfg.output_dir = out_dir_override;
        if (has_seed_override) cfg.master_seed = seed_override;
        const auto records = gsp::run_grid(cfg, workers > 0 ? workers : 1);
        if (num_records) *num_records = static_cast<int64_t>(records.size());
    });
}

gsp_status gsp_report(const char* records_dir, const char* out_dir) {
    if (auto st = require(records_dir && out_dir, "null argument")) return st;
    return guard([&] {
        const auto records = gsp::load_records(records_dir);
        gsp::write_report(records, out_dir);
    });
}

} // extern "C"
