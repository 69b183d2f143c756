#pragma once

#include "gsp/circuit.hpp"
#include "gsp/verify.hpp"
#include "gsp/vqa.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gsp {

// Grid configuration, parsed from a key = value text file with exactly the
// keys named here (unknown keys are an error; lists are comma-separated).
struct ExperimentConfig {
    std::vector<int> n;
    std::vector<double> h;
    std::vector<double> beta;
    std::string device_profile;
    int ancilla_layers = 1;
    int system_layers = 1;
    int restarts = 1;
    int max_iterations = 100;
    ShotsPlan shots_plan;
    long tomography_shots = 1024;
    std::vector<double> sweep_grid; // empty -> default grid
    std::uint64_t master_seed = 0;
    std::string output_dir;

    void check_valid() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// One grid point: a single training run (one restart index) plus its full
// validation pipeline.
struct PointConfig {
    std::string profile;
    int n = 2;
    double h = 1.0;
    double beta = 1.0;
    int restart = 0;
    int ancilla_layers = 1;
    int system_layers = 1;
    int max_iterations = 100;
    ShotsPlan shots_plan;
    long tomography_shots = 1024;
    std::vector<double> sweep_grid;
    std::uint64_t seed = 0;
};

struct ExperimentRecord {
    std::string profile;
    int n = 2;
    double h = 1.0;
    double beta = 1.0;
    std::uint64_t seed = 0;
    int restart = 0;

    ParamSet params;
    std::vector<double> cost_trace;
    int iterations = 0;
    double final_cost = 0.0;
    double fidelity = 0.0;
    double beta_star = 0.0;
    double delta_beta = 0.0;
    double even_parity_fraction = 0.0;
    std::vector<double> sweep_betas;
    std::vector<double> sweep_fidelities;
    double wall_time_s = 0.0;

    bool ok = false;
    std::string error_stage; // empty when ok
    std::string error_message;

    std::string to_json() const;
    static ExperimentRecord from_json(const std::string& text);
};

std::uint64_t point_seed(std::uint64_t master_seed, int n, double h, double beta, int restart);
std::string record_filename(const PointConfig& pt);

// Train, prepare, tomograph, reconstruct, score, sweep. A stage failure is
// captured in the record (stage tag + message) instead of thrown.
ExperimentRecord run_point(const PointConfig& pt);

// Cartesian product of (n, h, beta) x restarts. Completed records already
// present in the output directory are loaded, not recomputed. Records are
// persisted one file per point via write-to-temp + atomic rename.
std::vector<ExperimentRecord> run_grid(const ExperimentConfig& cfg, int workers = 1);

// results.csv, per-point sweep_<n>_<h>_<beta>.csv, and delta_beta.csv.
void write_report(const std::vector<ExperimentRecord>& records, const std::string& out_dir);

std::vector<ExperimentRecord> load_records(const std::string& dir);

void atomic_write_file(const std::string& path, const std::string& contents);

} // namespace gsp
