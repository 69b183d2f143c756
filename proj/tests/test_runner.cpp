#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gsp/runner.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace gsp;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Small but complete grid config for fast pipeline tests.
std::string tiny_config(const std::string& out_dir, const std::string& extra = "") {
    std::ostringstream cfg;
    cfg << "# test grid\n"
        << "n = 2\n"
        << "h = 1.0\n"
        << "beta = 1.0\n"
        << "device_profile = noiseless\n"
        << "restarts = 1\n"
        << "max_iterations = 8\n"
        << "shots_plan = 1024, 1024, 2048\n"
        << "tomography_shots = 256\n"
        << "sweep_grid = 1e-8, 0.5, 1.0, 1.5, 2.0\n"
        << "master_seed = 99\n"
        << "output_dir = " << out_dir << "\n"
        << extra;
    return cfg.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("config parsing") {
    const ExperimentConfig cfg = parse_config(tiny_config("/tmp/gsp-test-out"));
    CHECK(cfg.n == std::vector<int>{2});
    CHECK(cfg.h == std::vector<double>{1.0});
    CHECK(cfg.beta == std::vector<double>{1.0});
    CHECK(cfg.device_profile == "noiseless");
    CHECK(cfg.max_iterations == 8);
    CHECK(cfg.shots_plan.system_x == 1024);
    CHECK(cfg.shots_plan.ancilla_z == 2048);
    CHECK(cfg.tomography_shots == 256);
    CHECK(cfg.sweep_grid.size() == 5);
    CHECK(cfg.master_seed == 99);

    // defaults
    CHECK(cfg.ancilla_layers == 1);
    CHECK(cfg.restarts == 1);

    // multi-value lists
    const ExperimentConfig multi = parse_config(
        "n = 2, 3\nh = 0.5, 1.0\nbeta = 1e-8, 1, 5\ndevice_profile = aria1\n"
        "master_seed = 1\noutput_dir = /tmp/x\n");
    CHECK(multi.n.size() == 2);
    CHECK(multi.beta.size() == 3);
    CHECK(multi.sweep_grid.empty()); // default grid marker
}

TEST_CASE("config rejects bad input") {
    CHECK_THROWS_WITH_AS(parse_config(tiny_config("/tmp/x", "bogus_key = 3\n")),
                         doctest::Contains("unknown key"), std::invalid_argument);
    // empty beta list
    CHECK_THROWS(parse_config(
        "n = 2\nh = 1\nbeta =\ndevice_profile = noiseless\nmaster_seed = 1\noutput_dir = /tmp/x\n"));
    // missing required keys
    CHECK_THROWS(parse_config("n = 2\n"));
    // unknown profile
    CHECK_THROWS(parse_config(
        "n = 2\nh = 1\nbeta = 1\ndevice_profile = quantum9000\nmaster_seed = 1\noutput_dir = /tmp/x\n"));
    // n < 2
    CHECK_THROWS(parse_config(
        "n = 1\nh = 1\nbeta = 1\ndevice_profile = noiseless\nmaster_seed = 1\noutput_dir = /tmp/x\n"));
    // beta = 0
    CHECK_THROWS(parse_config(
        "n = 2\nh = 1\nbeta = 0\ndevice_profile = noiseless\nmaster_seed = 1\noutput_dir = /tmp/x\n"));
}

TEST_CASE("record json round trip") {
    ExperimentRecord r;
    r.profile = "aria1";
    r.n = 3;
    r.h = 0.5;
    r.beta = 5.0;
    r.seed = 12345;
    r.restart = 2;
    r.params = param_init(3, 1, 1, 7);
    r.cost_trace = {1.0, 0.5, 0.25};
    r.iterations = 2;
    r.final_cost = 0.25;
    r.fidelity = 0.93;
    r.beta_star = 4.0;
    r.delta_beta = 1.0;
    r.even_parity_fraction = 0.88;
    r.sweep_betas = {1.0, 2.0};
    r.sweep_fidelities = {0.4, 0.6};
    r.wall_time_s = 1.25;
    r.ok = true;

    const ExperimentRecord back = ExperimentRecord::from_json(r.to_json());
    CHECK(back.profile == r.profile);
    CHECK(back.n == r.n);
    CHECK(back.seed == r.seed);
    CHECK(back.params.theta == r.params.theta);
    CHECK(back.cost_trace == r.cost_trace);
    CHECK(back.fidelity == r.fidelity);
    CHECK(back.sweep_fidelities == r.sweep_fidelities);
    CHECK(back.ok == r.ok);
}

TEST_CASE("atomic write leaves no temp files") {
    TempDir dir("gsp-atomic-test");
    const fs::path target = dir.path / "file.txt";
    atomic_write_file(target.string(), "hello\n");
    CHECK(read_file(target) == "hello\n");
    CHECK(!fs::exists(target.string() + ".tmp"));
}

TEST_CASE("run_point records stage failures instead of throwing") {
    PointConfig pt;
    pt.profile = "does-not-exist";
    pt.n = 2;
    pt.h = 1.0;
    pt.beta = 1.0;
    const ExperimentRecord rec = run_point(pt);
    CHECK(!rec.ok);
    CHECK(rec.error_stage == "target");
    CHECK(!rec.error_message.empty());
}

TEST_CASE("grid runs, resumes, and reports") {
    TempDir dir("gsp-grid-test");
    const ExperimentConfig cfg = parse_config(tiny_config(dir.path.string()));

    const auto records = run_grid(cfg);
    REQUIRE(records.size() == 1);
    CHECK(records[0].ok);
    CHECK(records[0].iterations == 8); // config's max_iterations reaches the trainer
    CHECK(records[0].fidelity > 0.0);
    CHECK(records[0].fidelity <= 1.0);
    CHECK(records[0].delta_beta == records[0].beta - records[0].beta_star);

    // record file exists and is valid json
    int file_count = 0;
    for (const auto& e : fs::directory_iterator(dir.path))
        if (e.path().extension() == ".json") ++file_count;
    CHECK(file_count == 1);

    // resume: a second run loads rather than recomputes (wall time is kept,
    // so byte-identical record content proves it was not rerun)
    const std::string before = read_file(dir.path / record_filename(PointConfig{
        "noiseless", 2, 1.0, 1.0, 0, 1, 1, 8, cfg.shots_plan, 256, cfg.sweep_grid,
        point_seed(99, 2, 1.0, 1.0, 0)}));
    const auto again = run_grid(cfg);
    CHECK(read_file(dir.path / record_filename(PointConfig{
        "noiseless", 2, 1.0, 1.0, 0, 1, 1, 8, cfg.shots_plan, 256, cfg.sweep_grid,
        point_seed(99, 2, 1.0, 1.0, 0)})) == before);
    CHECK(again.size() == 1);

    // deleting the record forces exactly that point to recompute
    fs::remove(dir.path / record_filename(PointConfig{
        "noiseless", 2, 1.0, 1.0, 0, 1, 1, 8, cfg.shots_plan, 256, cfg.sweep_grid,
        point_seed(99, 2, 1.0, 1.0, 0)}));
    const auto third = run_grid(cfg);
    CHECK(third.size() == 1);
    CHECK(third[0].fidelity == records[0].fidelity); // deterministic recompute

    // report emission
    TempDir rep("gsp-report-test");
    write_report(third, rep.path.string());
    const std::string csv = read_file(rep.path / "results.csv");
    CHECK(csv.rfind("profile,n,h,beta,seed,restart,iterations,final_cost,fidelity,beta_star,"
                    "delta_beta,even_parity_fraction,wall_time_s\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2); // header + one row
    CHECK(fs::exists(rep.path / "sweep_2_1_1.csv"));
    CHECK(fs::exists(rep.path / "delta_beta.csv"));

    const std::string sweep = read_file(rep.path / "sweep_2_1_1.csv");
    CHECK(std::count(sweep.begin(), sweep.end(), '\n') == 1 + 5 + 1); // header + grid + summary

    // reference parity metadata rides along with every report
    const std::string ref = read_file(rep.path / "hardware_reference.csv");
    CHECK(ref.find("all,91.3") != std::string::npos);
    CHECK(ref.find("2,95.89") != std::string::npos);
    CHECK(ref.find("4,87.35") != std::string::npos);
}

TEST_CASE("run_point full-budget pipeline hits high fidelity at tiny beta") {
    PointConfig pt;
    pt.profile = "noiseless";
    pt.n = 2;
    pt.h = 1.0;
    pt.beta = 1e-8;
    pt.max_iterations = 100;
    pt.tomography_shots = 1024;
    pt.sweep_grid = {1e-8, 0.5, 1.0};
    pt.seed = point_seed(17, 2, 1.0, 1e-8, 0);
    const ExperimentRecord rec = run_point(pt);
    REQUIRE(rec.ok);
    CHECK(rec.fidelity >= 0.99);
    CHECK(rec.beta_star == 1e-8); // high fidelity pins the sweep maximum
}

TEST_CASE("grid cartesian product and seeds") {
    TempDir dir("gsp-grid-count-test");
    std::ostringstream cfg;
    cfg << "n = 2\nh = 0.5, 1.0\nbeta = 0.5, 1.0\ndevice_profile = noiseless\n"
        << "restarts = 2\nmax_iterations = 2\nshots_plan = 128,128,256\n"
        << "tomography_shots = 64\nsweep_grid = 0.5, 1.0\nmaster_seed = 3\n"
        << "output_dir = " << dir.path.string() << "\n";
    const auto records = run_grid(parse_config(cfg.str()), 2);
    CHECK(records.size() == 8); // 1 n x 2 h x 2 beta x 2 restarts

    // per-point seeds are all distinct
    std::set<std::uint64_t> seeds;
    for (const auto& r : records) seeds.insert(r.seed);
    CHECK(seeds.size() == 8);

    // loading from disk matches the in-memory records
    const auto loaded = load_records(dir.path.string());
    CHECK(loaded.size() == 8);
}

TEST_CASE("determinism of results.csv modulo wall time") {
    auto run_fresh = [](const std::string& tag) {
        TempDir dir("gsp-det-" + tag);
        std::ostringstream cfg;
        cfg << "n = 2\nh = 1.0\nbeta = 0.5\ndevice_profile = aria1\nrestarts = 1\n"
            << "max_iterations = 4\nshots_plan = 256,256,512\ntomography_shots = 128\n"
            << "sweep_grid = 0.25, 0.5, 1.0\nmaster_seed = 42\noutput_dir = "
            << dir.path.string() << "\n";
        const auto records = run_grid(parse_config(cfg.str()));
        TempDir rep("gsp-det-rep-" + tag);
        write_report(records, rep.path.string());
        std::string csv = read_file(rep.path / "results.csv");
        // strip the wall_time_s column (last comma onward, per line)
        std::ostringstream stripped;
        std::istringstream lines(csv);
        std::string line;
        while (std::getline(lines, line))
            stripped << line.substr(0, line.rfind(',')) << '\n';
        return stripped.str();
    };
    CHECK(run_fresh("a") == run_fresh("b"));
}
