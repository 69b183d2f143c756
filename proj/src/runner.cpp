#include "gsp/runner.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <sstream>
#include <stdexcept>

namespace fs = std::filesystem;
using nlohmann::json;

namespace gsp {

namespace {

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        const auto e = item.find_last_not_of(" \t");
        out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string format_compact(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

} // namespace

void ExperimentConfig::check_valid() const {
    if (n.empty() || h.empty() || beta.empty())
        throw std::invalid_argument("config: n, h and beta lists must be nonempty");
    for (int v : n)
        if (v < 2) throw std::invalid_argument("config: n must be >= 2");
    for (double b : beta)
        if (b <= 0.0) throw std::invalid_argument("config: beta must be > 0");
    if (restarts < 1) throw std::invalid_argument("config: restarts must be >= 1");
    if (max_iterations < 1) throw std::invalid_argument("config: max_iterations must be >= 1");
    if (tomography_shots < 1) throw std::invalid_argument("config: tomography_shots must be >= 1");
    if (output_dir.empty()) throw std::invalid_argument("config: output_dir is required");
    find_profile(device_profile); // throws on unknown profile
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    bool saw_n = false, saw_h = false, saw_beta = false, saw_profile = false, saw_seed = false,
         saw_out = false;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));

        if (key == "n") {
            for (const auto& s : split_list(value)) cfg.n.push_back(std::stoi(s));
            saw_n = true;
        } else if (key == "h") {
            for (const auto& s : split_list(value)) cfg.h.push_back(std::stod(s));
            saw_h = true;
        } else if (key == "beta") {
            for (const auto& s : split_list(value)) cfg.beta.push_back(std::stod(s));
            saw_beta = true;
        } else if (key == "device_profile") {
            cfg.device_profile = value;
            saw_profile = true;
        } else if (key == "ancilla_layers") {
            cfg.ancilla_layers = std::stoi(value);
        } else if (key == "system_layers") {
            cfg.system_layers = std::stoi(value);
        } else if (key == "restarts") {
            cfg.restarts = std::stoi(value);
        } else if (key == "max_iterations") {
            cfg.max_iterations = std::stoi(value);
        } else if (key == "shots_plan") {
            const auto parts = split_list(value);
            if (parts.size() != 3)
                throw std::invalid_argument(
                    "config: shots_plan expects three values (system_x, system_z, ancilla_z)");
            cfg.shots_plan.system_x = std::stol(parts[0]);
            cfg.shots_plan.system_z = std::stol(parts[1]);
            cfg.shots_plan.ancilla_z = std::stol(parts[2]);
        } else if (key == "tomography_shots") {
            cfg.tomography_shots = std::stol(value);
        } else if (key == "sweep_grid") {
            if (value != "default")
                for (const auto& s : split_list(value)) cfg.sweep_grid.push_back(std::stod(s));
        } else if (key == "master_seed") {
            cfg.master_seed = std::stoull(value);
            saw_seed = true;
        } else if (key == "output_dir") {
            cfg.output_dir = value;
            saw_out = true;
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
    if (!saw_n || !saw_h || !saw_beta || !saw_profile || !saw_seed || !saw_out)
        throw std::invalid_argument(
            "config: n, h, beta, device_profile, master_seed and output_dir are required");
    cfg.check_valid();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::uint64_t point_seed(std::uint64_t master_seed, int n, double h, double beta, int restart) {
    return RngStream::derive(master_seed, static_cast<std::uint64_t>(n),
                             RngStream::encode_double(h), RngStream::encode_double(beta),
                             static_cast<std::uint64_t>(restart));
}

std::string record_filename(const PointConfig& pt) {
    std::ostringstream name;
    name << "point_" << pt.profile << "_n" << pt.n << "_h" << format_compact(pt.h) << "_b"
         << format_compact(pt.beta) << "_r" << pt.restart << ".json";
    return name.str();
}

std::string ExperimentRecord::to_json() const {
    json j;
    j["profile"] = profile;
    j["n"] = n;
    j["h"] = h;
    j["beta"] = beta;
    j["seed"] = seed;
    j["restart"] = restart;
    j["params"] = {{"n", params.n},
                   {"ancilla_layers", params.ancilla_layers},
                   {"system_layers", params.system_layers},
                   {"theta", params.theta},
                   {"phi", params.phi}};
    j["cost_trace"] = cost_trace;
    j["iterations"] = iterations;
    j["final_cost"] = final_cost;
    j["fidelity"] = fidelity;
    j["beta_star"] = beta_star;
    j["delta_beta"] = delta_beta;
    j["even_parity_fraction"] = even_parity_fraction;
    j["sweep_betas"] = sweep_betas;
    j["sweep_fidelities"] = sweep_fidelities;
    j["wall_time_s"] = wall_time_s;
    j["ok"] = ok;
    j["error_stage"] = error_stage;
    j["error_message"] = error_message;
    return j.dump(2) + "\n";
}

ExperimentRecord ExperimentRecord::from_json(const std::string& text) {
    const json j = json::parse(text);
    ExperimentRecord r;
    r.profile = j.at("profile").get<std::string>();
    r.n = j.at("n").get<int>();
    r.h = j.at("h").get<double>();
    r.beta = j.at("beta").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.restart = j.at("restart").get<int>();
    const json& p = j.at("params");
    r.params.n = p.at("n").get<int>();
    r.params.ancilla_layers = p.at("ancilla_layers").get<int>();
    r.params.system_layers = p.at("system_layers").get<int>();
    r.params.theta = p.at("theta").get<std::vector<double>>();
    r.params.phi = p.at("phi").get<std::vector<double>>();
    r.cost_trace = j.at("cost_trace").get<std::vector<double>>();
    r.iterations = j.at("iterations").get<int>();
    r.final_cost = j.at("final_cost").get<double>();
    r.fidelity = j.at("fidelity").get<double>();
    r.beta_star = j.at("beta_star").get<double>();
    r.delta_beta = j.at("delta_beta").get<double>();
    r.even_parity_fraction = j.at("even_parity_fraction").get<double>();
    r.sweep_betas = j.at("sweep_betas").get<std::vector<double>>();
    r.sweep_fidelities = j.at("sweep_fidelities").get<std::vector<double>>();
    r.wall_time_s = j.at("wall_time_s").get<double>();
    r.ok = j.at("ok").get<bool>();
    r.error_stage = j.at("error_stage").get<std::string>();
    r.error_message = j.at("error_message").get<std::string>();
    return r;
}

void atomic_write_file(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
        out << contents;
        out.flush();
        if (!out) throw std::runtime_error("short write to '" + tmp + "'");
    }
    fs::rename(tmp, path);
}

ExperimentRecord run_point(const PointConfig& pt) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();

    ExperimentRecord rec;
    rec.profile = pt.profile;
    rec.n = pt.n;
    rec.h = pt.h;
    rec.beta = pt.beta;
    rec.seed = pt.seed;
    rec.restart = pt.restart;
    rec.ok = true;

    auto stage = [&](const char* name, auto&& fn) {
        if (!rec.ok) return;
        try {
            fn();
        } catch (const std::exception& e) {
            rec.ok = false;
            rec.error_stage = name;
            rec.error_message = e.what();
        }
    };

    GibbsTarget target;
    DensityMatrix prepared;
    DensityMatrix reconstructed;
    NoiseProfile profile;
    TomographyData tomo;

    stage("target", [&] {
        profile = find_profile(pt.profile);
        target = GibbsTarget::make({pt.n, pt.h}, pt.beta);
    });
    stage("train", [&] {
        TrainOptions opts;
        opts.ancilla_layers = pt.ancilla_layers;
        opts.system_layers = pt.system_layers;
        opts.max_iterations = pt.max_iterations;
        opts.shots = pt.shots_plan;
        // One restart per record; best-of aggregation happens in reports.
        const OptResult res = train(target, profile, 1, pt.seed, opts);
        rec.params = res.best_params;
        rec.cost_trace = res.cost_trace;
        rec.iterations = res.iterations;
        rec.final_cost = res.best_cost;
    });
    stage("prepare", [&] { prepared = prepare_system_state(rec.params, profile); });
    stage("tomography", [&] {
        RngStream rng(RngStream::derive(pt.seed, 0x746f6d6fULL));
        tomo = tomography_collect(prepared, pt.tomography_shots, profile.p_spam, rng);
        reconstructed = reconstruct(tomo);
    });
    stage("fidelity", [&] {
        rec.fidelity = uhlmann_fidelity(reconstructed, exact_gibbs(target));
    });
    stage("parity", [&] {
        const std::string all_z(static_cast<std::size_t>(pt.n), 'Z');
        rec.even_parity_fraction = parity_even_fraction(tomo.settings.at(all_z));
    });
    stage("sweep", [&] {
        const std::vector<double> grid =
            pt.sweep_grid.empty() ? default_sweep_grid() : pt.sweep_grid;
        const BetaSweepResult sweep = beta_sweep(reconstructed, target.params, pt.beta, grid);
        rec.sweep_betas = sweep.grid;
        rec.sweep_fidelities = sweep.fidelities;
        rec.beta_star = sweep.beta_star;
        rec.delta_beta = sweep.delta_beta;
    });

    rec.wall_time_s = std::chrono::duration<double>(clock::now() - t0).count();
    return rec;
}

namespace {

PointConfig make_point(const ExperimentConfig& cfg, int n, double h, double beta, int restart) {
    PointConfig pt;
    pt.profile = cfg.device_profile;
    pt.n = n;
    pt.h = h;
    pt.beta = beta;
    pt.restart = restart;
    pt.ancilla_layers = cfg.ancilla_layers;
    pt.system_layers = cfg.system_layers;
    pt.max_iterations = cfg.max_iterations;
    pt.shots_plan = cfg.shots_plan;
    pt.tomography_shots = cfg.tomography_shots;
    pt.sweep_grid = cfg.sweep_grid;
    pt.seed = point_seed(cfg.master_seed, n, h, beta, restart);
    return pt;
}

} // namespace

std::vector<ExperimentRecord> run_grid(const ExperimentConfig& cfg, int workers) {
    cfg.check_valid();
    fs::create_directories(cfg.output_dir);

    std::vector<PointConfig> points;
    for (int n : cfg.n)
        for (double h : cfg.h)
            for (double beta : cfg.beta)
                for (int r = 0; r < cfg.restarts; ++r) points.push_back(make_point(cfg, n, h, beta, r));

    auto run_one = [&](const PointConfig& pt) {
        const fs::path path = fs::path(cfg.output_dir) / record_filename(pt);
        if (fs::exists(path)) {
            std::ifstream in(path);
            std::ostringstream buf;
            buf << in.rdbuf();
            try {
                return ExperimentRecord::from_json(buf.str()); // resume
            } catch (const std::exception&) {
                // unreadable record: fall through and recompute
            }
        }
        ExperimentRecord rec = run_point(pt);
        atomic_write_file(path.string(), rec.to_json());
        return rec;
    };

    std::vector<ExperimentRecord> records(points.size());
    if (workers > 1) {
        std::size_t next = 0;
        while (next < points.size()) {
            const std::size_t batch =
                std::min(static_cast<std::size_t>(workers), points.size() - next);
            std::vector<std::future<ExperimentRecord>> futures;
            for (std::size_t i = 0; i < batch; ++i)
                futures.push_back(std::async(std::launch::async, run_one, points[next + i]));
            for (std::size_t i = 0; i < batch; ++i) records[next + i] = futures[i].get();
            next += batch;
        }
    } else {
        for (std::size_t i = 0; i < points.size(); ++i) records[i] = run_one(points[i]);
    }
    return records;
}

std::vector<ExperimentRecord> load_records(const std::string& dir) {
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("point_", 0) == 0 && name.size() > 5 &&
            name.substr(name.size() - 5) == ".json")
            files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    std::vector<ExperimentRecord> records;
    for (const auto& f : files) {
        std::ifstream in(f);
        std::ostringstream buf;
        buf << in.rdbuf();
        records.push_back(ExperimentRecord::from_json(buf.str()));
    }
    return records;
}

namespace {

bool record_order(const ExperimentRecord& a, const ExperimentRecord& b) {
    return std::tie(a.profile, a.n, a.h, a.beta, a.restart) <
           std::tie(b.profile, b.n, b.h, b.beta, b.restart);
}

} // namespace

void write_report(const std::vector<ExperimentRecord>& records, const std::string& out_dir) {
    if (records.empty()) throw std::invalid_argument("write_report: no records");
    fs::create_directories(out_dir);

    std::vector<ExperimentRecord> sorted(records);
    std::sort(sorted.begin(), sorted.end(), record_order);

    std::ostringstream csv;
    csv << "profile,n,h,beta,seed,restart,iterations,final_cost,fidelity,beta_star,delta_beta,"
           "even_parity_fraction,wall_time_s\n";
    for (const auto& r : sorted) {
        csv << r.profile << ',' << r.n << ',' << format_g17(r.h) << ',' << format_g17(r.beta)
            << ',' << r.seed << ',' << r.restart << ',' << r.iterations << ','
            << format_g17(r.final_cost) << ',' << format_g17(r.fidelity) << ','
            << format_g17(r.beta_star) << ',' << format_g17(r.delta_beta) << ','
            << format_g17(r.even_parity_fraction) << ',' << format_g17(r.wall_time_s) << '\n';
    }
    atomic_write_file((fs::path(out_dir) / "results.csv").string(), csv.str());

    // Best record per (profile, n, h, beta): highest fidelity, lowest restart
    // on ties. Only the winner's sweep curve is emitted per point.
    std::map<std::tuple<std::string, int, double, double>, const ExperimentRecord*> best;
    for (const auto& r : sorted) {
        if (!r.ok) continue;
        const auto key = std::make_tuple(r.profile, r.n, r.h, r.beta);
        const auto it = best.find(key);
        if (it == best.end() || r.fidelity > it->second->fidelity) best[key] = &r;
    }

    for (const auto& [key, rec] : best) {
        std::ostringstream name;
        name << "sweep_" << rec->n << "_" << format_compact(rec->h) << "_"
             << format_compact(rec->beta) << ".csv";
        std::ostringstream body;
        body << "beta,fidelity\n";
        for (std::size_t i = 0; i < rec->sweep_betas.size(); ++i)
            body << format_g17(rec->sweep_betas[i]) << ',' << format_g17(rec->sweep_fidelities[i])
                 << '\n';
        body << "# beta_true=" << format_g17(rec->beta) << " beta_star="
             << format_g17(rec->beta_star) << " delta_beta=" << format_g17(rec->delta_beta)
             << '\n';
        atomic_write_file((fs::path(out_dir) / name.str()).string(), body.str());
    }

    std::vector<const ExperimentRecord*> flat;
    for (const auto& [key, rec] : best) flat.push_back(rec);
    std::sort(flat.begin(), flat.end(), [](const ExperimentRecord* a, const ExperimentRecord* b) {
        return std::tie(a->n, a->beta, a->h, a->profile) <
               std::tie(b->n, b->beta, b->h, b->profile);
    });
    std::ostringstream db;
    db << "n,beta,h,profile,beta_star,delta_beta\n";
    for (const auto* r : flat)
        db << r->n << ',' << format_g17(r->beta) << ',' << format_g17(r->h) << ',' << r->profile
           << ',' << format_g17(r->beta_star) << ',' << format_g17(r->delta_beta) << '\n';
    atomic_write_file((fs::path(out_dir) / "delta_beta.csv").string(), db.str());

    // Observed hardware parity fractions, for side-by-side comparison with
    // the even_parity_fraction column. Reference only.
    std::ostringstream ref;
    ref << "n,hardware_even_parity_percent\n";
    for (const auto& row : hardware_parity_reference()) {
        if (row.n == 0)
            ref << "all," << format_compact(row.percent) << '\n';
        else
            ref << row.n << ',' << format_compact(row.percent) << '\n';
    }
    atomic_write_file((fs::path(out_dir) / "hardware_reference.csv").string(), ref.str());
}

} // namespace gsp
