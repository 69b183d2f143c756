#include "gsp/simulate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gsp {

void NoiseProfile::check_valid() const {
    for (double p : {p1, p2, p_spam})
        if (p < 0.0 || p > 1.0)
            throw std::invalid_argument("noise profile: probability outside [0, 1]");
}

std::vector<NoiseProfile> builtin_profiles() {
    std::vector<NoiseProfile> out;
    out.push_back({"noiseless", 0.0, 0.0, 0.0, {}});
    out.push_back({"aria1",
                   2e-4,
                   0.0201,
                   0.0049,
                   {{"t1_s", "100"},
                    {"t2_s", "1"},
                    {"gate_speed_1q_us", "135"},
                    {"gate_speed_2q_us", "600"},
                    {"readout_speed_us", "300"},
                    {"reset_speed_us", "20"},
                    {"two_qubit_gate", "MS"}}});
    out.push_back({"forte1",
                   2e-4,
                   0.0151,
                   0.0054,
                   {{"t1_s", "100"},
                    {"t2_s", "1"},
                    {"gate_speed_1q_us", "130"},
                    {"gate_speed_2q_us", "970"},
                    {"readout_speed_us", "150"},
                    {"reset_speed_us", "50"},
                    {"two_qubit_gate", "ZZ"}}});
    out.push_back({"forte-ent1",
                   2e-4,
                   0.0085,
                   0.0061,
                   {{"t1_s", "188"},
                    {"t2_s", "0.95"},
                    {"gate_speed_1q_us", "63"},
                    {"gate_speed_2q_us", "650"},
                    {"readout_speed_us", "250"},
                    {"reset_speed_us", "150"},
                    {"two_qubit_gate", "ZZ"}}});
    return out;
}

NoiseProfile find_profile(const std::string& name) {
    for (auto& p : builtin_profiles())
        if (p.name == name) return p;
    throw std::invalid_argument("unknown noise profile '" + name + "'");
}

int Counts::width() const {
    return histogram.empty() ? 0 : static_cast<int>(histogram.begin()->first.size());
}

void Counts::check_valid() const {
    long total = 0;
    const int w = width();
    for (const auto& [bits, count] : histogram) {
        if (count < 0) throw std::invalid_argument("counts: negative count");
        if (static_cast<int>(bits.size()) != w)
            throw std::invalid_argument("counts: ragged bitstring widths");
        for (char ch : bits)
            if (ch != '0' && ch != '1') throw std::invalid_argument("counts: bad bitstring");
        total += count;
    }
    if (total != shots) throw std::invalid_argument("counts: histogram does not sum to shots");
}

std::string Counts::to_text() const {
    std::ostringstream out;
    out << "basis=" << (basis == Basis::Z ? 'Z' : 'X') << " shots=" << shots << " register="
        << (reg == Register::Ancilla ? 'A' : 'S') << "\n";
    for (const auto& [bits, count] : histogram) out << bits << ' ' << count << "\n";
    return out.str();
}

Counts Counts::from_text(const std::string& text) {
    Counts c;
    std::istringstream in(text);
    std::string header;
    if (!std::getline(in, header)) throw std::invalid_argument("counts parse: empty input");
    std::istringstream hs(header);
    std::string field;
    while (hs >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("counts parse: bad header field");
        const std::string key = field.substr(0, eq), val = field.substr(eq + 1);
        if (key == "basis")
            c.basis = (val == "X") ? Basis::X : Basis::Z;
        else if (key == "shots")
            c.shots = std::stol(val);
        else if (key == "register")
            c.reg = (val == "A") ? Register::Ancilla : Register::System;
        else
            throw std::invalid_argument("counts parse: unknown header key '" + key + "'");
    }
    std::string bits;
    long count;
    while (in >> bits >> count) c.histogram[bits] = count;
    c.check_valid();
    return c;
}

void apply_gate_vec(CVec& psi, const Mat& u, const std::vector<int>& targets, int num_qubits) {
    const int k = static_cast<int>(targets.size());
    if (k < 1 || k > 2) throw std::invalid_argument("apply_gate_vec: gates act on 1 or 2 qubits");
    const std::size_t gdim = dim_of(k);
    if (u.rows() != static_cast<Eigen::Index>(gdim))
        throw std::invalid_argument("apply_gate_vec: gate dim mismatch");
    std::vector<std::size_t> masks(static_cast<std::size_t>(k));
    std::size_t tmask = 0;
    for (int j = 0; j < k; ++j) {
        masks[static_cast<std::size_t>(j)] = std::size_t{1} << (num_qubits - 1 - targets[static_cast<std::size_t>(j)]);
        tmask |= masks[static_cast<std::size_t>(j)];
    }
    const std::size_t dim = dim_of(num_qubits);
    std::array<cplx, 4> buf;
    std::array<std::size_t, 4> idx;
    for (std::size_t base = 0; base < dim; ++base) {
        if (base & tmask) continue; // enumerate each gate-local group once
        for (std::size_t g = 0; g < gdim; ++g) {
            std::size_t i = base;
            for (int j = 0; j < k; ++j)
                if ((g >> (k - 1 - j)) & 1u) i |= masks[static_cast<std::size_t>(j)];
            idx[g] = i;
            buf[g] = psi(static_cast<Eigen::Index>(i));
        }
        for (std::size_t r = 0; r < gdim; ++r) {
            cplx acc = 0.0;
            for (std::size_t col = 0; col < gdim; ++col)
                acc += u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) * buf[col];
            psi(static_cast<Eigen::Index>(idx[r])) = acc;
        }
    }
}

void apply_gate_density(Mat& rho, const Mat& u, const std::vector<int>& targets, int num_qubits) {
    const Eigen::Index dim = rho.rows();
    // rho <- U rho: act on the row index, one column at a time.
    for (Eigen::Index c = 0; c < dim; ++c) {
        CVec col = rho.col(c);
        apply_gate_vec(col, u, targets, num_qubits);
        rho.col(c) = col;
    }
    // rho <- rho U^dagger = (U rho^dagger)^dagger.
    const Mat uc = u.conjugate();
    for (Eigen::Index r = 0; r < dim; ++r) {
        CVec row = rho.row(r).transpose();
        apply_gate_vec(row, uc, targets, num_qubits);
        rho.row(r) = row.transpose();
    }
}

void apply_depolarizing(Mat& rho, const std::vector<int>& targets, double p, int num_qubits) {
    if (p == 0.0) return;
    const int k = static_cast<int>(targets.size());
    const std::size_t npauli = dim_of(2 * k); // 4^k strings
    // Pauli-twirl identity: the average of P rho P over all 4^k strings on
    // the targets equals I/2^k (x) tr_targets(rho).
    Mat acc = Mat::Zero(rho.rows(), rho.cols());
    const Mat paulis[4] = {pauli_i(), pauli_x(), pauli_y(), pauli_z()};
    for (std::size_t s = 0; s < npauli; ++s) {
        Mat term = rho;
        for (int j = 0; j < k; ++j) {
            const std::size_t which = (s >> (2 * (k - 1 - j))) & 3u;
            if (which == 0) continue;
            apply_gate_density(term, paulis[which], {targets[static_cast<std::size_t>(j)]}, num_qubits);
        }
        acc += term;
    }
    rho = (1.0 - p) * rho + (p / static_cast<double>(npauli)) * acc;
}

void apply_dephasing(Mat& rho, int qubit, int num_qubits) {
    const std::size_t dim = dim_of(num_qubits);
    const std::size_t mask = std::size_t{1} << (num_qubits - 1 - qubit);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c)
            if ((r & mask) != (c & mask))
                rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = 0.0;
}

void apply_conditioned_x(Mat& rho, int control, int target, int num_qubits) {
    const std::size_t dim = dim_of(num_qubits);
    const std::size_t cmask = std::size_t{1} << (num_qubits - 1 - control);
    const std::size_t tmask = std::size_t{1} << (num_qubits - 1 - target);
    Mat out = Mat::Zero(rho.rows(), rho.cols());
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            if (!(r & cmask) && !(c & cmask)) {
                out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) +=
                    rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
            } else if ((r & cmask) && (c & cmask)) {
                out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) +=
                    rho(static_cast<Eigen::Index>(r ^ tmask), static_cast<Eigen::Index>(c ^ tmask));
            }
        }
    }
    rho = std::move(out);
}

StateVector run_statevector(const Circuit& c) {
    c.check_valid();
    StateVector psi = StateVector::zero_state(c.num_qubits);
    for (const auto& op : c.ops) {
        if (op.kind == GateKind::MeasureZ || op.kind == GateKind::ClassicalX)
            throw std::invalid_argument(
                "run_statevector: circuit contains measurement ops (use run_density)");
        apply_gate_vec(psi.amps, gate_unitary(op), op.targets, c.num_qubits);
    }
    return psi;
}

DensityMatrix run_density(const Circuit& c, const NoiseProfile& noise) {
    c.check_valid();
    noise.check_valid();
    DensityMatrix rho = DensityMatrix::pure(StateVector::zero_state(c.num_qubits));
    for (const auto& op : c.ops) {
        switch (op.kind) {
            case GateKind::RY:
            case GateKind::X:
                apply_gate_density(rho.mat, gate_unitary(op), op.targets, c.num_qubits);
                apply_depolarizing(rho.mat, op.targets, noise.p1, c.num_qubits);
                break;
            case GateKind::CNOT:
                apply_gate_density(rho.mat, gate_unitary(op), op.targets, c.num_qubits);
                apply_depolarizing(rho.mat, op.targets, noise.p2, c.num_qubits);
                break;
            case GateKind::RP:
                apply_gate_density(rho.mat, gate_unitary(op), op.targets, c.num_qubits);
                apply_depolarizing(rho.mat, op.targets, noise.p2, c.num_qubits);
                apply_depolarizing(rho.mat, {op.targets[0]}, noise.p1, c.num_qubits);
                apply_depolarizing(rho.mat, {op.targets[1]}, noise.p1, c.num_qubits);
                break;
            case GateKind::MeasureZ:
                apply_dephasing(rho.mat, op.targets[0], c.num_qubits);
                break;
            case GateKind::ClassicalX:
                apply_conditioned_x(rho.mat, op.condition_bit, op.targets[0], c.num_qubits);
                break;
        }
    }
    return rho;
}

DensityMatrix reduced_system_state(const DensityMatrix& rho_full, int num_ancilla) {
    std::vector<int> keep;
    for (int q = num_ancilla; q < rho_full.num_qubits; ++q) keep.push_back(q);
    return partial_trace(rho_full, keep);
}

DensityMatrix reduced_ancilla_state(const DensityMatrix& rho_full, int num_ancilla) {
    std::vector<int> keep;
    for (int q = 0; q < num_ancilla; ++q) keep.push_back(q);
    return partial_trace(rho_full, keep);
}

std::vector<double> z_probabilities(const DensityMatrix& rho) {
    const auto dim = static_cast<std::size_t>(rho.mat.rows());
    std::vector<double> p(dim);
    double total = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        p[i] = std::max(0.0, rho.mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real());
        total += p[i];
    }
    if (total <= 0.0) throw std::runtime_error("z_probabilities: state has no diagonal weight");
    for (auto& v : p) v /= total;
    return p;
}

namespace {

std::string index_to_bits(std::size_t idx, int width) {
    std::string s(static_cast<std::size_t>(width), '0');
    for (int q = 0; q < width; ++q)
        if ((idx >> (width - 1 - q)) & 1u) s[static_cast<std::size_t>(q)] = '1';
    return s;
}

} // namespace

Counts sample_state(const DensityMatrix& rho, Basis basis, Register reg_tag, long shots,
                    double p_spam, RngStream& rng) {
    if (shots <= 0) throw std::invalid_argument("sample_state: shots must be > 0");
    DensityMatrix work = rho;
    if (basis == Basis::X) {
        const Mat h = hadamard();
        for (int q = 0; q < work.num_qubits; ++q)
            apply_gate_density(work.mat, h, {q}, work.num_qubits);
    }
    std::vector<double> p = z_probabilities(work);
    std::vector<double> cdf(p.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        acc += p[i];
        cdf[i] = acc;
    }
    cdf.back() = 1.0;

    Counts counts;
    counts.basis = basis;
    counts.reg = reg_tag;
    counts.shots = shots;
    const int w = work.num_qubits;
    for (long s = 0; s < shots; ++s) {
        const double u = rng.uniform();
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
        if (idx >= p.size()) idx = p.size() - 1;
        if (p_spam > 0.0)
            for (int q = 0; q < w; ++q)
                if (rng.uniform() < p_spam) idx ^= std::size_t{1} << (w - 1 - q);
        ++counts.histogram[index_to_bits(idx, w)];
    }
    return counts;
}

Counts sample_counts(const DensityMatrix& rho_full, int num_ancilla, Basis basis, Register reg,
                     long shots, double p_spam, RngStream& rng) {
    DensityMatrix reduced = (reg == Register::Ancilla)
                                ? reduced_ancilla_state(rho_full, num_ancilla)
                                : reduced_system_state(rho_full, num_ancilla);
    return sample_state(reduced, basis, reg, shots, p_spam, rng);
}

} // namespace gsp
