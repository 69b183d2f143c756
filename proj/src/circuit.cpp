#include "gsp/circuit.hpp"

#include "gsp/rng.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace gsp {

const char* gate_kind_name(GateKind k) {
    switch (k) {
        case GateKind::RY: return "RY";
        case GateKind::CNOT: return "CNOT";
        case GateKind::RP: return "RP";
        case GateKind::X: return "X";
        case GateKind::MeasureZ: return "MEASURE_Z";
        case GateKind::ClassicalX: return "CLASSICAL_X";
    }
    return "?";
}

GateOp GateOp::ry(int q, double angle) { return GateOp{GateKind::RY, {q}, angle, 0.0, -1}; }
GateOp GateOp::x(int q) { return GateOp{GateKind::X, {q}, 0.0, 0.0, -1}; }
GateOp GateOp::cnot(int control, int target) {
    return GateOp{GateKind::CNOT, {control, target}, 0.0, 0.0, -1};
}
GateOp GateOp::rp(int q0, int q1, double a, double b) {
    return GateOp{GateKind::RP, {q0, q1}, a, b, -1};
}
GateOp GateOp::measure_z(int q) { return GateOp{GateKind::MeasureZ, {q}, 0.0, 0.0, -1}; }
GateOp GateOp::classical_x(int q, int condition_bit) {
    return GateOp{GateKind::ClassicalX, {q}, 0.0, 0.0, condition_bit};
}

namespace {

int expected_arity(GateKind k) {
    switch (k) {
        case GateKind::CNOT:
        case GateKind::RP: return 2;
        default: return 1;
    }
}

} // namespace

void Circuit::check_valid() const {
    if (num_ancilla < 0 || num_ancilla > num_qubits)
        throw std::invalid_argument("circuit: bad ancilla count");
    for (const auto& op : ops) {
        if (static_cast<int>(op.targets.size()) != expected_arity(op.kind))
            throw std::invalid_argument("circuit: op arity does not match kind");
        for (int q : op.targets)
            if (q < 0 || q >= num_qubits)
                throw std::invalid_argument("circuit: target out of range");
        if (op.targets.size() == 2 && op.targets[0] == op.targets[1])
            throw std::invalid_argument("circuit: duplicate target");
        if (op.kind == GateKind::ClassicalX && (op.condition_bit < 0 || op.condition_bit >= num_qubits))
            throw std::invalid_argument("circuit: condition bit out of range");
    }
}

void ParamSet::check_valid() const {
    if (n < 2) throw std::invalid_argument("params: n must be >= 2");
    if (ancilla_layers < 1 || system_layers < 1)
        throw std::invalid_argument("params: layer counts must be >= 1");
    if (theta.size() != static_cast<std::size_t>(2 * n * ancilla_layers))
        throw std::invalid_argument("params: |theta| != 2n * ancilla_layers");
    if (phi.size() != static_cast<std::size_t>(2 * n * system_layers))
        throw std::invalid_argument("params: |phi| != 2n * system_layers");
}

ParamSet param_init(int n, int ancilla_layers, int system_layers, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("param_init: n must be >= 2 (periodic chain)");
    if (ancilla_layers < 1 || system_layers < 1)
        throw std::invalid_argument("param_init: layer counts must be >= 1");
    ParamSet p;
    p.n = n;
    p.ancilla_layers = ancilla_layers;
    p.system_layers = system_layers;
    RngStream rng(seed);
    const double pi = std::numbers::pi;
    p.theta.resize(static_cast<std::size_t>(2 * n * ancilla_layers));
    p.phi.resize(static_cast<std::size_t>(2 * n * system_layers));
    for (auto& v : p.theta) v = rng.uniform(-pi, pi);
    for (auto& v : p.phi) v = rng.uniform(-pi, pi);
    return p;
}

Circuit build_ancilla_unitary(int n, int ancilla_layers, const std::vector<double>& theta) {
    if (theta.size() != static_cast<std::size_t>(2 * n * ancilla_layers))
        throw std::invalid_argument("build_ancilla_unitary: |theta| != 2n * layers");
    Circuit c;
    c.num_qubits = n;
    c.num_ancilla = 0;
    std::size_t k = 0;
    for (int layer = 0; layer < ancilla_layers; ++layer) {
        for (int q = 0; q < n; ++q) c.ops.push_back(GateOp::ry(q, theta[k++]));
        for (int q = 0; q + 1 < n; ++q) c.ops.push_back(GateOp::cnot(q, q + 1));
        for (int q = 0; q < n; ++q) c.ops.push_back(GateOp::ry(q, theta[k++]));
    }
    return c;
}

Circuit build_transversal_cnots(int n) {
    if (n < 2) throw std::invalid_argument("build_transversal_cnots: n must be >= 2");
    Circuit c;
    c.num_qubits = 2 * n;
    c.num_ancilla = n;
    for (int i = 0; i < n; ++i) c.ops.push_back(GateOp::cnot(i, n + i));
    return c;
}

Mat rp_gate(double a, double b) {
    // YX and XY commute; on the even-parity plane {|00>,|11>} both act as a
    // block Pauli-Y, on the odd plane {|01>,|10>} they act as +Y and -Y.
    // The product exp(-i a/2 YX) exp(-i b/2 XY) is therefore a pair of real
    // plane rotations by (a+b)/2 and (a-b)/2.
    const double te = 0.5 * (a + b);
    const double to = 0.5 * (a - b);
    Mat m = Mat::Zero(4, 4);
    m(0, 0) = std::cos(te);
    m(0, 3) = -std::sin(te);
    m(3, 0) = std::sin(te);
    m(3, 3) = std::cos(te);
    m(1, 1) = std::cos(to);
    m(1, 2) = -std::sin(to);
    m(2, 1) = std::sin(to);
    m(2, 2) = std::cos(to);
    return m;
}

Circuit build_system_unitary(int n, int system_layers, const std::vector<double>& phi) {
    if (phi.size() != static_cast<std::size_t>(2 * n * system_layers))
        throw std::invalid_argument("build_system_unitary: |phi| != 2n * layers");
    Circuit c;
    c.num_qubits = n;
    c.num_ancilla = 0;
    std::size_t k = 0;
    for (int layer = 0; layer < system_layers; ++layer) {
        for (int i = 0; i < n; ++i) {
            const double a = phi[k++];
            const double b = phi[k++];
            c.ops.push_back(GateOp::rp(i, (i + 1) % n, a, b));
        }
    }
    return c;
}

namespace {

// Concatenate a fragment built on its own register into a 2n-qubit circuit.
void append_with_offset(Circuit& out, const Circuit& fragment, int offset) {
    for (GateOp op : fragment.ops) {
        for (int& q : op.targets) q += offset;
        if (op.condition_bit >= 0) op.condition_bit += offset;
        out.ops.push_back(std::move(op));
    }
}

} // namespace

Circuit build_gsp_circuit(const ParamSet& params) {
    params.check_valid();
    const int n = params.n;
    Circuit c;
    c.num_qubits = 2 * n;
    c.num_ancilla = n;
    append_with_offset(c, build_ancilla_unitary(n, params.ancilla_layers, params.theta), 0);
    for (int i = 0; i < n; ++i) c.ops.push_back(GateOp::cnot(i, n + i));
    append_with_offset(c, build_system_unitary(n, params.system_layers, params.phi), n);
    return c;
}

Circuit build_feedforward_variant(const ParamSet& params) {
    params.check_valid();
    const int n = params.n;
    Circuit c;
    c.num_qubits = 2 * n;
    c.num_ancilla = n;
    append_with_offset(c, build_ancilla_unitary(n, params.ancilla_layers, params.theta), 0);
    for (int i = 0; i < n; ++i) c.ops.push_back(GateOp::measure_z(i));
    for (int i = 0; i < n; ++i) c.ops.push_back(GateOp::classical_x(n + i, i));
    append_with_offset(c, build_system_unitary(n, params.system_layers, params.phi), n);
    return c;
}

Mat gate_unitary(const GateOp& op) {
    switch (op.kind) {
        case GateKind::RY: {
            Mat m(2, 2);
            const double c = std::cos(op.angle1 / 2.0), s = std::sin(op.angle1 / 2.0);
            m << c, -s, s, c;
            return m;
        }
        case GateKind::X: return pauli_x();
        case GateKind::CNOT: {
            Mat m = Mat::Zero(4, 4);
            m(0, 0) = 1;
            m(1, 1) = 1;
            m(2, 3) = 1;
            m(3, 2) = 1;
            return m;
        }
        case GateKind::RP: return rp_gate(op.angle1, op.angle2);
        default:
            throw std::invalid_argument("gate_unitary: op has no unitary matrix");
    }
}

Mat compile_unitary(const Circuit& c) {
    c.check_valid();
    const std::size_t dim = dim_of(c.num_qubits);
    Mat u = identity_op(dim);
    for (const auto& op : c.ops) {
        if (op.kind == GateKind::MeasureZ || op.kind == GateKind::ClassicalX)
            throw std::invalid_argument("compile_unitary: circuit contains measurement ops");
        u = embed(gate_unitary(op), op.targets, c.num_qubits) * u;
    }
    return u;
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string circuit_to_text(const Circuit& c) {
    std::ostringstream out;
    out << "# qubits " << c.num_qubits << " ancilla " << c.num_ancilla << "\n";
    for (const auto& op : c.ops) {
        out << gate_kind_name(op.kind);
        for (int q : op.targets) out << ' ' << q;
        switch (op.kind) {
            case GateKind::RY: out << ' ' << format_g17(op.angle1); break;
            case GateKind::RP:
                out << ' ' << format_g17(op.angle1) << ' ' << format_g17(op.angle2);
                break;
            case GateKind::ClassicalX: out << ' ' << op.condition_bit; break;
            default: break;
        }
        out << '\n';
    }
    return out.str();
}

Circuit circuit_from_text(const std::string& text) {
    Circuit c;
    bool have_header = false;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        if (tok == "#") {
            std::string key;
            while (ls >> key) {
                if (key == "qubits") ls >> c.num_qubits;
                else if (key == "ancilla") ls >> c.num_ancilla;
            }
            have_header = true;
            continue;
        }
        GateOp op;
        if (tok == "RY") {
            int q;
            double a;
            if (!(ls >> q >> a)) throw std::invalid_argument("circuit parse: bad RY line");
            op = GateOp::ry(q, a);
        } else if (tok == "X") {
            int q;
            if (!(ls >> q)) throw std::invalid_argument("circuit parse: bad X line");
            op = GateOp::x(q);
        } else if (tok == "CNOT") {
            int q0, q1;
            if (!(ls >> q0 >> q1)) throw std::invalid_argument("circuit parse: bad CNOT line");
            op = GateOp::cnot(q0, q1);
        } else if (tok == "RP") {
            int q0, q1;
            double a, b;
            if (!(ls >> q0 >> q1 >> a >> b)) throw std::invalid_argument("circuit parse: bad RP line");
            op = GateOp::rp(q0, q1, a, b);
        } else if (tok == "MEASURE_Z") {
            int q;
            if (!(ls >> q)) throw std::invalid_argument("circuit parse: bad MEASURE_Z line");
            op = GateOp::measure_z(q);
        } else if (tok == "CLASSICAL_X") {
            int q, cond;
            if (!(ls >> q >> cond)) throw std::invalid_argument("circuit parse: bad CLASSICAL_X line");
            op = GateOp::classical_x(q, cond);
        } else {
            throw std::invalid_argument("circuit parse: unknown op kind '" + tok + "'");
        }
        c.ops.push_back(std::move(op));
    }
    if (!have_header) {
        int maxq = -1;
        for (const auto& op : c.ops)
            for (int q : op.targets) maxq = std::max(maxq, q);
        c.num_qubits = maxq + 1;
        c.num_ancilla = 0;
    }
    c.check_valid();
    return c;
}

} // namespace gsp
