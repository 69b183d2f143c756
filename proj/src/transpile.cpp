#include "gsp/transpile.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace gsp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTol = 1e-12;

Mat rz(double t) {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = std::exp(cplx(0, -t / 2.0));
    m(1, 1) = std::exp(cplx(0, t / 2.0));
    return m;
}

Mat ry(double t) {
    Mat m(2, 2);
    m << std::cos(t / 2.0), -std::sin(t / 2.0), std::sin(t / 2.0), std::cos(t / 2.0);
    return m;
}

} // namespace

NativeGateSet NativeGateSet::from_name(const std::string& name) {
    if (name == "ms") return ms();
    if (name == "zz") return zz();
    throw std::invalid_argument("unknown native gate set '" + name + "' (expected ms or zz)");
}

const char* native_kind_name(NativeKind k) {
    switch (k) {
        case NativeKind::GPI: return "GPI";
        case NativeKind::GPI2: return "GPI2";
        case NativeKind::VIRTZ: return "VIRTZ";
        case NativeKind::MS: return "MS";
        case NativeKind::ZZ: return "ZZ";
    }
    return "?";
}

Mat native_unitary(const NativeOp& op) {
    switch (op.kind) {
        case NativeKind::GPI: {
            Mat m = Mat::Zero(2, 2);
            m(0, 1) = std::exp(cplx(0, -op.angle1));
            m(1, 0) = std::exp(cplx(0, op.angle1));
            return m;
        }
        case NativeKind::GPI2: {
            const double s = 1.0 / std::sqrt(2.0);
            Mat m(2, 2);
            m(0, 0) = s;
            m(0, 1) = cplx(0, -1) * std::exp(cplx(0, -op.angle1)) * s;
            m(1, 0) = cplx(0, -1) * std::exp(cplx(0, op.angle1)) * s;
            m(1, 1) = s;
            return m;
        }
        case NativeKind::VIRTZ: return rz(op.angle1);
        case NativeKind::MS: {
            const Mat sp = std::cos(op.angle1) * pauli_x() + std::sin(op.angle1) * pauli_y();
            const Mat sq = std::cos(op.angle2) * pauli_x() + std::sin(op.angle2) * pauli_y();
            const Mat g = kron(sp, sq);
            // exp(-i pi/4 g) with g an involution: cos(pi/4) I - i sin(pi/4) g
            return std::cos(kPi / 4.0) * identity_op(4) - cplx(0, std::sin(kPi / 4.0)) * g;
        }
        case NativeKind::ZZ: {
            Mat m = Mat::Zero(4, 4);
            const cplx em = std::exp(cplx(0, -op.angle1 / 2.0));
            const cplx ep = std::exp(cplx(0, op.angle1 / 2.0));
            m(0, 0) = em;
            m(1, 1) = ep;
            m(2, 2) = ep;
            m(3, 3) = em;
            return m;
        }
    }
    throw std::invalid_argument("native_unitary: bad kind");
}

namespace {

// One step of a lowering template: either a 2x2 unitary on one qubit or the
// entangler on a pair. Adjacent one-qubit steps are merged before emission.
struct MicroOp {
    bool is_entangler = false;
    int q0 = 0, q1 = 0;
    Mat u;              // one-qubit case
    double ent_angle = 0.0; // ZZ angle (MS is always the fixed MS(0,0))
};

MicroOp one_q(int q, Mat u) { return {false, q, 0, std::move(u), 0.0}; }
MicroOp entangler(int q0, int q1, double zz_angle) { return {true, q0, q1, {}, zz_angle}; }

// Emit a merged one-qubit unitary as natives. Identity emits nothing,
// diagonal a single VIRTZ, antidiagonal a single GPI, anything else the
// fixed Euler sequence VIRTZ-GPI2-VIRTZ-GPI2-VIRTZ with GPI2(0) pulses.
void emit_one_qubit(std::vector<NativeOp>& out, int q, const Mat& u) {
    const double offdiag = std::max(std::abs(u(0, 1)), std::abs(u(1, 0)));
    const double ondiag = std::max(std::abs(u(0, 0)), std::abs(u(1, 1)));
    if (offdiag < kTol) {
        const double t = std::arg(u(1, 1) * std::conj(u(0, 0)));
        if (std::abs(t) > kTol) out.push_back({NativeKind::VIRTZ, {q}, t, 0.0});
        return;
    }
    if (ondiag < kTol) {
        const double p = 0.5 * std::arg(u(1, 0) * std::conj(u(0, 1)));
        out.push_back({NativeKind::GPI, {q}, p, 0.0});
        return;
    }
    // General case. With V(a,b,c) = Rz(c) Rx(pi/2) Rz(b) Rx(pi/2) Rz(a):
    //   V ~ [[e^{-i(a+c)/2} sin(b/2), e^{i(a-c)/2} cos(b/2)],
    //        [e^{-i(a-c)/2} cos(b/2), -e^{i(a+c)/2} sin(b/2)]]
    // so the angles read off the target's moduli and relative phases.
    const double b = 2.0 * std::atan2(std::abs(u(0, 0)), std::abs(u(0, 1)));
    const double a = std::arg(u(0, 1) * std::conj(u(0, 0)));
    const double c = std::arg(u(1, 0) * std::conj(u(0, 0)));
    if (std::abs(a) > kTol) out.push_back({NativeKind::VIRTZ, {q}, a, 0.0});
    out.push_back({NativeKind::GPI2, {q}, 0.0, 0.0});
    out.push_back({NativeKind::VIRTZ, {q}, b, 0.0});
    out.push_back({NativeKind::GPI2, {q}, 0.0, 0.0});
    if (std::abs(c) > kTol) out.push_back({NativeKind::VIRTZ, {q}, c, 0.0});
}

// Template for one abstract gate, as a micro-op sequence in time order.
std::vector<MicroOp> gate_template(const GateOp& op, EntanglerKind ent) {
    const Mat h = hadamard();
    const Mat z = pauli_z();
    std::vector<MicroOp> seq;

    // ZZ(t) through the chosen entangler. The MS set realizes it as
    // (H Z (x) H) MS(0,0) (Z H (x) H) because ZZ(-pi/2) = (H(x)H) (Z(x)I)
    // MS(0,0) (Z(x)I) (H(x)H); arbitrary angles only occur with the ZZ set.
    auto push_zz = [&](int q0, int q1, double t) {
        if (ent == EntanglerKind::ZZ) {
            seq.push_back(entangler(q0, q1, t));
        } else {
            seq.push_back(one_q(q0, Mat(h)));
            seq.push_back(one_q(q1, Mat(h)));
            seq.push_back(one_q(q0, Mat(z)));
            seq.push_back(entangler(q0, q1, 0.0));
            seq.push_back(one_q(q0, Mat(z)));
            seq.push_back(one_q(q0, Mat(h)));
            seq.push_back(one_q(q1, Mat(h)));
        }
    };

    switch (op.kind) {
        case GateKind::RY:
            seq.push_back(one_q(op.targets[0], ry(op.angle1)));
            break;
        case GateKind::X:
            seq.push_back(one_q(op.targets[0], pauli_x()));
            break;
        case GateKind::CNOT: {
            // CNOT = (I (x) H) (Rz(pi/2) (x) Rz(pi/2)) ZZ(-pi/2) (I (x) H)
            const int c = op.targets[0], t = op.targets[1];
            seq.push_back(one_q(t, Mat(h)));
            push_zz(c, t, -kPi / 2.0);
            seq.push_back(one_q(c, rz(kPi / 2.0)));
            seq.push_back(one_q(t, rz(kPi / 2.0)));
            seq.push_back(one_q(t, Mat(h)));
            break;
        }
        case GateKind::RP: {
            const int q0 = op.targets[0], q1 = op.targets[1];
            const double a = op.angle1, b = op.angle2;
            if (ent == EntanglerKind::MS) {
                // MS (Rz(t1) (x) Rz(t2)) MS = exp(+i(t1 YX + t2 XY)/2) (-i XX),
                // so RP(a,b) ~ (X (x) X) MS(0,0) (Rz(a) (x) Rz(b)) MS(0,0)
                // (the trailing X pair flips the Rz signs when commuted in).
                seq.push_back(entangler(q0, q1, 0.0));
                seq.push_back(one_q(q0, rz(a)));
                seq.push_back(one_q(q1, rz(b)));
                seq.push_back(entangler(q0, q1, 0.0));
                seq.push_back(one_q(q0, pauli_x()));
                seq.push_back(one_q(q1, pauli_x()));
            } else {
                // exp(-i b/2 XY) then exp(-i a/2 YX), each a conjugated ZZ(t).
                const Mat s = rz(kPi / 2.0);
                const Mat sdg = rz(-kPi / 2.0);
                seq.push_back(one_q(q1, Mat(sdg)));
                seq.push_back(one_q(q0, Mat(h)));
                seq.push_back(one_q(q1, Mat(h)));
                push_zz(q0, q1, b);
                seq.push_back(one_q(q0, Mat(h)));
                seq.push_back(one_q(q1, Mat(h)));
                seq.push_back(one_q(q1, Mat(s)));

                seq.push_back(one_q(q0, Mat(sdg)));
                seq.push_back(one_q(q0, Mat(h)));
                seq.push_back(one_q(q1, Mat(h)));
                push_zz(q0, q1, a);
                seq.push_back(one_q(q0, Mat(h)));
                seq.push_back(one_q(q1, Mat(h)));
                seq.push_back(one_q(q0, Mat(s)));
            }
            break;
        }
        default:
            throw std::invalid_argument("lower: unsupported op kind (measurement in circuit?)");
    }
    return seq;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace

NativeCircuit lower(const Circuit& c, const NativeGateSet& gs) {
    c.check_valid();
    NativeCircuit nc;
    nc.num_qubits = c.num_qubits;
    nc.entangler = gs.entangler;
    nc.source_hash = fnv1a(circuit_to_text(c));

    std::vector<Mat> pending(static_cast<std::size_t>(c.num_qubits), pauli_i());
    std::vector<bool> dirty(static_cast<std::size_t>(c.num_qubits), false);

    auto flush = [&](int q) {
        if (!dirty[static_cast<std::size_t>(q)]) return;
        emit_one_qubit(nc.ops, q, pending[static_cast<std::size_t>(q)]);
        pending[static_cast<std::size_t>(q)] = pauli_i();
        dirty[static_cast<std::size_t>(q)] = false;
    };

    for (const auto& op : c.ops) {
        for (const auto& micro : gate_template(op, gs.entangler)) {
            if (micro.is_entangler) {
                flush(micro.q0);
                flush(micro.q1);
                if (gs.entangler == EntanglerKind::MS)
                    nc.ops.push_back({NativeKind::MS, {micro.q0, micro.q1}, 0.0, 0.0});
                else
                    nc.ops.push_back({NativeKind::ZZ, {micro.q0, micro.q1}, micro.ent_angle, 0.0});
            } else {
                pending[static_cast<std::size_t>(micro.q0)] =
                    micro.u * pending[static_cast<std::size_t>(micro.q0)];
                dirty[static_cast<std::size_t>(micro.q0)] = true;
            }
        }
        // Per-gate lowering: residues do not merge across abstract gates.
        for (int q : op.targets) flush(q);
    }
    return nc;
}

GateCounts gate_counts(const NativeCircuit& nc) {
    GateCounts gc;
    for (const auto& op : nc.ops) {
        switch (op.kind) {
            case NativeKind::GPI:
            case NativeKind::GPI2: gc.one_qubit++; break;
            case NativeKind::VIRTZ:
                gc.one_qubit++;
                gc.virtual_z++;
                break;
            case NativeKind::MS:
            case NativeKind::ZZ: gc.two_qubit++; break;
        }
    }
    return gc;
}

Mat compile_native_unitary(const NativeCircuit& nc) {
    Mat u = identity_op(dim_of(nc.num_qubits));
    for (const auto& op : nc.ops) u = embed(native_unitary(op), op.targets, nc.num_qubits) * u;
    return u;
}

double verify_equivalence(const Circuit& c, const NativeCircuit& nc) {
    if (c.num_qubits != nc.num_qubits)
        throw std::invalid_argument("verify_equivalence: qubit count mismatch");
    if (c.num_qubits > 10)
        throw std::invalid_argument("verify_equivalence: dense check limited to 10 qubits");
    const Mat u = compile_unitary(c);
    const Mat v = compile_native_unitary(nc);
    const double overlap = std::abs((u.adjoint() * v).trace());
    return 1.0 - overlap / static_cast<double>(dim_of(c.num_qubits));
}

std::string native_circuit_to_text(const NativeCircuit& nc) {
    std::ostringstream out;
    out << "# qubits " << nc.num_qubits << " entangler "
        << (nc.entangler == EntanglerKind::MS ? "ms" : "zz") << " source "
        << nc.source_hash << "\n";
    for (const auto& op : nc.ops) {
        out << native_kind_name(op.kind);
        for (int q : op.targets) out << ' ' << q;
        switch (op.kind) {
            case NativeKind::GPI:
            case NativeKind::GPI2:
            case NativeKind::VIRTZ:
            case NativeKind::ZZ: out << ' ' << format_g17(op.angle1); break;
            case NativeKind::MS:
                out << ' ' << format_g17(op.angle1) << ' ' << format_g17(op.angle2);
                break;
        }
        out << '\n';
    }
    return out.str();
}

} // namespace gsp
