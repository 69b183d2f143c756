#pragma once

#include "gsp/linalg.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gsp {

enum class GateKind { RY, CNOT, RP, X, MeasureZ, ClassicalX };

const char* gate_kind_name(GateKind k);

// One circuit operation. Angle-free kinds leave angles at 0; ClassicalX
// stores the classical condition bit (the index of the measured qubit that
// produced it) in condition_bit.
struct GateOp {
    GateKind kind;
    std::vector<int> targets;
    double angle1 = 0.0;
    double angle2 = 0.0;
    int condition_bit = -1;

    static GateOp ry(int q, double angle);
    static GateOp x(int q);
    static GateOp cnot(int control, int target);
    static GateOp rp(int q0, int q1, double a, double b);
    static GateOp measure_z(int q);
    static GateOp classical_x(int q, int condition_bit);
};

// Ordered gate list over a register. For full GSP circuits the register is
// 2n qubits: ancilla a_1..a_n on qubits 0..n-1, system s_1..s_n on qubits
// n..2n-1.
struct Circuit {
    int num_qubits = 0;
    int num_ancilla = 0; // 0 for single-register fragments
    std::vector<GateOp> ops;

    int num_system() const { return num_qubits - num_ancilla; }
    void check_valid() const;
};

// Variational angles; 2n entries per layer per register, unrestricted reals.
struct ParamSet {
    int n = 0;
    int ancilla_layers = 1;
    int system_layers = 1;
    std::vector<double> theta; // 2n * ancilla_layers
    std::vector<double> phi;   // 2n * system_layers

    void check_valid() const;
};

// i.i.d. uniform angles on [-pi, pi], deterministic per seed.
ParamSet param_init(int n, int ancilla_layers, int system_layers, std::uint64_t seed);

// Ancilla-register state preparation: per layer, a transversal RY column,
// a CNOT ladder a_i -> a_{i+1}, and a second RY column. Standalone circuit
// on n qubits.
Circuit build_ancilla_unitary(int n, int ancilla_layers, const std::vector<double>& theta);

// The register-coupling layer: CNOT(a_i -> s_i) for i = 1..n, on 2n qubits.
Circuit build_transversal_cnots(int n);

// Two-parameter two-qubit rotation used by the system unitary:
//   rp_gate(a, b) = exp(-i a/2 * Y(x)X) * exp(-i b/2 * X(x)Y).
// Identity at zero angles and commutes with Z(x)Z, so the system unitary
// preserves computational-basis parity. Within each parity-definite basis
// plane it acts as a real rotation, which is what maps computational basis
// states onto XX-coupled eigenvectors.
Mat rp_gate(double a, double b);

// System-register unitary: per layer, RP(phi_{2i-1}, phi_{2i}) applied
// cyclically on (s_i, s_{i+1}) with s_{n+1} = s_1. Standalone on n qubits.
Circuit build_system_unitary(int n, int system_layers, const std::vector<double>& phi);

// Full circuit: ancilla unitary, transversal CNOTs, system unitary on 2n.
Circuit build_gsp_circuit(const ParamSet& params);

// Appendix-B variant: the transversal CNOTs are replaced by a mid-circuit
// Z measurement of each ancilla qubit and an X on each system qubit
// conditioned on the matching outcome bit.
Circuit build_feedforward_variant(const ParamSet& params);

// 2- or 4-dim unitary matrix of a unitary GateOp kind.
Mat gate_unitary(const GateOp& op);

// Dense unitary of a measurement-free circuit (test and equivalence use).
Mat compile_unitary(const Circuit& c);

// Line-oriented text format: `KIND q0 [q1] [angle1] [angle2]` per op, angles
// with 17 significant digits; metadata in `# qubits <N> ancilla <k>` header.
std::string circuit_to_text(const Circuit& c);
Circuit circuit_from_text(const std::string& text);

std::string format_g17(double v);

} // namespace gsp
