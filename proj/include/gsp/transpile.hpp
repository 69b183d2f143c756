#pragma once

#include "gsp/circuit.hpp"
#include "gsp/linalg.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gsp {

// Trapped-ion native inventory: GPI / GPI2 / virtual-Z one-qubit gates plus
// one maximally entangling two-qubit gate, either MS(phi1, phi2) or ZZ(theta).
enum class EntanglerKind { MS, ZZ };

struct NativeGateSet {
    std::string name;
    EntanglerKind entangler = EntanglerKind::MS;

    static NativeGateSet ms() { return {"ms", EntanglerKind::MS}; }
    static NativeGateSet zz() { return {"zz", EntanglerKind::ZZ}; }
    static NativeGateSet from_name(const std::string& name);
};

enum class NativeKind { GPI, GPI2, VIRTZ, MS, ZZ };

const char* native_kind_name(NativeKind k);

struct NativeOp {
    NativeKind kind;
    std::vector<int> targets;
    double angle1 = 0.0;
    double angle2 = 0.0;
};

struct NativeCircuit {
    int num_qubits = 0;
    EntanglerKind entangler = EntanglerKind::MS;
    std::vector<NativeOp> ops;
    std::uint64_t source_hash = 0; // digest of the abstract circuit text
};

// Unitary of a single native op (2x2 or 4x4):
//   GPI(p)   = [[0, e^{-ip}], [e^{ip}, 0]]
//   GPI2(p)  = (1/sqrt2) [[1, -i e^{-ip}], [-i e^{ip}, 1]]
//   VIRTZ(t) = diag(e^{-it/2}, e^{it/2})
//   MS(p,q)  = exp(-i pi/4 * s_p (x) s_q),  s_p = cos(p) X + sin(p) Y
//   ZZ(t)    = exp(-i t/2 * Z (x) Z)
Mat native_unitary(const NativeOp& op);

// Lower an abstract circuit (RY/CNOT/RP/X only) to the native set. Each
// abstract gate maps to a fixed template: CNOT costs one entangler, RP two,
// one-qubit gates cost zero entanglers. Merged one-qubit residues are
// emitted as VIRTZ / GPI where a single native suffices and otherwise as
// the fixed VIRTZ-GPI2-VIRTZ-GPI2-VIRTZ Euler sequence. Unitary-equivalent
// to the input up to global phase.
NativeCircuit lower(const Circuit& c, const NativeGateSet& gs);

struct GateCounts {
    long one_qubit = 0; // GPI + GPI2 + VIRTZ
    long two_qubit = 0; // MS or ZZ
    long virtual_z = 0; // VIRTZ alone (zero-cost in duration)
};

GateCounts gate_counts(const NativeCircuit& nc);

// Global-phase-invariant distance 1 - |tr(U^dag V)| / 2^n between the
// compiled abstract and native circuits. Dense check, num_qubits <= 10.
double verify_equivalence(const Circuit& c, const NativeCircuit& nc);

Mat compile_native_unitary(const NativeCircuit& nc);

std::string native_circuit_to_text(const NativeCircuit& nc);

} // namespace gsp
