#pragma once

#include "gsp/circuit.hpp"
#include "gsp/linalg.hpp"
#include "gsp/rng.hpp"

#include <map>
#include <string>
#include <vector>

namespace gsp {

// Gate-local depolarizing + readout bit-flip noise model. Rates are
// 1 - fidelity from the device datasheets; timing figures are carried as
// metadata only.
struct NoiseProfile {
    std::string name;
    double p1 = 0.0;     // one-qubit depolarizing probability
    double p2 = 0.0;     // two-qubit depolarizing probability
    double p_spam = 0.0; // readout bit-flip probability per qubit
    std::map<std::string, std::string> metadata;

    bool is_noiseless() const { return p1 == 0.0 && p2 == 0.0 && p_spam == 0.0; }
    void check_valid() const;
};

std::vector<NoiseProfile> builtin_profiles();
NoiseProfile find_profile(const std::string& name);

enum class Basis { Z, X };
enum class Register { Ancilla, System };

// Measurement histogram. Bitstring character i is qubit i of the measured
// register (qubit 0 leftmost, matching the MSB-first index convention).
struct Counts {
    Basis basis = Basis::Z;
    Register reg = Register::System;
    long shots = 0;
    std::map<std::string, long> histogram;

    int width() const;
    void check_valid() const;
    std::string to_text() const;
    static Counts from_text(const std::string& text);
};

// In-place gate application helpers (dense, bit-indexed).
void apply_gate_vec(CVec& psi, const Mat& u, const std::vector<int>& targets, int num_qubits);
void apply_gate_density(Mat& rho, const Mat& u, const std::vector<int>& targets, int num_qubits);
// Uniform depolarizing channel on `targets`: rho -> (1-p) rho + p * I/2^k (x) tr_targets(rho).
void apply_depolarizing(Mat& rho, const std::vector<int>& targets, double p, int num_qubits);
// Z-basis dephasing of one qubit (the channel realizing an unread measurement).
void apply_dephasing(Mat& rho, int qubit, int num_qubits);
// X on `target` conditioned on the (measured) value of `control`:
// rho -> P0 rho P0 + (X P1) rho (P1 X).
void apply_conditioned_x(Mat& rho, int control, int target, int num_qubits);

// Ideal statevector execution; rejects circuits with measurement ops.
StateVector run_statevector(const Circuit& c);

// Density-matrix execution under a noise profile. Unitary kinds apply their
// depolarizing channel (p1 for RY/X, p2 for CNOT, p2 plus p1 on each qubit
// for RP, which is charged as one two-qubit and two one-qubit gates).
// MEASURE_Z dephases; CLASSICAL_X applies the conditioned Kraus map.
DensityMatrix run_density(const Circuit& c, const NoiseProfile& noise);

// Partial traces onto the system / ancilla registers of a full GSP state.
DensityMatrix reduced_system_state(const DensityMatrix& rho_full, int num_ancilla);
DensityMatrix reduced_ancilla_state(const DensityMatrix& rho_full, int num_ancilla);

// Z-basis diagonal of rho as a clipped, renormalized probability vector.
std::vector<double> z_probabilities(const DensityMatrix& rho);

// Sample a register of a full 2n-qubit state in the Z or X basis (X is
// realized by a Hadamard rotation before Z sampling). SPAM noise flips each
// readout bit independently with probability p_spam.
Counts sample_counts(const DensityMatrix& rho_full, int num_ancilla, Basis basis, Register reg,
                     long shots, double p_spam, RngStream& rng);

// Same, for a state that is already the register to be measured.
Counts sample_state(const DensityMatrix& rho, Basis basis, Register reg_tag, long shots,
                    double p_spam, RngStream& rng);

} // namespace gsp
