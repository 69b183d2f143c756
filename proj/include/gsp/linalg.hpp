#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace gsp {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// Qubit ordering convention, used everywhere in this library (states,
// operators, bitstrings): qubit 0 is the MOST significant bit of a basis
// index. For an m-qubit register, basis index b assigns qubit q the bit
// (b >> (m-1-q)) & 1, and character q of a bitstring is that same bit.
inline int qubit_bit(std::size_t index, int qubit, int num_qubits) {
    return static_cast<int>((index >> (num_qubits - 1 - qubit)) & 1u);
}

inline std::size_t dim_of(int num_qubits) { return std::size_t{1} << num_qubits; }

// Pure state of num_qubits qubits; amplitudes normalized to unit L2 norm.
struct StateVector {
    int num_qubits = 0;
    CVec amps;

    static StateVector zero_state(int num_qubits);
    void check_valid(double tol = 1e-10) const;
};

// Mixed state: Hermitian, trace-1, PSD matrix of dimension 2^num_qubits.
struct DensityMatrix {
    int num_qubits = 0;
    Mat mat;

    static DensityMatrix pure(const StateVector& psi);
    static DensityMatrix maximally_mixed(int num_qubits);
    void check_valid(double tol = 1e-10) const;
};

// A (not necessarily unitary) operator on a power-of-two dimensional space.
struct Operator {
    int num_qubits = 0;
    Mat mat;

    Operator() = default;
    Operator(int num_qubits, Mat m);
    explicit Operator(Mat m); // infers num_qubits, requires power-of-two dim
    std::size_t dim() const { return dim_of(num_qubits); }
};

// Eigendecomposition of a Hermitian operator: ascending eigenvalues and the
// unitary matrix whose columns are the matching eigenvectors.
struct Spectrum {
    RVec eigenvalues;
    Mat eigenvectors;
};

Mat pauli_i();
Mat pauli_x();
Mat pauli_y();
Mat pauli_z();
Mat hadamard();
Mat identity_op(std::size_t dim);

// Tensor product with a's index as the high-order index.
Mat kron(const Mat& a, const Mat& b);
Operator kron(const Operator& a, const Operator& b);

// Embed a k-qubit gate into an n-qubit register, acting on `targets` (gate
// qubit j maps onto register qubit targets[j]) and as identity elsewhere.
Mat embed(const Mat& gate, const std::vector<int>& targets, int n);
Operator embed(const Operator& gate, const std::vector<int>& targets, int n);

// Reduced state on the qubits in `keep` (ascending relative order kept).
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

bool is_hermitian(const Mat& m, double tol);

// Hermitian eigendecomposition; throws if h is not Hermitian within 1e-8.
Spectrum eigh(const Operator& h);

// exp(scale * h) for Hermitian h, computed through the spectrum.
Operator herm_exp(const Operator& h, double scale);

// -sum p_i ln p_i over the eigenvalues of rho (k_B = 1, nats). Eigenvalues
// below the 1e-15 floor contribute zero.
double von_neumann_entropy(const DensityMatrix& rho);

// Shannon entropy of a probability vector with the same clipping rule.
double shannon_entropy(const std::vector<double>& p);

// Uhlmann fidelity, squared convention: (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// (1/2) * trace norm of rho - sigma.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

} // namespace gsp
