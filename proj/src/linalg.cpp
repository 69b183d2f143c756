#include "gsp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gsp {

namespace {

int qubits_for_dim(std::size_t dim) {
    int n = 0;
    std::size_t d = 1;
    while (d < dim) {
        d <<= 1;
        ++n;
    }
    if (d != dim) throw std::invalid_argument("dimension is not a power of 2");
    return n;
}

} // namespace

StateVector StateVector::zero_state(int num_qubits) {
    StateVector psi;
    psi.num_qubits = num_qubits;
    psi.amps = CVec::Zero(static_cast<Eigen::Index>(dim_of(num_qubits)));
    psi.amps(0) = 1.0;
    return psi;
}

void StateVector::check_valid(double tol) const {
    if (amps.size() != static_cast<Eigen::Index>(dim_of(num_qubits)))
        throw std::invalid_argument("state vector length != 2^num_qubits");
    if (std::abs(amps.norm() - 1.0) > tol)
        throw std::invalid_argument("state vector is not normalized");
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
    DensityMatrix rho;
    rho.num_qubits = psi.num_qubits;
    rho.mat = psi.amps * psi.amps.adjoint();
    return rho;
}

DensityMatrix DensityMatrix::maximally_mixed(int num_qubits) {
    DensityMatrix rho;
    rho.num_qubits = num_qubits;
    const auto d = static_cast<Eigen::Index>(dim_of(num_qubits));
    rho.mat = Mat::Identity(d, d) / static_cast<double>(d);
    return rho;
}

void DensityMatrix::check_valid(double tol) const {
    const auto d = static_cast<Eigen::Index>(dim_of(num_qubits));
    if (mat.rows() != d || mat.cols() != d)
        throw std::invalid_argument("density matrix dimension != 2^num_qubits");
    if (!is_hermitian(mat, tol))
        throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(mat.trace().real() - 1.0) > tol || std::abs(mat.trace().imag()) > tol)
        throw std::invalid_argument("density matrix trace != 1");
    Eigen::SelfAdjointEigenSolver<Mat> es(mat, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol)
        throw std::invalid_argument("density matrix has negative eigenvalues");
}

Operator::Operator(int nq, Mat m) : num_qubits(nq), mat(std::move(m)) {
    const auto d = static_cast<Eigen::Index>(dim_of(num_qubits));
    if (mat.rows() != d || mat.cols() != d)
        throw std::invalid_argument("operator matrix shape does not match num_qubits");
}

Operator::Operator(Mat m) : mat(std::move(m)) {
    if (mat.rows() != mat.cols()) throw std::invalid_argument("operator matrix not square");
    num_qubits = qubits_for_dim(static_cast<std::size_t>(mat.rows()));
}

Mat pauli_i() { return Mat::Identity(2, 2); }

Mat pauli_x() {
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Mat pauli_y() {
    Mat m(2, 2);
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}

Mat pauli_z() {
    Mat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Mat hadamard() {
    Mat m(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    m << s, s, s, -s;
    return m;
}

Mat identity_op(std::size_t dim) {
    return Mat::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Operator kron(const Operator& a, const Operator& b) {
    return Operator(a.num_qubits + b.num_qubits, kron(a.mat, b.mat));
}

Mat embed(const Mat& gate, const std::vector<int>& targets, int n) {
    const int k = static_cast<int>(targets.size());
    if (gate.rows() != gate.cols() ||
        gate.rows() != static_cast<Eigen::Index>(dim_of(k)))
        throw std::invalid_argument("embed: gate dimension != 2^|targets|");
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int t : targets) {
        if (t < 0 || t >= n) throw std::invalid_argument("embed: target out of range");
        if (seen[static_cast<std::size_t>(t)]) throw std::invalid_argument("embed: duplicate target");
        seen[static_cast<std::size_t>(t)] = true;
    }

    const std::size_t dim = dim_of(n);
    const std::size_t gdim = dim_of(k);
    Mat out = Mat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < dim; ++r) {
        std::size_t tr = 0; // gate-local row index: targets[0] is its MSB
        for (int j = 0; j < k; ++j)
            tr = (tr << 1) | static_cast<std::size_t>(qubit_bit(r, targets[j], n));
        for (std::size_t tc = 0; tc < gdim; ++tc) {
            std::size_t c = r;
            for (int j = 0; j < k; ++j) {
                const std::size_t mask = std::size_t{1} << (n - 1 - targets[j]);
                if ((tc >> (k - 1 - j)) & 1u)
                    c |= mask;
                else
                    c &= ~mask;
            }
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) +=
                gate(static_cast<Eigen::Index>(tr), static_cast<Eigen::Index>(tc));
        }
    }
    return out;
}

Operator embed(const Operator& gate, const std::vector<int>& targets, int n) {
    return Operator(n, embed(gate.mat, targets, n));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
    const int n = rho.num_qubits;
    if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
    std::vector<int> kq(keep);
    std::sort(kq.begin(), kq.end());
    if (std::adjacent_find(kq.begin(), kq.end()) != kq.end())
        throw std::invalid_argument("partial_trace: duplicate qubit in keep set");
    if (kq.front() < 0 || kq.back() >= n)
        throw std::invalid_argument("partial_trace: keep qubit out of range");

    std::vector<int> traced;
    for (int q = 0; q < n; ++q)
        if (!std::binary_search(kq.begin(), kq.end(), q)) traced.push_back(q);

    const int k = static_cast<int>(kq.size());
    const int t = static_cast<int>(traced.size());
    const std::size_t kdim = dim_of(k);
    const std::size_t tdim = dim_of(t);

    auto scatter = [&](std::size_t keep_idx, std::size_t traced_idx) {
        std::size_t full = 0;
        for (int j = 0; j < k; ++j)
            if ((keep_idx >> (k - 1 - j)) & 1u) full |= std::size_t{1} << (n - 1 - kq[static_cast<std::size_t>(j)]);
        for (int j = 0; j < t; ++j)
            if ((traced_idx >> (t - 1 - j)) & 1u) full |= std::size_t{1} << (n - 1 - traced[static_cast<std::size_t>(j)]);
        return full;
    };

    DensityMatrix out;
    out.num_qubits = k;
    out.mat = Mat::Zero(static_cast<Eigen::Index>(kdim), static_cast<Eigen::Index>(kdim));
    for (std::size_t r = 0; r < kdim; ++r) {
        for (std::size_t c = 0; c < kdim; ++c) {
            cplx acc = 0.0;
            for (std::size_t ti = 0; ti < tdim; ++ti)
                acc += rho.mat(static_cast<Eigen::Index>(scatter(r, ti)),
                               static_cast<Eigen::Index>(scatter(c, ti)));
            out.mat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc;
        }
    }
    return out;
}

bool is_hermitian(const Mat& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Spectrum eigh(const Operator& h) {
    if (!is_hermitian(h.mat, 1e-8))
        throw std::invalid_argument("eigh: operator is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es(h.mat);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigh: eigensolver failed");
    Spectrum s;
    s.eigenvalues = es.eigenvalues();
    s.eigenvectors = es.eigenvectors();
    return s;
}

Operator herm_exp(const Operator& h, double scale) {
    Spectrum s = eigh(h);
    RVec expd = (scale * s.eigenvalues.array()).exp();
    Mat out = s.eigenvectors * expd.asDiagonal() * s.eigenvectors.adjoint();
    return Operator(h.num_qubits, std::move(out));
}

namespace {
constexpr double kEigFloor = 1e-15;
}

double von_neumann_entropy(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<Mat> es(rho.mat, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double p = es.eigenvalues()(i);
        if (p > kEigFloor) s -= p * std::log(p);
    }
    return s;
}

double shannon_entropy(const std::vector<double>& p) {
    double s = 0.0;
    for (double v : p)
        if (v > kEigFloor) s -= v * std::log(v);
    return s;
}

double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.num_qubits != sigma.num_qubits)
        throw std::invalid_argument("uhlmann_fidelity: dimension mismatch");
    // sqrt(rho) by eigendecomposition with negative eigenvalues clipped to 0.
    Eigen::SelfAdjointEigenSolver<Mat> es(rho.mat);
    RVec lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Mat sq = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
    Mat inner = sq * sigma.mat * sq;
    // inner is Hermitian PSD up to rounding; symmetrize before diagonalizing.
    inner = 0.5 * (inner + Mat(inner.adjoint()));
    Eigen::SelfAdjointEigenSolver<Mat> es2(inner, Eigen::EigenvaluesOnly);
    double tr = 0.0;
    for (Eigen::Index i = 0; i < es2.eigenvalues().size(); ++i)
        tr += std::sqrt(std::max(0.0, es2.eigenvalues()(i)));
    return tr * tr;
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.num_qubits != sigma.num_qubits)
        throw std::invalid_argument("trace_distance: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Mat> es(rho.mat - sigma.mat, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

} // namespace gsp
