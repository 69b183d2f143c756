#include "gsp/tfim.hpp"

#include <cmath>
#include <stdexcept>

namespace gsp {

Operator tfim_hamiltonian(const TFIMParams& p) {
    if (p.n < 2) throw std::invalid_argument("tfim_hamiltonian: n must be >= 2");
    const int n = p.n;
    const std::size_t dim = dim_of(n);
    Mat h = Mat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    const Mat sx = pauli_x(), sz = pauli_z();
    const Mat sxsx = kron(sx, sx);
    for (int i = 0; i < n; ++i) {
        h += -0.5 * embed(sxsx, {i, (i + 1) % n}, n);
        h += -p.h * embed(sz, {i}, n);
    }
    return Operator(n, std::move(h));
}

GibbsTarget GibbsTarget::make(const TFIMParams& p, double beta) {
    if (beta < 0.0) throw std::invalid_argument("GibbsTarget: beta must be >= 0");
    GibbsTarget t;
    t.params = p;
    t.beta = beta;
    t.hamiltonian = tfim_hamiltonian(p);
    t.spectrum = eigh(t.hamiltonian);
    return t;
}

DensityMatrix exact_gibbs(const GibbsTarget& t) {
    const RVec& e = t.spectrum.eigenvalues;
    RVec w = (-t.beta * (e.array() - e.minCoeff())).exp();
    w /= w.sum();
    DensityMatrix rho;
    rho.num_qubits = t.params.n;
    rho.mat = t.spectrum.eigenvectors * w.asDiagonal() * t.spectrum.eigenvectors.adjoint();
    // Hermitize away the rounding from the similarity transform.
    rho.mat = 0.5 * (rho.mat + Mat(rho.mat.adjoint()));
    return rho;
}

double partition_function(const GibbsTarget& t) {
    return (-t.beta * t.spectrum.eigenvalues.array()).exp().sum();
}

double free_energy(const DensityMatrix& rho, const GibbsTarget& t) {
    if (t.beta <= 0.0) throw std::invalid_argument("free_energy: beta must be > 0");
    if (rho.num_qubits != t.params.n)
        throw std::invalid_argument("free_energy: state dimension does not match target");
    const double energy = (t.hamiltonian.mat * rho.mat).trace().real();
    return energy - von_neumann_entropy(rho) / t.beta;
}

} // namespace gsp
