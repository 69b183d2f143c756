#pragma once

// Shared generators and small oracles for the test suites. Everything is
// seeded through RngStream so failures reproduce exactly.

#include "gsp/circuit.hpp"
#include "gsp/linalg.hpp"
#include "gsp/rng.hpp"

#include <cmath>
#include <vector>

namespace gsp::testing {

inline Mat random_ginibre(int dim, RngStream& rng) {
    Mat g(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c)
            g(r, c) = cplx(rng.gauss(), rng.gauss());
    return g;
}

inline Operator random_hermitian(int num_qubits, RngStream& rng) {
    const int dim = static_cast<int>(dim_of(num_qubits));
    Mat g = random_ginibre(dim, rng);
    return Operator(num_qubits, 0.5 * (g + Mat(g.adjoint())));
}

inline Mat random_unitary(int dim, RngStream& rng) {
    Eigen::HouseholderQR<Mat> qr(random_ginibre(dim, rng));
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < dim; ++i) {
        cplx d = r(i, i);
        q.col(i) *= (std::abs(d) > 0) ? d / std::abs(d) : cplx(1.0);
    }
    return q;
}

inline StateVector random_pure_state(int num_qubits, RngStream& rng) {
    StateVector psi;
    psi.num_qubits = num_qubits;
    const int dim = static_cast<int>(dim_of(num_qubits));
    psi.amps = CVec(dim);
    for (Eigen::Index i = 0; i < dim; ++i) psi.amps(i) = cplx(rng.gauss(), rng.gauss());
    psi.amps /= psi.amps.norm();
    return psi;
}

inline DensityMatrix random_density(int num_qubits, RngStream& rng) {
    const int dim = static_cast<int>(dim_of(num_qubits));
    Mat g = random_ginibre(dim, rng);
    Mat psd = g * g.adjoint();
    DensityMatrix rho;
    rho.num_qubits = num_qubits;
    rho.mat = psd / psd.trace().real();
    return rho;
}

inline ParamSet random_params(int n, std::uint64_t seed) {
    return param_init(n, 1, 1, seed);
}

// Independent oracle for the n=2 periodic TFIM spectrum (doubled bond):
// block {|00>,|11>} is [[-2h,-1],[-1,2h]], block {|01>,|10>} is
// [[0,-1],[-1,0]], so the eigenvalues are -r, -1, 1, r with r = sqrt(1+4h^2).
inline std::vector<double> tfim2_spectrum_oracle(double h) {
    const double r = std::sqrt(1.0 + 4.0 * h * h);
    return {-r, -1.0, 1.0, r};
}

// Ground eigenvector of the even block, (cos eta)|00> + (sin eta)|11>.
inline std::pair<double, double> tfim2_ground_even_oracle(double h) {
    const double r = std::sqrt(1.0 + 4.0 * h * h);
    const double x = 1.0, y = r - 2.0 * h; // unnormalized
    const double norm = std::sqrt(x * x + y * y);
    return {x / norm, y / norm};
}

} // namespace gsp::testing
