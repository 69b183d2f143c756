#pragma once

#include "gsp/linalg.hpp"

namespace gsp {

struct TFIMParams {
    int n = 2;
    double h = 1.0;
};

// Transverse-field Ising Hamiltonian with periodic boundaries:
//   H = -1/2 sum_{i=1..n} sx_i sx_{i+1} - h sum_i sz_i,   index n+1 == 1.
// At n = 2 the cyclic sum visits the single bond twice; both terms are kept,
// so that bond carries coupling -1. The same convention is used by the
// energy estimator.
Operator tfim_hamiltonian(const TFIMParams& p);

// Target thermal state (H, beta) with the exact-diagonalization spectrum
// cached at construction. Immutable afterwards.
struct GibbsTarget {
    TFIMParams params;
    double beta = 1.0;
    Operator hamiltonian;
    Spectrum spectrum;

    static GibbsTarget make(const TFIMParams& p, double beta);
};

// exp(-beta H)/Z through the cached spectrum; the spectrum is shifted by
// its minimum before exponentiation so large beta cannot overflow.
DensityMatrix exact_gibbs(const GibbsTarget& t);

// Z(beta) = sum_i exp(-beta E_i).
double partition_function(const GibbsTarget& t);

// tr(H rho) - S(rho)/beta. Requires beta > 0.
double free_energy(const DensityMatrix& rho, const GibbsTarget& t);

} // namespace gsp
