#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gsp/tfim.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace gsp;
using namespace gsp::testing;

TEST_CASE("tfim spectrum n=2") {
    // oracle: analytic 2x2 block diagonalization (doubled bond at n=2)
    const Spectrum s = eigh(tfim_hamiltonian({2, 1.0}));
    const auto expected = tfim2_spectrum_oracle(1.0);
    for (int i = 0; i < 4; ++i)
        CHECK(s.eigenvalues(i) ==
              doctest::Approx(expected[static_cast<std::size_t>(i)]).epsilon(1e-12));
    CHECK(expected[3] == doctest::Approx(std::sqrt(5.0)));

    // h=0: pure XX coupling gives (-1, -1, 1, 1)
    const Spectrum s0 = eigh(tfim_hamiltonian({2, 0.0}));
    CHECK(s0.eigenvalues(0) == doctest::Approx(-1.0));
    CHECK(s0.eigenvalues(1) == doctest::Approx(-1.0));
    CHECK(s0.eigenvalues(2) == doctest::Approx(1.0));
    CHECK(s0.eigenvalues(3) == doctest::Approx(1.0));

    CHECK_THROWS(tfim_hamiltonian({1, 1.0}));
}

TEST_CASE("tfim is traceless and hermitian") {
    for (int n = 2; n <= 5; ++n) {
        for (double h : {0.0, 0.5, 1.0, 1.5}) {
            const Operator ham = tfim_hamiltonian({n, h});
            CHECK(std::abs(ham.mat.trace()) < 1e-12);
            CHECK(is_hermitian(ham.mat, 1e-12));
        }
    }
}

TEST_CASE("translation symmetry") {
    // the cyclic one-site shift permutation commutes with H
    for (int n : {2, 3, 4}) {
        const Operator ham = tfim_hamiltonian({n, 0.7});
        const std::size_t dim = dim_of(n);
        Mat shift = Mat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
        for (std::size_t b = 0; b < dim; ++b) {
            // rotate qubits: qubit q of the image takes qubit (q+1) mod n
            std::size_t out = 0;
            for (int q = 0; q < n; ++q) {
                const int src = (q + 1) % n;
                if ((b >> (n - 1 - src)) & 1u) out |= std::size_t{1} << (n - 1 - q);
            }
            shift(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(b)) = 1.0;
        }
        CHECK((shift * ham.mat - ham.mat * shift).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("exact gibbs basics") {
    const GibbsTarget t0 = GibbsTarget::make({2, 1.0}, 0.0);
    const DensityMatrix mm = exact_gibbs(t0);
    CHECK((mm.mat - 0.25 * identity_op(4)).cwiseAbs().maxCoeff() < 1e-14);

    const GibbsTarget tiny = GibbsTarget::make({2, 1.0}, 1e-8);
    CHECK(uhlmann_fidelity(exact_gibbs(tiny), DensityMatrix::maximally_mixed(2)) >= 1.0 - 1e-6);

    // large beta: ground-state projector of eigenvalue -sqrt(5)
    const GibbsTarget cold = GibbsTarget::make({2, 1.0}, 50.0);
    const auto [c0, c1] = tfim2_ground_even_oracle(1.0);
    StateVector ground;
    ground.num_qubits = 2;
    ground.amps = CVec::Zero(4);
    ground.amps(0) = c0;
    ground.amps(3) = c1;
    CHECK(uhlmann_fidelity(exact_gibbs(cold), DensityMatrix::pure(ground)) >= 0.999);

    exact_gibbs(cold).check_valid(1e-9);
}

TEST_CASE("gibbs commutes with hamiltonian") {
    for (double beta : {0.3, 1.0, 5.0}) {
        const GibbsTarget t = GibbsTarget::make({3, 0.5}, beta);
        const DensityMatrix rho = exact_gibbs(t);
        CHECK((rho.mat * t.hamiltonian.mat - t.hamiltonian.mat * rho.mat).cwiseAbs().maxCoeff() <
              1e-8);
    }
}

TEST_CASE("partition function") {
    const GibbsTarget t0 = GibbsTarget::make({3, 1.0}, 0.0);
    CHECK(partition_function(t0) == doctest::Approx(8.0).epsilon(1e-12));

    // n=2, h=1, beta=1: 2 cosh(sqrt5) + 2 cosh(1), from the analytic spectrum
    const GibbsTarget t1 = GibbsTarget::make({2, 1.0}, 1.0);
    const double expected = 2.0 * std::cosh(std::sqrt(5.0)) + 2.0 * std::cosh(1.0);
    CHECK(partition_function(t1) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(12.5496).epsilon(1e-4));

    const GibbsTarget t2 = GibbsTarget::make({2, 1.0}, 1e-8);
    CHECK(partition_function(t2) == doctest::Approx(4.0).epsilon(1e-6));

    // herm_exp route agrees: tr exp(-H) at n=2, h=1
    const Operator ham = tfim_hamiltonian({2, 1.0});
    CHECK(herm_exp(ham, -1.0).mat.trace().real() == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("log convexity of Z") {
    const TFIMParams p{3, 1.5};
    GibbsTarget t = GibbsTarget::make(p, 0.1);
    std::vector<double> lnz;
    for (int i = 0; i < 30; ++i) {
        t.beta = 0.1 + 0.2 * i;
        lnz.push_back(std::log(partition_function(t)));
    }
    for (std::size_t i = 1; i + 1 < lnz.size(); ++i)
        CHECK(lnz[i + 1] - 2.0 * lnz[i] + lnz[i - 1] >= -1e-9);
}

TEST_CASE("free energy") {
    const GibbsTarget t = GibbsTarget::make({2, 1.0}, 2.0);
    // maximally mixed: tr(H rho) = 0 for traceless H, S = n ln 2
    CHECK(free_energy(DensityMatrix::maximally_mixed(2), t) ==
          doctest::Approx(-2.0 * std::log(2.0) / 2.0).epsilon(1e-12));

    // Gibbs state attains -ln(Z)/beta
    const DensityMatrix gibbs = exact_gibbs(t);
    CHECK(free_energy(gibbs, t) ==
          doctest::Approx(-std::log(partition_function(t)) / t.beta).epsilon(1e-10));

    const GibbsTarget bad = GibbsTarget::make({2, 1.0}, 0.0);
    CHECK_THROWS(free_energy(gibbs, bad));
}

TEST_CASE("variational principle") {
    RngStream rng(31);
    for (int n = 2; n <= 3; ++n) {
        for (double h : {0.5, 1.0, 1.5}) {
            for (double beta : {1e-8, 1.0, 5.0}) {
                const GibbsTarget t = GibbsTarget::make({n, h}, beta);
                const double f_gibbs = free_energy(exact_gibbs(t), t);
                for (int trial = 0; trial < 50; ++trial) {
                    const DensityMatrix rho = random_density(n, rng);
                    CHECK(free_energy(rho, t) >= f_gibbs - 1e-10);
                }
            }
        }
    }
}

TEST_CASE("free energy strictly above gibbs for separated states") {
    RngStream rng(37);
    const GibbsTarget t = GibbsTarget::make({2, 1.0}, 1.0);
    const DensityMatrix gibbs = exact_gibbs(t);
    const double f_gibbs = free_energy(gibbs, t);
    int checked = 0;
    for (int trial = 0; trial < 200 && checked < 50; ++trial) {
        // mix the Gibbs state toward a random state and renormalize
        DensityMatrix pert = random_density(2, rng);
        DensityMatrix mix;
        mix.num_qubits = 2;
        const double eps = rng.uniform(0.01, 0.5);
        mix.mat = (1.0 - eps) * gibbs.mat + eps * pert.mat;
        if (trace_distance(mix, gibbs) < 1e-3) continue;
        ++checked;
        CHECK(free_energy(mix, t) > f_gibbs + 1e-12);
    }
    CHECK(checked == 50);
}
