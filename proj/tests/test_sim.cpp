#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gsp/simulate.hpp"
#include "gsp/tfim.hpp"
#include "gsp/vqa.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace gsp;
using namespace gsp::testing;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("builtin profiles match the device table") {
    const auto profiles = builtin_profiles();
    REQUIRE(profiles.size() == 4);

    const NoiseProfile none = find_profile("noiseless");
    CHECK(none.p1 == 0.0);
    CHECK(none.p2 == 0.0);
    CHECK(none.p_spam == 0.0);

    const NoiseProfile aria = find_profile("aria1");
    CHECK(aria.p1 == doctest::Approx(2e-4));
    CHECK(aria.p2 == doctest::Approx(0.0201));
    CHECK(aria.p_spam == doctest::Approx(0.0049));

    const NoiseProfile forte = find_profile("forte1");
    CHECK(forte.p2 == doctest::Approx(0.0151));
    CHECK(forte.p_spam == doctest::Approx(0.0054));

    const NoiseProfile ent = find_profile("forte-ent1");
    CHECK(ent.p2 == doctest::Approx(0.0085));
    CHECK(ent.p_spam == doctest::Approx(0.0061));

    CHECK_THROWS(find_profile("nope"));
}

TEST_CASE("run_statevector basics") {
    Circuit empty;
    empty.num_qubits = 2;
    StateVector psi = run_statevector(empty);
    CHECK(std::abs(psi.amps(0) - cplx(1.0)) < 1e-15);

    // RY(pi) on qubit 0 of 2: |00> -> |10> up to global phase
    Circuit flip;
    flip.num_qubits = 2;
    flip.ops.push_back(GateOp::ry(0, kPi));
    psi = run_statevector(flip);
    CHECK(std::abs(std::abs(psi.amps(2)) - 1.0) < 1e-12);

    ParamSet zero;
    zero.n = 2;
    zero.theta.assign(4, 0.0);
    zero.phi.assign(4, 0.0);
    psi = run_statevector(build_gsp_circuit(zero));
    CHECK(std::abs(psi.amps(0) - cplx(1.0)) < 1e-12);

    Circuit measured;
    measured.num_qubits = 1;
    measured.ops.push_back(GateOp::measure_z(0));
    CHECK_THROWS(run_statevector(measured));
}

TEST_CASE("noiseless density equals statevector") {
    const NoiseProfile none = find_profile("noiseless");
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        Circuit c = build_gsp_circuit(param_init(2, 1, 1, seed));
        DensityMatrix rho = run_density(c, none);
        DensityMatrix pure = DensityMatrix::pure(run_statevector(c));
        CHECK((rho.mat - pure.mat).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("full depolarization gives maximally mixed") {
    Circuit flip;
    flip.num_qubits = 1;
    flip.ops.push_back(GateOp::ry(0, kPi));
    NoiseProfile full{"full", 1.0, 1.0, 0.0, {}};
    DensityMatrix rho = run_density(flip, full);
    CHECK((rho.mat - 0.5 * identity_op(2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("depolarizing channel keeps states valid and mixes toward I") {
    RngStream rng(17);
    for (const auto& profile : builtin_profiles()) {
        Circuit c = build_gsp_circuit(param_init(2, 1, 1, rng.next_u64()));
        DensityMatrix rho = run_density(c, profile);
        rho.check_valid(1e-9);
    }
}

TEST_CASE("feedforward equals transversal cnots noiselessly") {
    const NoiseProfile none = find_profile("noiseless");
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const ParamSet p = param_init(2, 1, 1, seed);
        const DensityMatrix a =
            reduced_system_state(run_density(build_gsp_circuit(p), none), 2);
        const DensityMatrix b =
            reduced_system_state(run_density(build_feedforward_variant(p), none), 2);
        CHECK(trace_distance(a, b) < 1e-10);
    }
}

TEST_CASE("reduced states") {
    RngStream rng(23);
    DensityMatrix ra = random_density(1, rng);
    DensityMatrix rs = random_density(1, rng);
    DensityMatrix joint;
    joint.num_qubits = 2;
    joint.mat = kron(ra.mat, rs.mat);
    CHECK((reduced_ancilla_state(joint, 1).mat - ra.mat).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((reduced_system_state(joint, 1).mat - rs.mat).cwiseAbs().maxCoeff() < 1e-12);

    Circuit c = build_gsp_circuit(param_init(3, 1, 1, 7));
    DensityMatrix rho = run_density(c, find_profile("aria1"));
    CHECK(reduced_system_state(rho, 3).mat.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(reduced_ancilla_state(rho, 3).mat.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("noiseless ancilla is diagonal and carries the system spectrum") {
    const NoiseProfile none = find_profile("noiseless");
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        for (int n : {2, 3}) {
            Circuit c = build_gsp_circuit(param_init(n, 1, 1, seed));
            DensityMatrix rho = run_density(c, none);
            DensityMatrix rho_a = reduced_ancilla_state(rho, n);
            DensityMatrix rho_s = reduced_system_state(rho, n);

            Mat offdiag = rho_a.mat;
            offdiag.diagonal().setZero();
            CHECK(offdiag.cwiseAbs().maxCoeff() < 1e-10);

            std::vector<double> diag;
            for (Eigen::Index i = 0; i < rho_a.mat.rows(); ++i)
                diag.push_back(rho_a.mat(i, i).real());
            std::sort(diag.begin(), diag.end());
            Eigen::SelfAdjointEigenSolver<Mat> es(rho_s.mat, Eigen::EigenvaluesOnly);
            for (std::size_t i = 0; i < diag.size(); ++i)
                CHECK(std::abs(diag[i] - es.eigenvalues()(static_cast<Eigen::Index>(i))) < 1e-10);
        }
    }
}

TEST_CASE("sampling deterministic cases") {
    RngStream rng(29);
    DensityMatrix zero2 = DensityMatrix::pure(StateVector::zero_state(2));
    Counts c = sample_state(zero2, Basis::Z, Register::System, 100, 0.0, rng);
    CHECK(c.histogram.at("00") == 100);

    // |++> sampled in the X basis is all "00"
    StateVector plus;
    plus.num_qubits = 2;
    plus.amps = CVec::Constant(4, 0.5);
    Counts cx = sample_state(DensityMatrix::pure(plus), Basis::X, Register::System, 50, 0.0, rng);
    CHECK(cx.histogram.at("00") == 50);
    CHECK(cx.basis == Basis::X);

    CHECK_THROWS(sample_state(zero2, Basis::Z, Register::System, 0, 0.0, rng));
}

TEST_CASE("sampling statistics on the maximally mixed state") {
    RngStream rng(31);
    const long shots = 1 << 16;
    Counts c = sample_state(DensityMatrix::maximally_mixed(1), Basis::Z, Register::System, shots,
                            0.0, rng);
    // binomial 5 sigma: p = 0.5, sigma ~ 0.002
    const double f0 = static_cast<double>(c.histogram.at("0")) / shots;
    CHECK(f0 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("spam noise flips readout bits") {
    RngStream rng(33);
    DensityMatrix zero = DensityMatrix::pure(StateVector::zero_state(1));
    const long shots = 1 << 16;
    Counts c = sample_state(zero, Basis::Z, Register::System, shots, 0.1, rng);
    const double f1 = static_cast<double>(c.histogram.count("1") ? c.histogram.at("1") : 0) / shots;
    CHECK(f1 == doctest::Approx(0.1).epsilon(0.1));
}

TEST_CASE("sample_counts reduces the right register") {
    // ancilla |1>, system |0>
    Circuit c;
    c.num_qubits = 2;
    c.num_ancilla = 1;
    c.ops.push_back(GateOp::ry(0, kPi));
    DensityMatrix rho = run_density(c, find_profile("noiseless"));
    RngStream rng(35);
    Counts ca = sample_counts(rho, 1, Basis::Z, Register::Ancilla, 10, 0.0, rng);
    CHECK(ca.histogram.at("1") == 10);
    Counts cs = sample_counts(rho, 1, Basis::Z, Register::System, 10, 0.0, rng);
    CHECK(cs.histogram.at("0") == 10);
}

TEST_CASE("sampling is deterministic per seed") {
    DensityMatrix mm = DensityMatrix::maximally_mixed(2);
    RngStream a(77), b(77), c(78);
    Counts ca = sample_state(mm, Basis::Z, Register::System, 1000, 0.01, a);
    Counts cb = sample_state(mm, Basis::Z, Register::System, 1000, 0.01, b);
    Counts cc = sample_state(mm, Basis::Z, Register::System, 1000, 0.01, c);
    CHECK(ca.histogram == cb.histogram);
    CHECK(ca.histogram != cc.histogram);
}

TEST_CASE("counts text round trip") {
    DensityMatrix mm = DensityMatrix::maximally_mixed(2);
    RngStream rng(41);
    Counts c = sample_state(mm, Basis::X, Register::Ancilla, 500, 0.0, rng);
    Counts back = Counts::from_text(c.to_text());
    CHECK(back.basis == c.basis);
    CHECK(back.reg == c.reg);
    CHECK(back.shots == c.shots);
    CHECK(back.histogram == c.histogram);

    CHECK_THROWS(Counts::from_text("basis=Z shots=2 register=S\n00 1\n"));  // sums to 1, not 2
    CHECK_THROWS(Counts::from_text("basis=Z size=2\n"));                    // unknown key
}

TEST_CASE("channel monotonicity under p2 scaling") {
    // Fidelity against the target is non-increasing as two-qubit noise grows,
    // evaluated on a briefly trained n=2 instance at beta = 5.
    const GibbsTarget target = GibbsTarget::make({2, 1.0}, 5.0);
    const NoiseProfile none = find_profile("noiseless");
    TrainOptions opts;
    opts.max_iterations = 40;
    const OptResult trained = train(target, none, 2, 4242, opts);
    const DensityMatrix gibbs = exact_gibbs(target);

    const NoiseProfile aria = find_profile("aria1");
    double prev = 2.0;
    for (double scale : {0.0, 0.5, 1.0, 2.0}) {
        NoiseProfile p = aria;
        p.p2 = aria.p2 * scale;
        p.name = "scaled";
        const DensityMatrix rho = prepare_system_state(trained.best_params, p);
        const double f = uhlmann_fidelity(rho, gibbs);
        CHECK(f <= prev + 1e-9);
        prev = f;
    }
}
