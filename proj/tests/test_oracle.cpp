#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jcloss/oracle.hpp"
#include "jcloss/resonant.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>

using namespace jcloss;
using Complex = std::complex<double>;

namespace {

// L acting on a density matrix via the vectorized superoperator.
Eigen::MatrixXcd apply_generator(const Liouvillian& gen, const Eigen::MatrixXcd& rho) {
    const int d = gen.dim();
    const Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho.data(), d * d);
    const Eigen::VectorXcd w = gen.op * v;
    return Eigen::Map<const Eigen::MatrixXcd>(w.data(), d, d);
}

Eigen::MatrixXcd random_density(int d, std::mt19937& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXcd m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = Complex(g(rng), g(rng));
    Eigen::MatrixXcd rho = m * m.adjoint();
    rho /= rho.trace().real();
    return rho;
}

} // namespace

TEST_CASE("both generators annihilate the trace") {
    std::mt19937 rng(3);
    for (double delta : {0.0, 0.7, -2.0}) {
        const ModelParams p(1.0, delta, 0.3);
        for (auto build : {build_microscopic, build_phenomenological}) {
            const Liouvillian gen = build(p, 4);
            for (int trial = 0; trial < 5; ++trial) {
                const Eigen::MatrixXcd rho = random_density(gen.dim(), rng);
                const Eigen::MatrixXcd drho = apply_generator(gen, rho);
                CHECK(std::abs(drho.trace()) < 1e-12);
            }
        }
    }
}

TEST_CASE("stationary states") {
    const ModelParams p(1.0, 0.4, 0.25);

    const Liouvillian ms = build_microscopic(p, 3);
    Eigen::MatrixXcd ground = Eigen::MatrixXcd::Zero(ms.dim(), ms.dim());
    ground(0, 0) = 1.0;
    CHECK(apply_generator(ms, ground).cwiseAbs().maxCoeff() < 1e-14);

    const Liouvillian ph = build_phenomenological(p, 3);
    Eigen::MatrixXcd vacuum = Eigen::MatrixXcd::Zero(ph.dim(), ph.dim());
    vacuum(0, 0) = 1.0; // |g,0>
    CHECK(apply_generator(ph, vacuum).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("dressed-basis generator: single-excitation rates on resonance") {
    const ModelParams p(1.0, 0.0, 0.4);
    const Liouvillian gen = build_microscopic(p, 2);
    const int plus = DressedIndex::plus(1).flat();

    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(gen.dim(), gen.dim());
    rho(plus, plus) = 1.0;
    const Eigen::MatrixXcd drho = apply_generator(gen, rho);
    CHECK(drho(plus, plus).real() == doctest::Approx(-0.5 * p.gamma).epsilon(1e-14));
    CHECK(drho(0, 0).real() == doctest::Approx(0.5 * p.gamma).epsilon(1e-14));
    CHECK(std::abs(drho.trace()) < 1e-15);
}

TEST_CASE("dressed-basis integration reproduces the closed forms") {
    const ModelParams p(1.0, 0.0, 0.2);
    std::vector<double> grid;
    for (int i = 0; i <= 20; ++i) grid.push_back(0.5 * i);
    for (int n : {1, 2, 3, 5}) {
        const Liouvillian gen = build_microscopic(p, n);
        const DenseState rho0 = dense_fock_g(p, n, n, BasisKind::Dressed);
        const IntegrationResult res = integrate(gen, rho0, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(res.series.p_g[i] ==
                  doctest::Approx(fock_pg(n, grid[i], p)).epsilon(1e-6));
            CHECK(res.series.n_photon[i] ==
                  doctest::Approx(fock_nphoton(n, grid[i], p)).scale(1.0).epsilon(1e-6));
        }
        CHECK(res.max_trace_drift < 1e-10);
        CHECK(res.max_hermiticity_error < 1e-12);
    }
}

TEST_CASE("bare-basis generator: pure photon decay when the coupling vanishes") {
    const ModelParams p(1e-8, 0.0, 0.5);
    const Liouvillian gen = build_phenomenological(p, 2);
    DenseState rho0(BasisKind::Bare, 2);
    rho0.rho(4, 4) = 1.0; // |g,2>
    const double t = 0.9;
    const IntegrationResult res = integrate(gen, rho0, {0.0, t});
    const double u = -std::expm1(-p.gamma * t);
    const double e2 = std::exp(-2.0 * p.gamma * t);
    CHECK(res.final_state.rho(4, 4).real() == doctest::Approx(e2).epsilon(1e-5));
    CHECK(res.final_state.rho(2, 2).real() ==
          doctest::Approx(2.0 * u * std::exp(-p.gamma * t)).epsilon(1e-5));
    CHECK(res.final_state.rho(0, 0).real() == doctest::Approx(u * u).epsilon(1e-5));
}

TEST_CASE("integration keeps trace, hermiticity and positivity") {
    std::mt19937 rng(9);
    const ModelParams p(1.0, 0.6, 0.3);
    const std::vector<double> grid = {0.0, 1.0, 2.0, 4.0};

    for (auto build : {build_microscopic, build_phenomenological}) {
        const Liouvillian gen = build(p, 3);
        DenseState rho0(gen.basis(), 3);
        rho0.rho = random_density(gen.dim(), rng);
        const IntegrationResult res = integrate(gen, rho0, grid);
        CHECK(res.max_trace_drift < 1e-8);
        CHECK(res.max_hermiticity_error < 1e-12);
        CHECK(min_eigenvalue(res.final_state) > -1e-7);
        CHECK(hermiticity_error(res.final_state) < 1e-12);
    }
}

TEST_CASE("integrator converges at fourth order") {
    const ModelParams p(1.0, 0.3, 0.2);
    const Liouvillian gen = build_phenomenological(p, 2);
    DenseState rho0(BasisKind::Bare, 2);
    rho0.rho(4, 4) = 0.5;
    rho0.rho(2, 2) = 0.5;
    rho0.rho(4, 2) = 0.5;
    rho0.rho(2, 4) = 0.5;
    const std::vector<double> grid = {0.0, 1.0};

    auto final_rho = [&](int substeps) {
        IntegrateOptions opts;
        opts.substeps_per_interval = substeps;
        return integrate(gen, rho0, grid, opts).final_state.rho;
    };

    const Eigen::MatrixXcd fine = final_rho(256);
    const double err4 = (final_rho(4) - fine).cwiseAbs().maxCoeff();
    const double err8 = (final_rho(8) - fine).cwiseAbs().maxCoeff();
    const double ratio = err4 / err8;
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
}

TEST_CASE("grid validation") {
    const ModelParams p(1.0, 0.0, 0.2);
    const Liouvillian gen = build_microscopic(p, 1);
    const DenseState rho0 = dense_fock_g(p, 1, 1, BasisKind::Dressed);
    CHECK_THROWS_AS(integrate(gen, rho0, {0.5, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(integrate(gen, rho0, {0.0, 1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(integrate(gen, rho0, {}), std::invalid_argument);
    const DenseState wrong = dense_fock_g(p, 1, 1, BasisKind::Bare);
    CHECK_THROWS_AS(integrate(gen, wrong, {0.0, 1.0}), std::invalid_argument);
    const DenseState small = dense_fock_g(p, 1, 2, BasisKind::Dressed);
    CHECK_THROWS_AS(integrate(gen, small, {0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("dense initial states") {
    const ModelParams p(1.0, 0.8, 0.2);

    const DenseState fock_d = dense_fock_g(p, 2, 3, BasisKind::Dressed);
    const Observables od = observables(p, fock_d);
    CHECK(od.trace == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(od.p_g == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(od.n_photon == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(od.p_0g == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(hermiticity_error(fock_d) < 1e-15);
    CHECK(min_eigenvalue(fock_d) > -1e-15);

    const DenseState fock_b = dense_fock_g(p, 2, 3, BasisKind::Bare);
    const Observables ob = observables(p, fock_b);
    CHECK(ob.p_g == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ob.n_photon == doctest::Approx(2.0).epsilon(1e-14));

    const DenseState e0 = dense_e0(p, 2, BasisKind::Bare);
    const Observables oe = observables(p, e0);
    CHECK(oe.p_g == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(oe.n_photon == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(oe.trace == doctest::Approx(1.0).epsilon(1e-14));

    // The two basis readings of the same coherent state agree on observables.
    const DenseState coh_d = dense_coherent_g(p, 1.3, 20, BasisKind::Dressed);
    const DenseState coh_b = dense_coherent_g(p, 1.3, 20, BasisKind::Bare);
    const Observables ocd = observables(p, coh_d);
    const Observables ocb = observables(p, coh_b);
    CHECK(ocd.p_g == doctest::Approx(ocb.p_g).epsilon(1e-12));
    CHECK(ocd.n_photon == doctest::Approx(ocb.n_photon).epsilon(1e-12));
    CHECK(ocd.p_0g == doctest::Approx(ocb.p_0g).epsilon(1e-12));
    CHECK(ocd.trace == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ocb.n_photon == doctest::Approx(1.3 * 1.3).epsilon(1e-9));

    CHECK_THROWS_AS(dense_fock_g(p, 3, 2, BasisKind::Bare), std::invalid_argument);
    CHECK_THROWS_AS(dense_coherent_g(p, -1.0, 5, BasisKind::Bare), std::invalid_argument);
}
