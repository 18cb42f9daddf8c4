#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jcloss/offresonant.hpp"
#include "jcloss/oracle.hpp"
#include "jcloss/resonant.hpp"
#include "testutil.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

using namespace jcloss;

namespace {

std::vector<double> random_populations(int cutoff, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> pops(basis_dim(cutoff));
    for (double& x : pops) x = dist(rng);
    return pops;
}

double sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

} // namespace

TEST_CASE("branch rate factors") {
    const ModelParams p(4.0, 3.0, 0.1); // eps_1 = 5
    CHECK(kappa(1, 3.0, p) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(kappa(2, 3.0, p) == doctest::Approx(0.2).epsilon(1e-15));

    const ModelParams resonant_p(4.0, 0.0, 0.1);
    CHECK(kappa(1, 2.5, resonant_p) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(kappa(2, -0.7, resonant_p) == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(kappa(1, 0.0, p), std::domain_error);
    CHECK_THROWS_AS(kappa(3, 1.0, p), std::invalid_argument);
}

TEST_CASE("every allowed jump rate is a branch factor at the target eigenvalue") {
    for (double delta : {-2.0, -0.3, 0.5, 3.0}) {
        const ModelParams p(1.0, delta, 0.2);
        for (int n = 1; n <= 6; ++n) {
            for (Branch b : {Branch::Plus, Branch::Minus}) {
                const DressedIndex from = (b == Branch::Plus) ? DressedIndex::plus(n)
                                                              : DressedIndex::minus(n);
                const int branch_id = (b == Branch::Plus) ? 1 : 2;
                std::vector<DressedIndex> targets;
                if (n == 1) {
                    targets = {DressedIndex::ground()};
                } else {
                    targets = {DressedIndex::plus(n - 1), DressedIndex::minus(n - 1)};
                }
                for (const DressedIndex& to : targets) {
                    const double rate =
                        atilde_eigenvalue(p, from) - atilde_eigenvalue(p, to);
                    const double factor = kappa(branch_id, c_eigenvalue(p, to), p);
                    CHECK(rate == doctest::Approx(factor).epsilon(1e-14));
                }
            }
        }
    }
}

TEST_CASE("branch routing of populations") {
    const ModelParams p(1.0, 0.75, 0.2);
    std::vector<double> pops(basis_dim(2), 0.0);
    pops[DressedIndex::plus(1).flat()] = 1.0;

    const auto out1 = q_apply(1, pops, p);
    const Mixing m1 = mixing(p, 1);
    CHECK(out1[0] == doctest::Approx(m1.cos_theta * m1.cos_theta).epsilon(1e-14));
    CHECK(sum(out1) == doctest::Approx(m1.cos_theta * m1.cos_theta).epsilon(1e-14));

    // Branch 2 ignores Plus sources entirely.
    const auto out2 = q_apply(2, pops, p);
    CHECK(sum(out2) == 0.0);

    // At huge positive detuning Minus(1) barely reaches the ground state.
    const ModelParams far(1.0, 1e8, 0.2);
    std::vector<double> minus_pop(basis_dim(1), 0.0);
    minus_pop[DressedIndex::minus(1).flat()] = 1.0;
    const auto trickle = q_apply(2, minus_pop, far);
    CHECK(trickle[0] < 1e-15);

    CHECK_THROWS_AS(q_apply(3, pops, p), std::invalid_argument);
    CHECK_THROWS_AS(q_apply(1, std::vector<double>(4, 0.0), p), std::invalid_argument);
}

TEST_CASE("at zero detuning the two branch maps sum to the resonant ladder") {
    const ModelParams p(1.0, 0.0, 0.2);
    std::mt19937 rng(11);
    const int cutoff = 5;
    const std::vector<double> pops = random_populations(cutoff, rng);

    auto q_total = q_apply(1, pops, p);
    const auto q2 = q_apply(2, pops, p);
    for (std::size_t i = 0; i < q_total.size(); ++i) q_total[i] += q2[i];

    SectorState st(cutoff);
    st.population = pops;
    PiBasisVector ladder = k2_apply(to_pi_basis(st));
    SectorState expected(cutoff);
    set_populations(expected, ladder);

    for (std::size_t i = 0; i < q_total.size(); ++i)
        CHECK(q_total[i] == doctest::Approx(expected.population[i]).epsilon(1e-13));
}

TEST_CASE("nested exponential integrals: endpoints and frozen references") {
    const double one[] = {1.0};
    CHECK(integral_In(1.0, one) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-15));
    const double zero[] = {0.0};
    CHECK(integral_In(2.5, zero) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(integral_In(0.0, one) == 0.0);

    const double pair[] = {1.0, 1.0};
    CHECK(integral_In(1.0, pair) == doctest::Approx(0.19978820044686402435).epsilon(1e-14));
    const double triple[] = {1.0, 0.5, 2.0};
    CHECK(integral_In(0.7, triple) == doctest::Approx(0.0153271623232145432).epsilon(1e-13));

    // Tiny leading rate agrees with the exact zero-rate limit
    // I_2(1; 0, 1) = 1 - 2/e.
    const double near_zero[] = {1e-9, 1.0};
    CHECK(integral_In(1.0, near_zero) ==
          doctest::Approx(1.0 - 2.0 * std::exp(-1.0)).epsilon(1e-8));
    const double exact_zero[] = {0.0, 1.0};
    CHECK(integral_In(1.0, exact_zero) ==
          doctest::Approx(1.0 - 2.0 * std::exp(-1.0)).epsilon(1e-14));

    CHECK_THROWS_AS(integral_In(-1.0, one), std::invalid_argument);
    CHECK_THROWS_AS(integral_In(1.0, std::span<const double>{}), std::invalid_argument);
}

TEST_CASE("nested exponential integrals match direct quadrature") {
    const testutil::GaussLegendre gl(24);
    std::mt19937 rng(2026);
    std::uniform_real_distribution<double> rate_dist(0.0, 3.0);
    std::uniform_int_distribution<int> len_dist(1, 4);
    std::uniform_int_distribution<int> mutate(0, 9);

    for (int trial = 0; trial < 100; ++trial) {
        const int k = len_dist(rng);
        std::vector<double> rates(k);
        for (double& a : rates) a = rate_dist(rng);
        // Sprinkle in exact zeros and duplicated entries.
        if (k >= 2 && mutate(rng) < 3) rates[1] = rates[0];
        if (mutate(rng) < 2) rates[0] = 0.0;
        for (double tau : {0.3, 1.7}) {
            const double exact = integral_In(tau, rates);
            const double quad = testutil::nested_exp_integral(tau, rates, gl);
            CHECK(exact == doctest::Approx(quad).epsilon(1e-8));
        }
    }
}

TEST_CASE("detuned diagonal evolution: identity at t = 0 and closed single-excitation forms") {
    std::mt19937 rng(5);
    const ModelParams p0(1.0, 0.8, 0.3);
    const std::vector<double> pops = random_populations(3, rng);
    const auto same = evolve_diag_offres(pops, 0.0, p0);
    for (std::size_t i = 0; i < pops.size(); ++i)
        CHECK(same[i] == doctest::Approx(pops[i]).epsilon(1e-15));

    for (double delta : {0.1, 1.0, 5.0}) {
        const ModelParams p(1.0, delta, 0.25);
        std::vector<double> one(basis_dim(1), 0.0);
        one[DressedIndex::plus(1).flat()] = 0.6;
        one[DressedIndex::minus(1).flat()] = 0.4;
        const double ap = atilde_eigenvalue(p, DressedIndex::plus(1));
        const double am = atilde_eigenvalue(p, DressedIndex::minus(1));
        for (double t : {0.5, 2.0, 12.0}) {
            const auto out = evolve_diag_offres(one, t, p);
            const double sp = 0.6 * std::exp(-p.gamma * ap * t);
            const double sm = 0.4 * std::exp(-p.gamma * am * t);
            CHECK(out[DressedIndex::plus(1).flat()] == doctest::Approx(sp).epsilon(1e-14));
            CHECK(out[DressedIndex::minus(1).flat()] == doctest::Approx(sm).epsilon(1e-14));
            CHECK(out[0] == doctest::Approx(1.0 - sp - sm).epsilon(1e-14));
        }
    }
}

TEST_CASE("detuned diagonal evolution preserves trace and positivity") {
    std::mt19937 rng(17);
    for (double delta : {-1.5, 0.4, 6.0}) {
        const ModelParams p(1.0, delta, 0.2);
        const std::vector<double> pops = random_populations(8, rng);
        const double tr0 = sum(pops);
        for (double t : {0.3, 2.0, 10.0}) {
            const auto out = evolve_diag_offres(pops, t, p);
            CHECK(sum(out) == doctest::Approx(tr0).epsilon(1e-11));
            for (double x : out) CHECK(x >= -1e-12);
        }
    }
}

TEST_CASE("detuned diagonal evolution joins the resonant solution as delta -> 0") {
    std::mt19937 rng(23);
    const std::vector<double> pops = random_populations(4, rng);
    const double t = 1.3;

    const ModelParams near(1.0, 1e-6, 0.25);
    const auto detuned = evolve_diag_offres(pops, t, near);

    const ModelParams res(1.0, 0.0, 0.25);
    SectorState st(4);
    st.population = pops;
    SectorState ref(4);
    set_populations(ref, evolve_diag(to_pi_basis(st), t, res));

    for (std::size_t i = 0; i < pops.size(); ++i)
        CHECK(detuned[i] == doctest::Approx(ref.population[i]).epsilon(1e-5));
}

TEST_CASE("path-sum depth limit is enforced") {
    const ModelParams p(1.0, 0.5, 0.2);
    std::vector<double> deep(basis_dim(13), 0.0);
    deep[DressedIndex::plus(13).flat()] = 1.0;
    CHECK_THROWS_AS(evolve_diag_offres(deep, 1.0, p), std::invalid_argument);

    std::vector<double> shallow(basis_dim(4), 0.0);
    shallow[DressedIndex::plus(4).flat()] = 1.0;
    CHECK_THROWS_AS(evolve_diag_offres(shallow, 1.0, p, 3), std::invalid_argument);
    CHECK_NOTHROW(evolve_diag_offres(shallow, 1.0, p, 4));
    CHECK_THROWS_AS(evolve_diag_offres(shallow, 1.0, p, 0), std::invalid_argument);
}

TEST_CASE("detuned coherence evolution: damping and phase") {
    const ModelParams p(1.0, 1.5, 0.3);
    std::vector<std::complex<double>> coh(2, 0.0);
    coh[1] = std::complex<double>(0.2, -0.1);
    const double t = 2.1;
    const auto out = evolve_offdiag_offres(coh, t, p);
    const std::complex<double> expected =
        coh[1] * std::polar(std::exp(-p.gamma * 1.5 * t), -2.0 * epsilon(p, 2) * t);
    CHECK(out[1].real() == doctest::Approx(expected.real()).epsilon(1e-13));
    CHECK(out[1].imag() == doctest::Approx(expected.imag()).epsilon(1e-13));
    CHECK(out[0] == std::complex<double>(0.0, 0.0));
}

TEST_CASE("far-detuned propagator: stationary and decaying bare states") {
    const ModelParams p(1.0, 40.0, 0.3);

    DenseState excited(BasisKind::Bare, 2);
    excited.rho(1, 1) = 1.0; // |e,0>
    const DenseState still = evolve_largedelta(excited, 5.0, p);
    CHECK(std::abs(still.rho(1, 1) - 1.0) < 1e-14);
    CHECK(std::abs(still.rho(2, 2)) < 1e-14);

    DenseState one_photon(BasisKind::Bare, 2);
    one_photon.rho(2, 2) = 1.0; // |g,1>
    const double t = 1.4;
    const DenseState decayed = evolve_largedelta(one_photon, t, p);
    CHECK(decayed.rho(2, 2).real() == doctest::Approx(std::exp(-p.gamma * t)).epsilon(1e-14));
    CHECK(decayed.rho(0, 0).real() == doctest::Approx(-std::expm1(-p.gamma * t)).epsilon(1e-14));

    // |g,3> spreads binomially over the photon ladder.
    DenseState three(BasisKind::Bare, 3);
    three.rho(6, 6) = 1.0;
    const DenseState spread = evolve_largedelta(three, t, p);
    const double u = -std::expm1(-p.gamma * t);
    const double binom[] = {1.0, 3.0, 3.0, 1.0};
    for (int k = 0; k <= 3; ++k) {
        const int slot = (k == 0) ? 0 : 2 * k;
        const double expect =
            binom[k] * std::pow(u, 3 - k) * std::exp(-p.gamma * k * t);
        CHECK(spread.rho(slot, slot).real() == doctest::Approx(expect).epsilon(1e-13));
    }

    // Off-diagonals damp with half the summed photon numbers.
    DenseState sup(BasisKind::Bare, 1);
    sup.rho(0, 0) = 0.5;
    sup.rho(2, 2) = 0.5;
    sup.rho(2, 0) = 0.5;
    sup.rho(0, 2) = 0.5;
    const DenseState dsup = evolve_largedelta(sup, t, p);
    CHECK(std::abs(dsup.rho(2, 0)) == doctest::Approx(0.5 * std::exp(-0.5 * p.gamma * t)).epsilon(1e-13));

    DenseState wrong(BasisKind::Dressed, 1);
    wrong.rho(0, 0) = 1.0;
    CHECK_THROWS_AS(evolve_largedelta(wrong, 1.0, p), std::invalid_argument);
}

TEST_CASE("far-detuned propagator converges to the dressed-basis integrator") {
    const double lambda = 1.0, gamma = 0.2;
    const std::vector<double> t_grid = {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};

    auto sup_error = [&](double delta) {
        const ModelParams p(lambda, delta, gamma);
        const Mixing m = mixing(p, 1);

        // (|g,0> + |g,1>)/sqrt(2), built in both bases.
        DenseState bare(BasisKind::Bare, 2);
        bare.rho(0, 0) = 0.5;
        bare.rho(2, 2) = 0.5;
        bare.rho(2, 0) = 0.5;
        bare.rho(0, 2) = 0.5;

        Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(basis_dim(2));
        psi(0) = 1.0 / std::sqrt(2.0);
        psi(DressedIndex::plus(1).flat()) = m.cos_theta / std::sqrt(2.0);
        psi(DressedIndex::minus(1).flat()) = m.sin_theta / std::sqrt(2.0);
        DenseState dressed(BasisKind::Dressed, 2);
        dressed.rho = psi * psi.adjoint();

        const Liouvillian gen = build_microscopic(p, 2);
        const IntegrationResult ref = integrate(gen, dressed, t_grid);

        double err = 0.0;
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            const DenseState approx = evolve_largedelta(bare, t_grid[i], p);
            const Observables oa = observables(p, approx);
            err = std::max(err, std::abs(oa.p_g - ref.series.p_g[i]));
            err = std::max(err, std::abs(oa.n_photon - ref.series.n_photon[i]));
            err = std::max(err, std::abs(oa.p_0g - ref.series.p_0g[i]));
        }
        return err;
    };

    const double e1 = sup_error(1.0);
    const double e3 = sup_error(3.0);
    const double e10 = sup_error(10.0);
    const double e30 = sup_error(30.0);
    CHECK(e1 > e3);
    CHECK(e3 > e10);
    CHECK(e10 > e30);
    CHECK(e30 < 2e-3);

    // The branch identification flips with the sign of the detuning.
    CHECK(sup_error(-10.0) < sup_error(3.0));
}
