#include "jcloss/oracle.hpp"

#include "jcloss/specfun.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace jcloss {

namespace {

using Complex = std::complex<double>;
using Triplets = std::vector<Eigen::Triplet<Complex>>;

constexpr Complex kI{0.0, 1.0};

struct SparseOp {
    int dim;
    std::vector<Eigen::Triplet<double>> entries;

    void add(int row, int col, double value) {
        if (value != 0.0) entries.emplace_back(row, col, value);
    }
};

// Superoperator entries of rho -> A rho B over column-major vec(rho):
// [(r,s),(r',s')] = A(r,r') B(s',s).
void add_sandwich(Triplets& out, int dim, const SparseOp& a, const SparseOp& b, Complex coeff) {
    for (const auto& ea : a.entries) {
        for (const auto& eb : b.entries) {
            const int row = ea.row() + dim * eb.col();
            const int col = ea.col() + dim * eb.row();
            out.emplace_back(row, col, coeff * ea.value() * eb.value());
        }
    }
}

SparseOp identity_op(int dim) {
    SparseOp op{dim, {}};
    for (int i = 0; i < dim; ++i) op.add(i, i, 1.0);
    return op;
}

// Annihilation operator in the bare slot layout (two decoupled atomic chains).
SparseOp bare_annihilation(int cutoff) {
    const int dim = basis_dim(cutoff);
    SparseOp op{dim, {}};
    auto g_slot = [](int m) { return m == 0 ? 0 : 2 * m; };
    auto e_slot = [](int m) { return 2 * m + 1; };
    for (int m = 1; m <= cutoff; ++m) op.add(g_slot(m - 1), g_slot(m), std::sqrt(double(m)));
    for (int m = 1; m <= cutoff - 1; ++m) op.add(e_slot(m - 1), e_slot(m), std::sqrt(double(m)));
    return op;
}

SparseOp bare_number(int cutoff) {
    const int dim = basis_dim(cutoff);
    SparseOp op{dim, {}};
    for (int i = 1; i < dim; ++i) {
        const DressedIndex idx = DressedIndex::from_flat(i);
        op.add(i, i, idx.branch == Branch::Plus ? idx.n : idx.n - 1);
    }
    return op;
}

// H - omega N in the bare basis: delta on |g,n>, -delta on |e,n>, coupling
// lambda sqrt(n) within each excitation sector.
SparseOp bare_hamiltonian(const ModelParams& p, int cutoff) {
    const int dim = basis_dim(cutoff);
    SparseOp op{dim, {}};
    auto g_slot = [](int m) { return m == 0 ? 0 : 2 * m; };
    auto e_slot = [](int m) { return 2 * m + 1; };
    op.add(g_slot(0), g_slot(0), p.delta);
    for (int n = 1; n <= cutoff; ++n) {
        op.add(g_slot(n), g_slot(n), p.delta);
        op.add(e_slot(n - 1), e_slot(n - 1), -p.delta);
        const double coup = p.lambda * std::sqrt(double(n));
        op.add(g_slot(n), e_slot(n - 1), coup);
        op.add(e_slot(n - 1), g_slot(n), coup);
    }
    return op;
}

double stability_frequency(const ModelParams& p, int n_max) {
    return std::max({p.lambda, std::abs(p.delta), p.gamma, epsilon(p, n_max)});
}

Liouvillian finish(GeneratorKind kind, const ModelParams& p, int n_max, Triplets&& trips) {
    const int dim = basis_dim(n_max);
    Liouvillian liou{kind, p, n_max, stability_frequency(p, n_max), {}};
    liou.op.resize(dim * dim, dim * dim);
    liou.op.setFromTriplets(trips.begin(), trips.end());
    liou.op.makeCompressed();
    return liou;
}

double trace_of(const Eigen::VectorXcd& vec, int dim) {
    double tr = 0.0;
    for (int i = 0; i < dim; ++i) tr += vec[i + dim * i].real();
    return tr;
}

double hermiticity_of(const Eigen::VectorXcd& vec, int dim) {
    double worst = 0.0;
    for (int s = 0; s < dim; ++s)
        for (int r = 0; r <= s; ++r)
            worst = std::max(worst, std::abs(vec[r + dim * s] - std::conj(vec[s + dim * r])));
    return worst;
}

Observables observables_of(const ModelParams& p, const Eigen::VectorXcd& vec, int dim,
                           BasisKind basis) {
    const int cutoff = (dim - 1) / 2;
    if (basis == BasisKind::Dressed) {
        SectorState state(cutoff);
        for (int i = 0; i < dim; ++i) state.population[i] = vec[i + dim * i].real();
        for (int n = 1; n <= cutoff; ++n) {
            const int plus = DressedIndex::plus(n).flat();
            const int minus = DressedIndex::minus(n).flat();
            state.coherence[n - 1] = vec[plus + dim * minus];
        }
        return observables(p, state);
    }
    Observables o;
    o.p_0g = vec[0].real();
    for (int i = 0; i < dim; ++i) {
        const double pop = vec[i + dim * i].real();
        o.trace += pop;
        const DressedIndex idx = DressedIndex::from_flat(i);
        const bool ground_atom = idx.is_ground() || idx.branch == Branch::Plus;
        if (ground_atom) o.p_g += pop;
        o.n_photon += pop * (idx.is_ground() ? 0 : (idx.branch == Branch::Plus ? idx.n : idx.n - 1));
    }
    return o;
}

} // namespace

Liouvillian build_microscopic(const ModelParams& p, int n_max) {
    if (n_max < 1) throw std::invalid_argument("build_microscopic: n_max must be >= 1");
    const int dim = basis_dim(n_max);
    Triplets trips;
    trips.reserve(static_cast<std::size_t>(dim) * dim + 4 * dim);

    for (int s = 0; s < dim; ++s) {
        const DressedIndex is = DressedIndex::from_flat(s);
        for (int r = 0; r < dim; ++r) {
            const DressedIndex ir = DressedIndex::from_flat(r);
            const double damp =
                -0.5 * p.gamma * (atilde_eigenvalue(p, ir) + atilde_eigenvalue(p, is));
            const double phase = c_eigenvalue(p, ir) - c_eigenvalue(p, is);
            const Complex coeff = Complex(damp, 0.0) - kI * phase;
            if (coeff != Complex(0.0, 0.0))
                trips.emplace_back(r + dim * s, r + dim * s, coeff);
        }
    }
    // Jump term: populations feed populations one sector down.
    for (int r = 1; r < dim; ++r) {
        const DressedIndex from = DressedIndex::from_flat(r);
        const std::vector<DressedIndex> targets =
            from.n == 1 ? std::vector<DressedIndex>{DressedIndex::ground()}
                        : std::vector<DressedIndex>{DressedIndex::plus(from.n - 1),
                                                    DressedIndex::minus(from.n - 1)};
        for (const DressedIndex& to : targets) {
            const double elem = a_matrix_element(p, from, to);
            if (elem == 0.0) continue;
            const int t = to.flat();
            trips.emplace_back(t + dim * t, r + dim * r, Complex(p.gamma * elem * elem, 0.0));
        }
    }
    return finish(GeneratorKind::Microscopic, p, n_max, std::move(trips));
}

Liouvillian build_phenomenological(const ModelParams& p, int n_max) {
    if (n_max < 1) throw std::invalid_argument("build_phenomenological: n_max must be >= 1");
    const int dim = basis_dim(n_max);
    const SparseOp ident = identity_op(dim);
    const SparseOp h = bare_hamiltonian(p, n_max);
    const SparseOp a = bare_annihilation(n_max);
    SparseOp adag{dim, {}};
    for (const auto& e : a.entries) adag.add(e.col(), e.row(), e.value());
    const SparseOp num = bare_number(n_max);

    Triplets trips;
    add_sandwich(trips, dim, h, ident, -kI);
    add_sandwich(trips, dim, ident, h, kI);
    add_sandwich(trips, dim, a, adag, Complex(p.gamma, 0.0));
    add_sandwich(trips, dim, num, ident, Complex(-0.5 * p.gamma, 0.0));
    add_sandwich(trips, dim, ident, num, Complex(-0.5 * p.gamma, 0.0));
    return finish(GeneratorKind::Phenomenological, p, n_max, std::move(trips));
}

IntegrationResult integrate(const Liouvillian& liouvillian, const DenseState& rho0,
                            const std::vector<double>& t_grid, const IntegrateOptions& opts) {
    if (rho0.basis != liouvillian.basis())
        throw std::invalid_argument("integrate: state basis does not match the generator");
    if (rho0.cutoff != liouvillian.cutoff)
        throw std::invalid_argument("integrate: state cutoff does not match the generator");
    if (t_grid.empty() || t_grid.front() != 0.0)
        throw std::invalid_argument("integrate: time grid must start at 0");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1]))
            throw std::invalid_argument("integrate: time grid must be strictly increasing");

    const ModelParams& p = liouvillian.params;
    const int dim = liouvillian.dim();
    double h_max = 0.01 / liouvillian.max_frequency;
    if (p.gamma > 0.0) h_max = std::min(h_max, 0.1 / p.gamma);

    Eigen::VectorXcd state = Eigen::Map<const Eigen::VectorXcd>(rho0.rho.data(), dim * dim);
    const double trace0 = trace_of(state, dim);

    IntegrationResult result{TimeSeries{}, DenseState(rho0.basis, rho0.cutoff), 0.0, 0.0};
    result.series.append(t_grid[0], observables_of(p, state, dim, rho0.basis));

    Eigen::VectorXcd k1(dim * dim), k2(dim * dim), k3(dim * dim), k4(dim * dim);
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        const double span = t_grid[i] - t_grid[i - 1];
        const int steps = opts.substeps_per_interval > 0
                              ? opts.substeps_per_interval
                              : std::max(1, static_cast<int>(std::ceil(span / h_max)));
        const double h = span / steps;
        for (int s = 0; s < steps; ++s) {
            k1.noalias() = liouvillian.op * state;
            k2.noalias() = liouvillian.op * (state + (0.5 * h) * k1);
            k3.noalias() = liouvillian.op * (state + (0.5 * h) * k2);
            k4.noalias() = liouvillian.op * (state + h * k3);
            state += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        result.max_trace_drift =
            std::max(result.max_trace_drift, std::abs(trace_of(state, dim) - trace0));
        result.max_hermiticity_error =
            std::max(result.max_hermiticity_error, hermiticity_of(state, dim));
        result.series.append(t_grid[i], observables_of(p, state, dim, rho0.basis));
    }

    result.final_state.rho = Eigen::Map<const Eigen::MatrixXcd>(state.data(), dim, dim);
    return result;
}

// DenseState constructors and inspectors (declared in dense_state.hpp).

namespace {

Eigen::VectorXcd bare_to_basis_amplitudes(const ModelParams& p, const Eigen::VectorXd& bare,
                                          int cutoff, BasisKind basis) {
    const int dim = basis_dim(cutoff);
    Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(dim);
    if (basis == BasisKind::Bare) {
        amp = bare.cast<Complex>();
        return amp;
    }
    // |g,n> = cos(theta_n)|n,+> + sin(theta_n)|n,->,
    // |e,n-1> = sin(theta_n)|n,+> - cos(theta_n)|n,->.
    amp[0] = bare[0];
    for (int n = 1; n <= cutoff; ++n) {
        const Mixing m = mixing(p, n);
        const int g = 2 * n;
        const int e = 2 * n - 1;
        amp[DressedIndex::plus(n).flat()] = m.cos_theta * bare[g] + m.sin_theta * bare[e];
        amp[DressedIndex::minus(n).flat()] = m.sin_theta * bare[g] - m.cos_theta * bare[e];
    }
    return amp;
}

DenseState pure_state(const ModelParams& p, const Eigen::VectorXd& bare, int cutoff,
                      BasisKind basis) {
    DenseState state(basis, cutoff);
    const Eigen::VectorXcd amp = bare_to_basis_amplitudes(p, bare, cutoff, basis);
    state.rho = amp * amp.adjoint();
    return state;
}

} // namespace

DenseState dense_fock_g(const ModelParams& p, int n, int cutoff, BasisKind basis) {
    if (n < 0 || n > cutoff) throw std::invalid_argument("dense_fock_g: need 0 <= n <= cutoff");
    Eigen::VectorXd bare = Eigen::VectorXd::Zero(basis_dim(cutoff));
    bare[n == 0 ? 0 : 2 * n] = 1.0;
    return pure_state(p, bare, cutoff, basis);
}

DenseState dense_e0(const ModelParams& p, int cutoff, BasisKind basis) {
    if (cutoff < 1) throw std::invalid_argument("dense_e0: need cutoff >= 1");
    Eigen::VectorXd bare = Eigen::VectorXd::Zero(basis_dim(cutoff));
    bare[1] = 1.0;
    return pure_state(p, bare, cutoff, basis);
}

DenseState dense_coherent_g(const ModelParams& p, double alpha, int cutoff, BasisKind basis) {
    if (!(alpha > 0.0)) throw std::invalid_argument("dense_coherent_g: alpha must be > 0");
    if (cutoff < 1) throw std::invalid_argument("dense_coherent_g: need cutoff >= 1");
    Eigen::VectorXd bare = Eigen::VectorXd::Zero(basis_dim(cutoff));
    for (int n = 0; n <= cutoff; ++n) {
        const double ln_amp = -0.5 * alpha * alpha + n * std::log(alpha) - 0.5 * ln_factorial(n);
        bare[n == 0 ? 0 : 2 * n] = std::exp(ln_amp);
    }
    return pure_state(p, bare, cutoff, basis);
}

Observables observables(const ModelParams& p, const DenseState& state) {
    const int dim = state.dim();
    const Eigen::Map<const Eigen::VectorXcd> vec(state.rho.data(), dim * dim);
    return observables_of(p, vec, dim, state.basis);
}

std::vector<double> dressed_populations(const DenseState& state) {
    if (state.basis != BasisKind::Dressed)
        throw std::invalid_argument("dressed_populations: state is not in the dressed basis");
    std::vector<double> pops(state.dim());
    for (int i = 0; i < state.dim(); ++i) pops[i] = state.rho(i, i).real();
    return pops;
}

double hermiticity_error(const DenseState& state) {
    return (state.rho - state.rho.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const DenseState& state) {
    const Eigen::MatrixXcd herm = 0.5 * (state.rho + state.rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm);
    return solver.eigenvalues().minCoeff();
}

} // namespace jcloss
