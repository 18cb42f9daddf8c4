#include "jcloss/offresonant.hpp"

#include "jcloss/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>

#include <Eigen/Dense>

namespace jcloss {

namespace {

// Below this the recurrence subtraction for the leading rate loses too many
// digits and the divided-difference evaluation takes over.
constexpr double kDegenerateThreshold = 1e-6;

// Divided difference of exp(-tau x) over the given nodes, computed exactly as
// the (0,k) entry of exp(-tau Z) with Z the bidiagonal matrix carrying the
// nodes on the diagonal and ones on the superdiagonal (Opitz). Scaling and
// squaring with a Taylor series; the matrices here are tiny (k <= ~13).
double divided_difference_exp(double tau, const std::vector<double>& nodes) {
    const int m = static_cast<int>(nodes.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) a(i, i) = -tau * nodes[i];
    for (int i = 0; i + 1 < m; ++i) a(i, i + 1) = -tau;

    double norm = 0.0;
    for (int j = 0; j < m; ++j) {
        double col = 0.0;
        for (int i = 0; i < m; ++i) col += std::abs(a(i, j));
        norm = std::max(norm, col);
    }
    int squarings = 0;
    while (norm > 0.5) {
        norm *= 0.5;
        ++squarings;
    }
    a /= std::ldexp(1.0, squarings);

    Eigen::MatrixXd result = Eigen::MatrixXd::Identity(m, m);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(m, m);
    for (int j = 1; j <= 60; ++j) {
        term = (term * a) / static_cast<double>(j);
        result += term;
        if (term.cwiseAbs().maxCoeff() < 1e-20) break;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result(0, m - 1);
}

// I_k(tau; rates) with the nodes of the equivalent divided difference being
// the suffix sums of the rate list prefixed by zero. I_0 = 1.
class NestedExpIntegral {
  public:
    explicit NestedExpIntegral(double tau) : tau_(tau) {}

    double value(std::vector<double> rates) {
        if (tau_ == 0.0) return rates.empty() ? 1.0 : 0.0;
        return eval(std::move(rates));
    }

  private:
    double eval(std::vector<double> rates) {
        const std::size_t k = rates.size();
        if (k == 0) return 1.0;
        if (auto it = memo_.find(rates); it != memo_.end()) return it->second;

        double result;
        const double a1 = rates.front();
        if (k == 1) {
            result = a1 == 0.0 ? tau_ : -std::expm1(-a1 * tau_) / a1;
        } else if (std::abs(a1) * tau_ < kDegenerateThreshold) {
            std::vector<double> nodes(k + 1, 0.0);
            for (std::size_t j = k; j-- > 0;) nodes[j + 1] = rates[j] + (j + 1 < k ? nodes[j + 2] : 0.0);
            result = divided_difference_exp(tau_, nodes) * ((k % 2 == 0) ? 1.0 : -1.0);
        } else {
            std::vector<double> tail(rates.begin() + 1, rates.end());
            const double upper = eval(tail);
            tail[0] += a1;
            result = (upper - eval(std::move(tail))) / a1;
        }
        memo_.emplace(std::move(rates), result);
        return result;
    }

    double tau_;
    std::map<std::vector<double>, double> memo_;
};

void require_time(double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("time must be >= 0");
}

void require_flat_size(std::size_t size) {
    if (size % 2 == 0 || size < 1)
        throw std::invalid_argument("populations must have odd length 2*cutoff + 1");
}

// The two decay targets one sector down, or just the ground state from n = 1.
std::vector<DressedIndex> decay_targets(const DressedIndex& from) {
    if (from.n == 1) return {DressedIndex::ground()};
    return {DressedIndex::plus(from.n - 1), DressedIndex::minus(from.n - 1)};
}

struct PathAccumulator {
    const ModelParams& p;
    NestedExpIntegral& integrals;
    std::vector<double>& tilde;
    double weight0;

    void descend(const DressedIndex& from, double weight, std::vector<double>& rates) {
        for (const DressedIndex& to : decay_targets(from)) {
            const double elem = a_matrix_element(p, from, to);
            const double w = weight * elem * elem;
            if (w == 0.0) continue;
            rates.push_back(atilde_eigenvalue(p, from) - atilde_eigenvalue(p, to));
            tilde[to.flat()] += weight0 * w * integrals.value(rates);
            if (!to.is_ground()) descend(to, w, rates);
            rates.pop_back();
        }
    }
};

} // namespace

double kappa(int i, double c, const ModelParams& p) {
    if (i != 1 && i != 2) throw std::invalid_argument("kappa: branch must be 1 or 2");
    if (c == 0.0) throw std::domain_error("kappa: eigenvalue c must be nonzero");
    const double root = std::hypot(c, p.lambda);
    const double sign = (i == 1) ? -1.0 : 1.0;
    return 1.0 - 0.5 * p.delta * (1.0 / c + sign / root);
}

std::vector<double> q_apply(int i, const std::vector<double>& populations, const ModelParams& p) {
    if (i != 1 && i != 2) throw std::invalid_argument("q_apply: branch must be 1 or 2");
    require_flat_size(populations.size());
    const int cutoff = static_cast<int>((populations.size() - 1) / 2);
    const Branch source_branch = (i == 1) ? Branch::Plus : Branch::Minus;
    std::vector<double> out(populations.size(), 0.0);
    for (int n = 1; n <= cutoff; ++n) {
        const DressedIndex from =
            (source_branch == Branch::Plus) ? DressedIndex::plus(n) : DressedIndex::minus(n);
        const double occ = populations[from.flat()];
        if (occ == 0.0) continue;
        for (const DressedIndex& to : decay_targets(from)) {
            const double elem = a_matrix_element(p, from, to);
            out[to.flat()] += occ * elem * elem;
        }
    }
    return out;
}

double integral_In(double tau, std::span<const double> rates) {
    if (!(tau >= 0.0)) throw std::invalid_argument("integral_In: tau must be >= 0");
    if (rates.empty()) throw std::invalid_argument("integral_In: need at least one rate");
    NestedExpIntegral ev(tau);
    return ev.value(std::vector<double>(rates.begin(), rates.end()));
}

std::vector<double> evolve_diag_offres(const std::vector<double>& populations, double t,
                                       const ModelParams& p, int k_max) {
    require_time(t);
    require_flat_size(populations.size());
    if (k_max < 1) throw std::invalid_argument("evolve_diag_offres: k_max must be >= 1");
    for (std::size_t i = 0; i < populations.size(); ++i) {
        if (populations[i] != 0.0 && DressedIndex::from_flat(i).n > k_max)
            throw std::invalid_argument(
                "evolve_diag_offres: an occupied sector exceeds the path-sum depth k_max; "
                "raise k_max or use the brute-force integrator");
    }

    std::vector<double> tilde(populations.size(), 0.0);
    NestedExpIntegral integrals(p.gamma * t);
    for (std::size_t i = 0; i < populations.size(); ++i) {
        const double occ = populations[i];
        if (occ == 0.0) continue;
        tilde[i] += occ;
        const DressedIndex source = DressedIndex::from_flat(i);
        if (source.is_ground() || p.gamma * t == 0.0) continue;
        PathAccumulator acc{p, integrals, tilde, occ};
        std::vector<double> rates;
        rates.reserve(static_cast<std::size_t>(source.n));
        acc.descend(source, 1.0, rates);
    }

    std::vector<double> out(populations.size());
    for (std::size_t i = 0; i < populations.size(); ++i) {
        const double atilde = atilde_eigenvalue(p, DressedIndex::from_flat(i));
        out[i] = tilde[i] * std::exp(-p.gamma * atilde * t);
    }
    return out;
}

std::vector<std::complex<double>> evolve_offdiag_offres(
    const std::vector<std::complex<double>>& coherences, double t, const ModelParams& p) {
    require_time(t);
    std::vector<std::complex<double>> out(coherences.size());
    for (std::size_t k = 0; k < coherences.size(); ++k) {
        const int n = static_cast<int>(k) + 1;
        const double damp = std::exp(-p.gamma * (n - 0.5) * t);
        const double phase = -2.0 * epsilon(p, n) * t;
        out[k] = coherences[k] * std::polar(damp, phase);
    }
    return out;
}

DenseState evolve_largedelta(const DenseState& state, double t, const ModelParams& p) {
    require_time(t);
    if (state.basis != BasisKind::Bare)
        throw std::invalid_argument("evolve_largedelta: state must be in the bare basis");
    const int cutoff = state.cutoff;
    const int dim = state.dim();

    // Photon number and energy per slot under the bare reading (slot 2n =
    // |g,n>, slot 2n-1 = |e,n-1>). The unitary phases are the dressed-state
    // energies of the states the bare slots merge into; for delta < 0 the
    // identification swaps branches, so |g,n> carries sign(delta) eps_n.
    const double sign = (p.delta < 0.0) ? -1.0 : 1.0;
    std::vector<int> photons(dim);
    std::vector<double> energy(dim);
    for (int i = 0; i < dim; ++i) {
        const DressedIndex idx = DressedIndex::from_flat(i);
        if (idx.is_ground()) {
            photons[i] = 0;
            energy[i] = p.delta;
        } else if (idx.branch == Branch::Plus) {
            photons[i] = idx.n;
            energy[i] = sign * epsilon(p, idx.n);
        } else {
            photons[i] = idx.n - 1;
            energy[i] = -sign * epsilon(p, idx.n);
        }
    }

    DenseState out(BasisKind::Bare, cutoff);
    const double gt = p.gamma * t;
    const double u = -std::expm1(-gt);

    // Diagonal: binomial photon loss along each atomic chain.
    auto chain_slot = [cutoff](bool excited, int m) {
        if (excited) return 2 * (m + 1) - 1;
        return m == 0 ? 0 : 2 * m;
    };
    for (int excited = 0; excited <= 1; ++excited) {
        const int max_m = excited ? cutoff - 1 : cutoff;
        for (int src = 0; src <= max_m; ++src) {
            const double occ = state.rho(chain_slot(excited, src), chain_slot(excited, src)).real();
            if (occ == 0.0) continue;
            if (u == 0.0) {
                out.rho(chain_slot(excited, src), chain_slot(excited, src)) += occ;
                continue;
            }
            for (int dst = 0; dst <= src; ++dst) {
                const double log_binom = ln_factorial(src) - ln_factorial(dst) - ln_factorial(src - dst);
                const double w = std::exp(log_binom + (src - dst) * std::log(u) - gt * dst);
                out.rho(chain_slot(excited, dst), chain_slot(excited, dst)) += occ * w;
            }
        }
    }

    // Off-diagonal: unitary phase and photon-number damping.
    for (int r = 0; r < dim; ++r) {
        for (int s = 0; s < dim; ++s) {
            if (r == s) continue;
            const std::complex<double> val = state.rho(r, s);
            if (val == 0.0) continue;
            const double damp = std::exp(-0.5 * p.gamma * (photons[r] + photons[s]) * t);
            const double phase = -(energy[r] - energy[s]) * t;
            out.rho(r, s) = val * std::polar(damp, phase);
        }
    }
    return out;
}

} // namespace jcloss
