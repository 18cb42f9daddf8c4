#include "jcloss/resonant.hpp"

#include "jcloss/specfun.hpp"

#include <cmath>
#include <stdexcept>

namespace jcloss {

namespace {

void require_resonant(const ModelParams& p, const char* where) {
    if (p.delta != 0.0) {
        throw std::invalid_argument(std::string(where) + ": requires delta == 0");
    }
}

void require_nonnegative_time(double t, const char* where) {
    if (!(t >= 0.0)) throw std::invalid_argument(std::string(where) + ": t must be >= 0");
}

// (2n-1)!! / ((n-1)! 2^n); grows only like sqrt(n/pi).
double half_binomial_ratio(int n) {
    return std::exp(ln_odd_double_factorial(n) - ln_factorial(n - 1) - n * std::log(2.0));
}

// Ladder transfer factors of [1 + sum c_l K2^(l+1)] e^(damping handled by the
// caller): weight carried from Pi_{n+-} to Pi_{m+-}, m < n, with l = n-m rungs
// and c_{l-1} = u^l / l! folded in. Log-space keeps u^l and the Pochhammer
// growth from over/underflowing separately.
double transfer_plus(int n, int m, double ln_u) {
    const int l = n - m;
    return std::exp(l * ln_u + ln_pochhammer(m + 0.5, l) - ln_factorial(l));
}

double transfer_minus(int n, int m, double ln_u) {
    const int l = n - m;
    const double half_ln =
        0.5 * (ln_factorial(n) + ln_factorial(n - 1) - ln_factorial(m) - ln_factorial(m - 1));
    return std::exp(l * ln_u + half_ln - ln_factorial(l));
}

// Weight carried from Pi_{n+} all the way down to Pi_0: the last rung
// K2 Pi_{1+} = Pi_0 contributes factor 1, so the chain coefficient is
// (3/2)_{n-1} and c_{n-1}(t, on Pi_0) = B(n,1/2;u)/(n-1)!, which combine to
// 2 (2n-1)!!/((n-1)! 2^n) B(n,1/2;u), a number in [0,2].
double transfer_ground(int n, double u) {
    return 2.0 * half_binomial_ratio(n) * incomplete_beta(n, 0.5, u);
}

} // namespace

PiBasisVector to_pi_basis(const SectorState& state) {
    PiBasisVector v(state.cutoff);
    v.pi0 = state.pop(DressedIndex::ground());
    for (int n = 1; n <= state.cutoff; ++n) {
        const double pp = state.pop(DressedIndex::plus(n));
        const double pm = state.pop(DressedIndex::minus(n));
        v.plus[n - 1] = 0.5 * (pp + pm);
        v.minus[n - 1] = 0.5 * (pp - pm);
    }
    return v;
}

void set_populations(SectorState& state, const PiBasisVector& v) {
    if (state.cutoff != v.cutoff) {
        throw std::invalid_argument("set_populations: cutoff mismatch");
    }
    state.pop(DressedIndex::ground()) = v.pi0;
    for (int n = 1; n <= v.cutoff; ++n) {
        state.pop(DressedIndex::plus(n)) = v.plus[n - 1] + v.minus[n - 1];
        state.pop(DressedIndex::minus(n)) = v.plus[n - 1] - v.minus[n - 1];
    }
}

PiBasisVector k2_apply(const PiBasisVector& v) {
    PiBasisVector out(v.cutoff);
    if (v.cutoff >= 1) out.pi0 = v.plus[0];
    for (int m = 1; m < v.cutoff; ++m) {
        out.plus[m - 1] = (m + 0.5) * v.plus[m];
        out.minus[m - 1] = std::sqrt(static_cast<double>(m + 1) * m) * v.minus[m];
    }
    return out;
}

PiBasisVector k2_power(const PiBasisVector& v, int l) {
    if (l < 0) throw std::invalid_argument("k2_power: l must be >= 0");
    if (l == 0) return v;
    PiBasisVector out(v.cutoff);
    if (l <= v.cutoff) {
        // Pi_{l+} reaches Pi_0 with coefficient (3/2)_{l-1}.
        out.pi0 = v.plus[l - 1] * (l - 1 > 30 ? std::exp(ln_pochhammer(1.5, l - 1))
                                              : pochhammer(1.5, l - 1));
    }
    for (int m = 1; m + l <= v.cutoff; ++m) {
        const int n = m + l;
        out.plus[m - 1] = v.plus[n - 1] * (l > 30 ? std::exp(ln_pochhammer(m + 0.5, l))
                                                  : pochhammer(m + 0.5, l));
        const double half_ln = 0.5 * (ln_factorial(n) + ln_factorial(n - 1) -
                                      ln_factorial(m) - ln_factorial(m - 1));
        out.minus[m - 1] = v.minus[n - 1] * std::exp(half_ln);
    }
    return out;
}

double c_coeff(int n, double gamma_t, bool on_ground) {
    if (n < 0) throw std::invalid_argument("c_coeff: n must be >= 0");
    if (!(gamma_t >= 0.0)) throw std::invalid_argument("c_coeff: gamma_t must be >= 0");
    const double p = on_ground ? 1.0 : 0.0;
    if (n <= 20) {
        long double sum = 0.0L;
        long double comp = 0.0L;
        for (int k = 0; k <= n; ++k) {
            const long double rate = 1.0L + k - p / 2.0L;
            long double denom = 1.0L;
            for (int j = 2; j <= k; ++j) denom *= j;
            for (int j = 2; j <= n - k; ++j) denom *= j;
            long double term = -std::expm1l(-rate * gamma_t) / (rate * denom);
            if (k % 2 == 1) term = -term;
            const long double y = term - comp;
            const long double s = sum + y;
            comp = (s - sum) - y;
            sum = s;
        }
        return static_cast<double>(sum);
    }
    const double u = -std::expm1(-gamma_t);
    if (!on_ground) {
        if (u == 0.0) return 0.0;
        return std::exp((n + 1) * std::log(u) - ln_factorial(n + 1));
    }
    return incomplete_beta(n + 1, 0.5, u) * std::exp(-ln_factorial(n));
}

PiBasisVector evolve_diag(const PiBasisVector& v0, double t, const ModelParams& p) {
    require_resonant(p, "evolve_diag");
    require_nonnegative_time(t, "evolve_diag");
    const int N = v0.cutoff;
    const double gt = p.gamma * t;
    const double u = -std::expm1(-gt);
    const double ln_u = u > 0.0 ? std::log(u) : 0.0;

    PiBasisVector out(N);
    out.pi0 = v0.pi0;
    for (int n = 1; n <= N; ++n) {
        const double vp = v0.plus[n - 1];
        const double vm = v0.minus[n - 1];
        if (vp != 0.0) {
            out.plus[n - 1] += vp;
            if (u > 0.0) {
                for (int m = 1; m < n; ++m) out.plus[m - 1] += vp * transfer_plus(n, m, ln_u);
                out.pi0 += vp * transfer_ground(n, u);
            }
        }
        if (vm != 0.0) {
            out.minus[n - 1] += vm;
            if (u > 0.0) {
                for (int m = 1; m < n; ++m) out.minus[m - 1] += vm * transfer_minus(n, m, ln_u);
            }
        }
    }
    for (int m = 1; m <= N; ++m) {
        const double damp = std::exp(-p.gamma * (m - 0.5) * t);
        out.plus[m - 1] *= damp;
        out.minus[m - 1] *= damp;
    }
    return out;
}

std::vector<std::complex<double>>
evolve_offdiag(const std::vector<std::complex<double>>& coh0, double t, const ModelParams& p) {
    require_resonant(p, "evolve_offdiag");
    require_nonnegative_time(t, "evolve_offdiag");
    std::vector<std::complex<double>> out(coh0.size());
    for (std::size_t i = 0; i < coh0.size(); ++i) {
        const int n = static_cast<int>(i) + 1;
        const double damp = std::exp(-p.gamma * (n - 0.5) * t);
        const double phase = -2.0 * std::sqrt(static_cast<double>(n)) * p.lambda * t;
        out[i] = coh0[i] * std::polar(damp, phase);
    }
    return out;
}

double fock_pg(int n, double t, const ModelParams& p) {
    require_resonant(p, "fock_pg");
    require_nonnegative_time(t, "fock_pg");
    if (n < 1) throw std::invalid_argument("fock_pg: n must be >= 1");
    const double gt = p.gamma * t;
    const double u = -std::expm1(-gt);
    const double beta = u > 0.0 ? incomplete_beta(n, 0.5, u) : 0.0;
    const double osc = 0.5 * std::exp(-p.gamma * (n - 0.5) * t) *
                       std::cos(2.0 * std::sqrt(static_cast<double>(n)) * p.lambda * t);
    return 0.5 + 0.5 * half_binomial_ratio(n) * beta + osc;
}

double fock_nphoton(int n, double t, const ModelParams& p) {
    require_resonant(p, "fock_nphoton");
    require_nonnegative_time(t, "fock_nphoton");
    if (n < 1) throw std::invalid_argument("fock_nphoton: n must be >= 1");
    const double gt = p.gamma * t;
    const double osc = 0.5 * std::exp(-p.gamma * (n - 0.5) * t) *
                       std::cos(2.0 * std::sqrt(static_cast<double>(n)) * p.lambda * t);
    if (gt == 0.0) return (n - 0.5) + osc; // t = 0 gives n exactly; gamma = 0 is pure Rabi
    const double rn = half_binomial_ratio(n);
    if (n == 1) return rn * std::exp(-0.5 * gt) + osc;

    const double big_e = std::expm1(gt);
    const double ln_e = std::log(big_e);
    const bool literal_ok =
        gt >= 1e-3 && (n - 1) * std::abs(ln_e) < 600.0 && (n - 1) * gt < 600.0;
    double diag;
    if (literal_ok) {
        const double u = -std::expm1(-gt);
        diag = rn * std::exp(-0.5 * gt) * std::pow(u, n - 1) *
               hyp2f1_terminating(1.0, 1 - n, 0.5, -1.0 / big_e);
    } else {
        // Same series with u^(n-1) x^k = E^(n-1-k) e^(-(n-1) gamma t) (-1)^k folded
        // in; every term is then positive and individually bounded.
        double sum = 0.0;
        for (int k = 0; k <= n - 1; ++k) {
            const double ln_ck = ln_factorial(n - 1) - ln_factorial(n - 1 - k) -
                                 ln_pochhammer(0.5, k);
            sum += std::exp(ln_ck + (n - 1 - k) * ln_e - p.gamma * (n - 0.5) * t);
        }
        diag = rn * sum;
    }
    return diag + osc;
}

int coherent_cutoff(double alpha) {
    return static_cast<int>(std::ceil(alpha * alpha + 8.0 * alpha + 10.0));
}

SectorState coherent_solution(double alpha, double t, const ModelParams& p, int cutoff) {
    require_resonant(p, "coherent_solution");
    require_nonnegative_time(t, "coherent_solution");
    if (!(alpha > 0.0 && alpha <= 12.0)) {
        throw std::invalid_argument("coherent_solution: alpha must be in (0, 12]");
    }
    const int N = cutoff > 0 ? cutoff : coherent_cutoff(alpha);
    const double gt = p.gamma * t;
    const double u = -std::expm1(-gt);
    const double ln_u = u > 0.0 ? std::log(u) : 0.0;
    const double ln_alpha = std::log(alpha);

    std::vector<double> ln_poisson(N + 1);
    for (int n = 0; n <= N; ++n) {
        ln_poisson[n] = 2.0 * n * ln_alpha - alpha * alpha - ln_factorial(n);
    }

    SectorState st(N);
    double pi0 = std::exp(ln_poisson[0]);
    if (u > 0.0) {
        for (int n = 1; n <= N; ++n) {
            pi0 += std::exp(ln_poisson[n]) * 0.5 * transfer_ground(n, u);
        }
    }
    st.pop(DressedIndex::ground()) = pi0;

    for (int k = 1; k <= N; ++k) {
        double mix = std::exp(ln_poisson[k]);
        if (u > 0.0) {
            for (int n = k + 1; n <= N; ++n) {
                mix += std::exp(ln_poisson[n] + (n - k) * ln_u +
                                ln_pochhammer(k + 0.5, n - k) - ln_factorial(n - k));
            }
        }
        const double damp = std::exp(-p.gamma * (k - 0.5) * t);
        const double pk = 0.5 * damp * mix;
        st.pop(DressedIndex::plus(k)) = pk;
        st.pop(DressedIndex::minus(k)) = pk;
        const double phase = -2.0 * std::sqrt(static_cast<double>(k)) * p.lambda * t;
        st.coherence[k - 1] = 0.5 * std::exp(ln_poisson[k]) * std::polar(damp, phase);
    }
    return st;
}

} // namespace jcloss
