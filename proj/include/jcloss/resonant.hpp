// Closed-form dynamics at zero detuning. The sector-diagonal part of the
// master equation closes on the operators
//   Pi_0 = |g,0><g,0|,  Pi_{n+} = |n,+><n,+| + |n,-><n,-|,
//   Pi_{n-} = |n,+><n,+| - |n,-><n,->,
// on which the jump superoperator K2[rho] = Pdiag[a rho a^dag] acts as a
// lowering ladder:
//   K2 Pi_{n+} = (n-1/2) Pi_{n-1,+} (n>=2),  K2 Pi_{1+} = Pi_0,
//   K2 Pi_{n-} = sqrt(n(n-1)) Pi_{n-1,-} (n>=2),  K2 Pi_{1-} = K2 Pi_0 = 0.
// The solution is rho(t) = e^(-gamma A t) [1 + sum_n c_n(t) K2^(n+1)] rho(0)
// with A-eigenvalues 0 on Pi_0 and n-1/2 on Pi_{n+-}.
#pragma once

#include "jcloss/model.hpp"

#include <complex>
#include <vector>

namespace jcloss {

// Coefficients of a sector-diagonal operator in the Pi basis:
// pi0 * Pi_0 + sum_n (plus[n-1] Pi_{n+} + minus[n-1] Pi_{n-}).
// Note tr Pi_{n+} = 2, tr Pi_{n-} = 0, tr Pi_0 = 1.
struct PiBasisVector {
    int cutoff = 0;
    double pi0 = 0.0;
    std::vector<double> plus;  // Pi_{n+} coefficient at [n-1]
    std::vector<double> minus; // Pi_{n-} coefficient at [n-1]

    explicit PiBasisVector(int cutoff_)
        : cutoff(cutoff_), plus(cutoff_, 0.0), minus(cutoff_, 0.0) {
        if (cutoff_ < 0) throw std::invalid_argument("PiBasisVector: cutoff must be >= 0");
    }
};

// Change of representation between dressed populations and Pi coefficients:
// pop(n,+) = plus + minus, pop(n,-) = plus - minus, pop(ground) = pi0.
PiBasisVector to_pi_basis(const SectorState& state);
void set_populations(SectorState& state, const PiBasisVector& v);

// One application of the ladder K2.
PiBasisVector k2_apply(const PiBasisVector& v);

// K2^l with coefficients assembled from Pochhammer symbols and
// log-factorials rather than by iterating k2_apply.
PiBasisVector k2_power(const PiBasisVector& v, int l);

// Series coefficient c_n(t) of K2^(n+1); on_ground selects the eigenvalue of
// the projector P0 on the component the ladder lands on:
//   c_n(t) = sum_{k=0}^n (-1)^k/(k!(n-k)!) (1-e^(-(1+k-p/2) gamma t))/(1+k-p/2),
// p = 1 on Pi_0, else 0. Equal closed forms, used above n = 20 where the
// alternating sum loses precision: u^(n+1)/(n+1)! and B(n+1,1/2;u)/n! with
// u = 1 - e^(-gamma t).
double c_coeff(int n, double gamma_t, bool on_ground);

// Propagates the sector-diagonal part for time t >= 0 (delta must be 0).
// Exact at any cutoff: the ladder only lowers, so no truncation error.
PiBasisVector evolve_diag(const PiBasisVector& v0, double t, const ModelParams& p);

// Propagates the same-sector coherences <n,+|rho|n,-> (delta must be 0):
// multiply by e^(-gamma (n-1/2) t) e^(-2 i sqrt(n) lambda t).
std::vector<std::complex<double>>
evolve_offdiag(const std::vector<std::complex<double>>& coh0, double t, const ModelParams& p);

// P_g(t) for the initial Fock state |g,n>, n >= 1, delta = 0:
//   1/2 + (2n-1)!!/((n-1)! 2^(n+1)) B(n,1/2;u) + 1/2 e^(-gamma(n-1/2)t) cos(2 sqrt(n) lambda t).
double fock_pg(int n, double t, const ModelParams& p);

// <a^dag a>(t) for the initial Fock state |g,n>, n >= 1, delta = 0:
//   (2n-1)!!/(2^n (n-1)!) e^(-gamma t/2) u^(n-1) 2F1(1,1-n;1/2;-1/(e^(gamma t)-1))
//   + 1/2 e^(-gamma(n-1/2)t) cos(2 sqrt(n) lambda t),
// evaluated through a log-space branch where the literal argument over- or
// underflows; t = 0 returns n exactly.
double fock_nphoton(int n, double t, const ModelParams& p);

// Truncation used by coherent_solution when no override is given.
int coherent_cutoff(double alpha);

// Full sector state at time t for the initial coherent state |g,alpha>
// (alpha in (0,12], delta = 0). The diagonal part is the Poisson mixture of
// Fock-state solutions; the mixture reproduces the closed-form Pi_{k+}
// coefficient 1/2 e^(-gamma(k-1/2)t) P_k 1F1(k+1/2;k+1;alpha^2 u) exactly.
// cutoff = 0 selects coherent_cutoff(alpha).
SectorState coherent_solution(double alpha, double t, const ModelParams& p, int cutoff = 0);

} // namespace jcloss
