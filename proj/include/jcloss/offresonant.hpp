// Detuned dynamics of the dressed populations. A jump from dressed state r to
// dressed state s carries weight |<s|a|r>|^2 and, in the interaction frame of
// the damping operator, an exponential clock rate atilde(r) - atilde(s). After
// k jumps the accumulated time-ordered integral is a nested exponential
// integral I_k, so the populations are a finite sum over decay paths: a state
// with n excitations reaches the ground state in exactly n jumps and the
// series terminates. The same-sector coherences decouple and damp in closed
// form. For |delta| >> lambda the dressed states collapse onto bare states and
// the dynamics reduces to pure photon loss per atomic chain.
#pragma once

#include "jcloss/dense_state.hpp"
#include "jcloss/model.hpp"

#include <complex>
#include <span>
#include <vector>

namespace jcloss {

// Decay rate factor kappa_i(c) of branch i in {1,2} evaluated at
// energy-operator eigenvalue c (c != 0):
//   kappa_1(c) = 1 - (delta/2) (1/c - 1/sqrt(c^2 + lambda^2))
//   kappa_2(c) = 1 - (delta/2) (1/c + 1/sqrt(c^2 + lambda^2))
// At resonance both reduce to 1.
double kappa(int i, double c, const ModelParams& p);

// One application of the branch-i jump superoperator (populations only,
// weights |<target|a|source>|^2). Branch 1 routes population out of Plus(n)
// sources, branch 2 out of Minus(n) sources; each feeds both states one sector
// down (or the ground state from n = 1). The ground state is annihilated by
// both. Input and output are dressed populations in flat ordering.
std::vector<double> q_apply(int i, const std::vector<double>& populations, const ModelParams& p);

// Nested exponential integral
//   I_k(tau; a_1..a_k) = int_{0 <= t_1 <= ... <= t_k <= tau}
//                        exp(-a_1 t_1 - ... - a_k t_k) dt_1..dt_k,
// a_j the clock rate of the j-th jump in chronological order. Evaluated by
// the reduction I_k = (1/a_1)[I_{k-1}(tau; a_2,..) - I_{k-1}(tau; a_1+a_2, a_3,..)]
// with an exact divided-difference fallback when a leading rate is too small
// for the subtraction to be stable. Rates may be zero, negative or repeated.
double integral_In(double tau, std::span<const double> rates);

// Dressed populations at time t for arbitrary detuning. Exact (terminating
// path sum) whenever every initially occupied sector has n <= k_max.
std::vector<double> evolve_diag_offres(const std::vector<double>& populations, double t,
                                       const ModelParams& p, int k_max = 12);

// Same-sector coherences <n,+|rho|n,-> at time t: factor
// exp(-gamma (n - 1/2) t) * exp(-2 i epsilon_n t). coherences[n-1] holds
// sector n.
std::vector<std::complex<double>> evolve_offdiag_offres(
    const std::vector<std::complex<double>>& coherences, double t, const ModelParams& p);

// Large-|delta| limit: the state is interpreted in the bare basis and each
// atomic chain undergoes independent photon loss (|e,0> is stationary).
// Off-diagonal elements keep their unitary phase and damp with the mean
// photon number. Requires state.basis == BasisKind::Bare.
DenseState evolve_largedelta(const DenseState& state, double t, const ModelParams& p);

} // namespace jcloss
