// Brute-force master-equation integrators used to cross-check the closed
// forms: the secular generator assembled in the dressed basis, and the
// standard Lindblad cavity-decay generator in the bare basis. Both are built
// as explicit sparse superoperators over the column-major vectorization of
// the density matrix and integrated with fixed-step RK4 (fixed steps keep
// outputs bit-for-bit reproducible).
#pragma once

#include "jcloss/dense_state.hpp"
#include "jcloss/model.hpp"

#include <Eigen/SparseCore>

#include <complex>
#include <vector>

namespace jcloss {

enum class GeneratorKind { Microscopic, Phenomenological };

struct Liouvillian {
    GeneratorKind kind;
    ModelParams params;
    int cutoff;
    // Fastest frequency in the generator (coherent or decay); the RK4 step is
    // bounded by 0.01 / max_frequency and 0.1 / gamma.
    double max_frequency;
    Eigen::SparseMatrix<std::complex<double>> op;

    BasisKind basis() const {
        return kind == GeneratorKind::Microscopic ? BasisKind::Dressed : BasisKind::Bare;
    }
    int dim() const { return basis_dim(cutoff); }
};

// Secular master equation on the dressed basis, truncated at n_max sectors:
// every matrix element (r,s) damps with -gamma/2 (atilde_r + atilde_s) and
// rotates with -i (c_r - c_s); the jump term feeds populations only, with
// weights gamma |<s|a|r>|^2. Exactly trace-preserving at any cutoff because
// sum_s |<s|a|r>|^2 = atilde_r within the retained basis.
Liouvillian build_microscopic(const ModelParams& p, int n_max);

// Lindblad equation -i[H,rho] + gamma (a rho a^dag - 1/2 {a^dag a, rho}) on
// the bare basis (H without the omega N part, which commutes with everything
// observed here).
Liouvillian build_phenomenological(const ModelParams& p, int n_max);

struct IntegrateOptions {
    // > 0 forces that many RK4 steps per grid interval (used by convergence
    // tests); 0 picks the count from the stability bound.
    int substeps_per_interval = 0;
};

struct IntegrationResult {
    TimeSeries series;
    DenseState final_state;
    double max_trace_drift = 0.0;
    double max_hermiticity_error = 0.0;
};

// Integrates rho0 over the grid (increasing, starting at 0) and records the
// observables at every grid point. Grid points are hit exactly; each interval
// is subdivided so the step never exceeds the stability bound.
IntegrationResult integrate(const Liouvillian& liouvillian, const DenseState& rho0,
                            const std::vector<double>& t_grid, const IntegrateOptions& opts = {});

} // namespace jcloss
