// Full density matrix on the truncated Hilbert space, used by the brute-force
// integrators and the large-detuning limit. One slot layout serves two basis
// interpretations with the same flat ordering as DressedIndex:
//   Dressed: slot 0 = |g,0>, 2n-1 = |n,->, 2n = |n,+>
//   Bare:    slot 0 = |g,0>, 2n-1 = |e,n-1>, 2n = |g,n>
// (the bare labels are the large-|delta| limits of the dressed ones).
#pragma once

#include "jcloss/model.hpp"

#include <Eigen/Dense>

namespace jcloss {

enum class BasisKind { Dressed, Bare };

struct DenseState {
    BasisKind basis = BasisKind::Dressed;
    int cutoff = 0;
    Eigen::MatrixXcd rho;

    DenseState(BasisKind basis_, int cutoff_)
        : basis(basis_), cutoff(cutoff_),
          rho(Eigen::MatrixXcd::Zero(basis_dim(cutoff_), basis_dim(cutoff_))) {
        if (cutoff_ < 0) throw std::invalid_argument("DenseState: cutoff must be >= 0");
    }

    int dim() const { return basis_dim(cutoff); }
};

// |g,n><g,n| with n <= cutoff.
DenseState dense_fock_g(const ModelParams& p, int n, int cutoff, BasisKind basis);

// |e,0><e,0| with cutoff >= 1.
DenseState dense_e0(const ModelParams& p, int cutoff, BasisKind basis);

// |g,alpha><g,alpha| truncated at cutoff (pure-state outer product of the
// Poisson amplitude vector; includes cross-sector coherences).
DenseState dense_coherent_g(const ModelParams& p, double alpha, int cutoff, BasisKind basis);

// P_g, P_0g, <a^dag a>, trace in either basis.
Observables observables(const ModelParams& p, const DenseState& state);

// Dressed populations (flat ordering) of a dressed-basis state.
std::vector<double> dressed_populations(const DenseState& state);

// max |rho - rho^dag| entrywise.
double hermiticity_error(const DenseState& state);

// Smallest eigenvalue of the Hermitian part.
double min_eigenvalue(const DenseState& state);

} // namespace jcloss
