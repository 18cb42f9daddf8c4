// Dressed-state structure of the Jaynes-Cummings model with cavity losses.
//
// Working picture: the Hamiltonian splits as H = omega N + C with
// N = a^dag a + sigma_+ sigma_-, C = -delta sigma_z + lambda (sigma_+ a + sigma_- a^dag).
// The omega N part commutes with everything used here and is dropped. Dressed
// eigenstates per excitation sector n >= 1:
//   |n,+> = cos(theta_n) |g,n> + sin(theta_n) |e,n-1>,   C-eigenvalue +eps_n
//   |n,-> = sin(theta_n) |g,n> - cos(theta_n) |e,n-1>,   C-eigenvalue -eps_n
// with eps_n = sqrt(delta^2 + n lambda^2), plus the ground state |g,0>
// (C-eigenvalue delta). Basis ordering throughout the library:
// Ground, Minus(1), Plus(1), Minus(2), Plus(2), ...
#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace jcloss {

struct ModelParams {
    double lambda; // coupling strength, > 0; fixes the unit of frequency
    double delta;  // detuning (omega0 - omega)/2
    double gamma;  // cavity decay rate, >= 0 (0 is the lossless limit)

    ModelParams(double lambda_, double delta_, double gamma_)
        : lambda(lambda_), delta(delta_), gamma(gamma_) {
        if (!(lambda > 0.0)) throw std::invalid_argument("ModelParams: lambda must be > 0");
        if (!(gamma >= 0.0)) throw std::invalid_argument("ModelParams: gamma must be >= 0");
    }
};

enum class Branch { Minus, Plus };

// Index of a dressed state. n = 0 is the ground state (branch field is
// conventional there and set to Plus); n >= 1 selects an excitation sector.
struct DressedIndex {
    int n = 0;
    Branch branch = Branch::Plus;

    static DressedIndex ground() { return {0, Branch::Plus}; }
    static DressedIndex plus(int n) { return make(n, Branch::Plus); }
    static DressedIndex minus(int n) { return make(n, Branch::Minus); }

    bool is_ground() const { return n == 0; }

    // Flat position in the basis ordering: ground 0, Minus(n) 2n-1, Plus(n) 2n.
    int flat() const { return n == 0 ? 0 : 2 * n - (branch == Branch::Minus ? 1 : 0); }

    static DressedIndex from_flat(int idx) {
        if (idx < 0) throw std::invalid_argument("DressedIndex: negative flat index");
        if (idx == 0) return ground();
        return {(idx + 1) / 2, idx % 2 == 1 ? Branch::Minus : Branch::Plus};
    }

    bool operator==(const DressedIndex&) const = default;

  private:
    static DressedIndex make(int n, Branch b) {
        if (n < 1) throw std::invalid_argument("DressedIndex: sector index must be >= 1");
        return {n, b};
    }
};

inline int basis_dim(int cutoff) { return 2 * cutoff + 1; }

// eps_n = sqrt(delta^2 + n lambda^2), n >= 1.
double epsilon(const ModelParams& p, int n);

struct Mixing {
    double cos_theta;
    double sin_theta;
};

// Mixing angle of sector n; evaluated so that neither component cancels for
// large |delta| (the small one comes from n lambda^2 / (2 eps (eps + |delta|))).
Mixing mixing(const ModelParams& p, int n);

// C-eigenvalue of a dressed state: delta on ground, +-eps_n on Plus/Minus(n).
double c_eigenvalue(const ModelParams& p, DressedIndex s);

// Eigenvalue of A~ = N - 1/2 + delta/(2C), the dressed-diagonal part of
// a^dag a: 0 on ground, n - 1/2 +- delta/(2 eps_n) on Plus/Minus(n).
double atilde_eigenvalue(const ModelParams& p, DressedIndex s);

// <to| a |from>. Nonzero only when the excitation drops by exactly one.
double a_matrix_element(const ModelParams& p, DressedIndex from, DressedIndex to);

// State of the sector-diagonal dynamics: dressed populations (flat ordering)
// plus the same-sector coherences <n,+|rho|n,->, n = 1..cutoff, at
// coherence[n-1]. Coherences between different sectors never influence the
// observables tracked here and are not stored.
struct SectorState {
    int cutoff = 0;
    std::vector<double> population;                // size basis_dim(cutoff)
    std::vector<std::complex<double>> coherence;   // size cutoff

    explicit SectorState(int cutoff_)
        : cutoff(cutoff_), population(basis_dim(cutoff_), 0.0), coherence(cutoff_, 0.0) {
        if (cutoff_ < 0) throw std::invalid_argument("SectorState: cutoff must be >= 0");
    }

    double& pop(DressedIndex s) { return population[s.flat()]; }
    double pop(DressedIndex s) const { return population[s.flat()]; }
};

struct Observables {
    double p_g = 0.0;      // total ground-state (atom in |g>) probability
    double p_0g = 0.0;     // population of |g,0>
    double n_photon = 0.0; // <a^dag a>
    double trace = 0.0;
};

Observables observables(const ModelParams& p, const SectorState& state);

// Columns of one simulation run on a common time grid (times in units 1/lambda).
struct TimeSeries {
    std::vector<double> times;
    std::vector<double> p_g;
    std::vector<double> p_0g;
    std::vector<double> n_photon;
    std::vector<double> trace;

    void append(double t, const Observables& o) {
        times.push_back(t);
        p_g.push_back(o.p_g);
        p_0g.push_back(o.p_0g);
        n_photon.push_back(o.n_photon);
        trace.push_back(o.trace);
    }
    std::size_t size() const { return times.size(); }
};

} // namespace jcloss
