#include "jcloss/model.hpp"

#include <cmath>

namespace jcloss {

double epsilon(const ModelParams& p, int n) {
    if (n < 1) throw std::invalid_argument("epsilon: sector index must be >= 1");
    return std::hypot(p.delta, std::sqrt(static_cast<double>(n)) * p.lambda);
}

Mixing mixing(const ModelParams& p, int n) {
    const double eps = epsilon(p, n);
    const double nl2 = n * p.lambda * p.lambda;
    double c2, s2;
    if (p.delta >= 0.0) {
        c2 = (eps + p.delta) / (2.0 * eps);
        s2 = nl2 / (2.0 * eps * (eps + p.delta));
    } else {
        s2 = (eps - p.delta) / (2.0 * eps);
        c2 = nl2 / (2.0 * eps * (eps - p.delta));
    }
    return {std::sqrt(c2), std::sqrt(s2)};
}

double c_eigenvalue(const ModelParams& p, DressedIndex s) {
    if (s.is_ground()) return p.delta;
    return s.branch == Branch::Plus ? epsilon(p, s.n) : -epsilon(p, s.n);
}

double atilde_eigenvalue(const ModelParams& p, DressedIndex s) {
    if (s.is_ground()) return 0.0;
    const double shift = p.delta / (2.0 * epsilon(p, s.n));
    return s.n - 0.5 + (s.branch == Branch::Plus ? shift : -shift);
}

double a_matrix_element(const ModelParams& p, DressedIndex from, DressedIndex to) {
    if (from.is_ground()) return 0.0;
    if (to.n != from.n - 1) return 0.0;
    const int n = from.n;
    const double rn = std::sqrt(static_cast<double>(n));
    const double rn1 = std::sqrt(static_cast<double>(n - 1));
    const Mixing mf = mixing(p, n);

    if (n == 1) {
        // a |1,+> = cos(theta_1)|g,0>,  a |1,-> = sin(theta_1)|g,0>
        return from.branch == Branch::Plus ? mf.cos_theta : mf.sin_theta;
    }
    const Mixing mt = mixing(p, n - 1);
    if (from.branch == Branch::Plus) {
        return to.branch == Branch::Plus
                   ? mt.cos_theta * mf.cos_theta * rn + mt.sin_theta * mf.sin_theta * rn1
                   : mt.sin_theta * mf.cos_theta * rn - mt.cos_theta * mf.sin_theta * rn1;
    }
    return to.branch == Branch::Plus
               ? mt.cos_theta * mf.sin_theta * rn - mt.sin_theta * mf.cos_theta * rn1
               : mt.sin_theta * mf.sin_theta * rn + mt.cos_theta * mf.cos_theta * rn1;
}

Observables observables(const ModelParams& p, const SectorState& state) {
    Observables o;
    o.p_0g = state.pop(DressedIndex::ground());
    o.p_g = o.p_0g;
    o.trace = o.p_0g;
    for (int n = 1; n <= state.cutoff; ++n) {
        const Mixing m = mixing(p, n);
        const double c2 = m.cos_theta * m.cos_theta;
        const double s2 = m.sin_theta * m.sin_theta;
        const double pp = state.pop(DressedIndex::plus(n));
        const double pm = state.pop(DressedIndex::minus(n));
        const double re = state.coherence[n - 1].real();
        const double cross = 2.0 * m.cos_theta * m.sin_theta * re;
        // <g,n|rho|g,n> = c2 pp + s2 pm + cross; |g,n> holds n photons,
        // |e,n-1> holds n-1.
        o.p_g += c2 * pp + s2 * pm + cross;
        o.n_photon += (n - s2) * pp + (n - c2) * pm + cross;
        o.trace += pp + pm;
    }
    return o;
}

} // namespace jcloss
