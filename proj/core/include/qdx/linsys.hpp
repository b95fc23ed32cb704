#pragma once

#include <array>
#include <cstddef>

#include "qdx/qlattice.hpp"

namespace qdx {

/// 2x2 real matrix, row-major.
struct Mat2 {
    double a = 1.0, b = 0.0;
    double c = 0.0, d = 1.0;

    static Mat2 identity() { return {}; }

    double det() const { return a * d - b * c; }

    friend Mat2 operator*(const Mat2& m, const Mat2& n) {
        return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
                m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
    }

    std::array<double, 2> apply(double x, double y) const {
        return {a * x + b * y, c * x + d * y};
    }
};

/// The four coefficient functions of the first-order linear q-difference
/// system d_q (psi, phi)^T = [[R,S],[V,T]] (psi, phi)^T, sampled on one grid.
struct PotentialQuad {
    LatticeFn R, S, T, V;

    PotentialQuad(LatticeFn r, LatticeFn s, LatticeFn t, LatticeFn v);

    const QGrid& grid() const { return R.grid(); }

    /// All four potentials identically zero.
    static PotentialQuad zero(const QGrid& grid);
};

/// A solution pair (psi, phi) of the linear system on a shared grid.
struct SolutionPair {
    LatticeFn psi, phi;

    /// The Riccati ratio u = phi / psi. Throws DomainError (with index)
    /// where psi vanishes.
    LatticeFn ratio() const;
};

/// Transfer matrix at lattice index i:
///   Lambda(x) = I - (1-q) x [[R,S],[V,T]], x = point(i).
/// One application maps solution values at x to values at qx.
Mat2 lambda_at(const PotentialQuad& p, std::size_t i);

/// Ordered product Lambda(q^{n-1}x) ... Lambda(qx) Lambda(x) with x =
/// point(i); the factor at i is applied first. Requires i + n <= depth.
/// With n = depth - i this is the truncated infinite product whose inverse
/// is the resolvent of the system.
Mat2 resolvent_product(const PotentialQuad& p, std::size_t i, std::size_t n);

/// Fill the lattice from initial values (psi, phi)(base) by repeated
/// application of the transfer matrix. The result satisfies the linear
/// system exactly at every interior index by construction. Throws
/// DomainError with index on overflow.
SolutionPair propagate(const PotentialQuad& p, double psi0, double phi0);

/// One-step defect of a candidate pair at index i, scaled by the local
/// solution magnitude:
///   max|(psi,phi)[i+1] - Lambda(i) (psi,phi)[i]| / max(1, |psi[i]|, |phi[i]|).
/// This is the residual of the system in propagated form; it stays at
/// rounding level at every depth, unlike the d_q form whose divisor
/// (1-q) q^i base amplifies storage quantization.
double propagated_residual(const PotentialQuad& p, const SolutionPair& s, std::size_t i);

/// Closed form of the truncated infinite product for V = 0 (upper
/// triangular): diagonal entries are exponentials of Jackson integrals of
/// log-factors, the corner entry composes both. All log arguments
/// 1 - (1-q) t R(t) and 1 - (1-q) t T(t) must be strictly positive.
Mat2 closed_form_V0(const PotentialQuad& p, std::size_t i, double tail_tol = kDefaultTailTol);

/// Three-term recurrence obtained from the system on the lattice {q^n}
/// under the constraint 1 - (1-q) x T(x) = 0 (callers assert it; T is
/// eliminated). Returns
///   psi_{n+2} = [1-(1-q)q^{n+1}R(q^{n+1})] psi_{n+1}
///               + (1-q)^2 q^{2n+1} S(q^{n+1}) V(q^n) psi_n.
/// Grid base must be 1.
double three_term_step(const PotentialQuad& p, double psi_n, double psi_n1, std::size_t n);

} // namespace qdx
