#pragma once

#include <cstddef>

#include "qdx/linsys.hpp"
#include "qdx/qlattice.hpp"

namespace qdx {

/// Lower-triangular gauge matrix D(x) = [[1, 0], [-c(x), 1]]; det = 1, so
/// it is always invertible and the gauge preserves determinants.
struct DarbouxMatrix {
    LatticeFn c;

    Mat2 at(std::size_t i) const { return {1.0, 0.0, -c[i], 1.0}; }
    Mat2 inverse_at(std::size_t i) const { return {1.0, 0.0, c[i], 1.0}; }
};

/// Gauge transform of the transfer matrix at index i:
///   Lambda'(x) = D(qx)^{-1} Lambda(x) D(x).
/// Needs index i+1 for D(qx).
Mat2 gauge_transform(const PotentialQuad& p, const DarbouxMatrix& d, std::size_t i);

/// The potentials of the gauge-transformed system, read off from
/// Lambda'(x) = I - (1-q) x M'(x). Interior indices are exact; the final
/// slot is clamped from its predecessor (no D(qx) sample there) and is
/// never consumed by propagate.
PotentialQuad gauge_potentials(const PotentialQuad& p, const DarbouxMatrix& d);

/// Lower-left entry of the gauge-transformed transfer matrix for the gauge
/// built from c. It vanishes iff c satisfies the q-Riccati equation at
/// index i; expanding the matrix product by hand gives exactly
///   defect = (1-q) x (R+ c - V)(x),
/// which is locked by a golden test. (The sign convention of the gauge is
/// chosen so that the ratio phi/psi of a solution pair, which satisfies
/// R+ u = V, is the triangularizing function.)
double triangular_defect(const PotentialQuad& p, const LatticeFn& c, std::size_t i);

/// Right-hand operator of the q-Riccati equation:
///   (R+ u)(x) = d_q u(x) - T(x) u(x) + R(x) u(qx) + S(x) u(x) u(qx).
/// Equals V(x) iff u solves the Riccati equation of the system.
double riccati_apply_plus(const LatticeFn& u, const PotentialQuad& p, std::size_t i);

/// Sign-mirrored operator:
///   (R- u)(x) = -d_q u(x) + T(x) u(x) - R(x) u(qx) + S(x) u(x) u(qx).
/// Satisfies R+ (-u) == R- (u) bit-exactly (identical operation order).
double riccati_apply_minus(const LatticeFn& u, const PotentialQuad& p, std::size_t i);

/// Magnitude scale of the terms entering the Riccati operators at index i;
/// |R+- u - V| can only be certified down to rounding times this scale
/// (the d_q quotient divides storage quantization by (1-q) q^i base).
double riccati_term_scale(const LatticeFn& u, const PotentialQuad& p, std::size_t i);

/// Pointwise negation; an involution (bit-exact when applied twice).
LatticeFn involution(const LatticeFn& u);

/// R+ image over all interior indices as a lattice function. The final
/// slot is clamped (u(q x_N) := u[N]); it only feeds Jackson tails.
LatticeFn riccati_image_plus(const LatticeFn& u, const PotentialQuad& p);
LatticeFn riccati_image_minus(const LatticeFn& u, const PotentialQuad& p);

/// Residual of the q-Schrodinger equation (-d_q^2 + V) psi at index i;
/// needs two shifts, so i <= depth-2.
double schrodinger_residual(const LatticeFn& psi, const LatticeFn& v, std::size_t i);

/// Term-magnitude scale for schrodinger_residual (see riccati_term_scale).
double schrodinger_term_scale(const LatticeFn& psi, const LatticeFn& v, std::size_t i);

} // namespace qdx
