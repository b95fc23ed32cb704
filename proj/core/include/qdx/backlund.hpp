#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qdx/darboux.hpp"
#include "qdx/linsys.hpp"
#include "qdx/qlattice.hpp"

namespace qdx {

/// A particular Riccati solution u0 together with the potentials it
/// belongs to. Construction validates R+ u0 == V pointwise (to seed_tol
/// relative to the equation's term scale), so downstream transforms can
/// assume consistency.
struct SeedSolution {
    LatticeFn u0;
    PotentialQuad potentials;

    static constexpr double kSeedTol = 1e-9;

    static SeedSolution create(LatticeFn u0, PotentialQuad potentials, double tol = kSeedTol);

    /// Derive V as the R+ image of u0 instead of validating a given one.
    static SeedSolution from_rst(LatticeFn u0, LatticeFn r, LatticeFn s, LatticeFn t);

    const QGrid& grid() const { return u0.grid(); }
};

/// The x-dependent ingredients of the one-parameter transform (shared by
/// the general solution and both Backlund maps):
///   factor_a(y) = 1 - (1-q) y [R(y) + u0(y) S(y)]
///   factor_b(y) = 1 - (1-q) y [T(y) - u0(qy) S(y)]
///   growth(x)   = exp((1/(1-q)) int_0^x ln(factor_a/factor_b)/y d_q y)
///   integral(x) = int_0^x S(y)/factor_a(y) * growth(y) d_q y
struct BacklundKernel {
    LatticeFn factor_a, factor_b, growth, integral;
};

BacklundKernel backlund_kernel(const LatticeFn& u0, const PotentialQuad& p,
                               double tail_tol = kDefaultTailTol);

/// General solution of the linear system from the seed (Proposition-2
/// style): psi = exp(-...) [D + F * integral], phi = F exp(-...) + u0 psi.
/// The constants are the limits psi(0) = D, phi(0) = F + D u0(0).
/// Throws DomainError if D + F*integral changes sign between adjacent
/// lattice points (movable zero of psi).
SolutionPair general_solution(const SeedSolution& seed, double D, double F,
                              double tail_tol = kDefaultTailTol);

/// Orbit member of the auto-Backlund group:
///   (B+_t u0)(x) = u0(x) + t growth(x) / (1 + t integral(x)).
/// Sends solutions of R+ u = V to solutions of the same equation; B+_t1
/// after B+_t2 equals B+_{t1+t2}. Throws PoleError where 1 + t*integral
/// changes sign.
LatticeFn backlund_plus(const SeedSolution& seed, double t,
                        double tail_tol = kDefaultTailTol);

/// Conjugate transform B-_t = I o B+_t o I, computed against the seed of
/// the sign-mirrored equation. Deforms the potential: R+ (B-_t u0) is a
/// new V(t, .), while R- (B-_t u0) stays equal to R- u0.
LatticeFn backlund_minus(const SeedSolution& seed, double t,
                         double tail_tol = kDefaultTailTol);

/// Orbit values with per-row pole marks instead of a thrown PoleError:
/// rows adjacent to a sign change of the denominator are marked and kept.
struct MaskedOrbit {
    LatticeFn u;
    std::vector<std::uint8_t> pole_mark;
};

MaskedOrbit backlund_plus_masked(const SeedSolution& seed, double t,
                                 double tail_tol = kDefaultTailTol);
MaskedOrbit backlund_minus_masked(const SeedSolution& seed, double t,
                                  double tail_tol = kDefaultTailTol);

/// One orbit member per group parameter t (evaluated lazily).
struct BacklundOrbit {
    SeedSolution seed;
    double t = 0.0;

    LatticeFn values() const { return backlund_plus(seed, t); }
};

/// Anharmonic (cross) ratio of four orbit values at one lattice point:
///   ((u4-u3)(u1-u2)) / ((u3-u1)(u2-u4)).
/// Equals the same ratio of the group parameters; throws DomainError when
/// the denominator degenerates.
double cross_ratio(double u1, double u2, double u3, double u4);

/// Parameter-side value ((t4-t3)(t1-t2)) / ((t3-t1)(t2-t4)).
double parameter_cross_ratio(double t1, double t2, double t3, double t4);

/// Chain of B- transforms applied right to left: parameter list (t1..tn)
/// means B-_{t1} o ... o B-_{tn}. The empty chain is the identity.
struct DeformationChain {
    SeedSolution seed;
    std::vector<double> params;
};

/// Runs the chain and returns (u(t1..tn, .), V(t1..tn, .)) where the
/// potential is recomputed at each stage as the R+ image of the stage
/// output.
std::pair<LatticeFn, LatticeFn> deform_chain(const DeformationChain& chain,
                                             double tail_tol = kDefaultTailTol);

/// Once-deformed potential V(t, .) = V0 - 2 d_q [ t growth / (1 + t integral) ]
/// in the Schrodinger specialization R = T = 0, S = 1. The d_q quotient is
/// expanded analytically so no cancellation against the lattice spacing
/// occurs; values are stable at every depth.
LatticeFn deformed_potential_once(const SeedSolution& seed, double t,
                                  double tail_tol = kDefaultTailTol);

/// Both roots of the quadratic that expresses u(t, x) through the deformed
/// potential and R- u0:
///   (1/2) { delta +- sqrt(delta^2 + 2 (V(t,x) + R- u0(x))) },
///   delta = (1-q) x (V(t,x) - R- u0(x)) / 2.
/// One of the roots is u(t, x); the other is -u(t, qx). Throws DomainError
/// on a negative discriminant.
std::pair<double, double> quadratic_reconstruct(const LatticeFn& v_t,
                                                const LatticeFn& r_minus_u0,
                                                std::size_t i);

/// The power-law family u0 = a x^alpha, alpha > -1, which solves the
/// q-Schrodinger Riccati equation with
///   V0(x) = a (1-q^alpha)/(1-q) x^(alpha-1) + a^2 q^alpha x^(2 alpha).
/// Grid base must be positive. Returns a validated seed.
SeedSolution power_law_family(double a, double alpha, const QGrid& grid);

} // namespace qdx
