#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "qdx/expr.hpp"

namespace qdx {

/// Uniform quadrature grid on [0, x_max] with step h (composite trapezoid).
struct Quadrature {
    double h = 1e-4;
    double x_max = 1.0;

    std::size_t nodes() const;
    double node(std::size_t j) const { return static_cast<double>(j) * h; }
    /// Index of the node nearest to x (within h/2 by construction).
    std::size_t snap(double x) const;
};

/// Differential counterparts of the lattice potentials, used as q -> 1
/// oracles. Everything is evaluated by fixed-step trapezoid quadrature and
/// central differences; no adaptivity, so the oracle stays auditable.
struct ClassicalPotentials {
    expr::Expr R, S, T, V;
    expr::Params params;
    Quadrature quad;
};

/// Node tables of the general solution of the first-order linear system,
///   psi = exp(int (R + u0 S)) [D + F int S exp(int (T - R - 2 u0 S))],
///   phi = F exp(int (T - u0 S)) + u0 psi.
struct ClassicalPairTable {
    std::vector<double> x, psi, phi;
};

ClassicalPairTable classical_solution_pair_table(const ClassicalPotentials& p,
                                                 const expr::Expr& u0, double D, double F);

/// (psi(x), phi(x)) at the quadrature node nearest to x.
std::pair<double, double> classical_solution_pair(const ClassicalPotentials& p,
                                                  const expr::Expr& u0, double D, double F,
                                                  double x);

/// Node table of the classical Backlund orbit
///   u_t = u0 + t exp(int (T - R - 2 u0 S)) / (1 + t int S exp(...)).
std::vector<double> classical_backlund_table(const expr::Expr& u0,
                                             const ClassicalPotentials& p, double t);

double classical_backlund(const expr::Expr& u0, const ClassicalPotentials& p, double t,
                          double x);

/// Node table of the deformed potential in the Schrodinger specialization,
///   V(t, x) = V0(x) - 2 d^2/dx^2 ln(1 + t int_0^x exp(2 int_0^y u0)),
/// with V0 = u0' + u0^2 by central differences. Boundary nodes (no centered
/// stencil) carry NaN.
std::vector<double> classical_deformed_potential_table(const expr::Expr& u0,
                                                       const expr::Params& params,
                                                       double t, const Quadrature& quad);

double classical_deformed_potential(const expr::Expr& u0, const expr::Params& params,
                                    double t, double x, const Quadrature& quad);

} // namespace qdx
