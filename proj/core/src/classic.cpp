#include "qdx/classic.hpp"

#include <cmath>

namespace qdx {

namespace {

/// P[j] = int_0^{x_j} f, composite trapezoid.
std::vector<double> prefix_trapezoid(const std::vector<double>& f, double h) {
    std::vector<double> p(f.size(), 0.0);
    for (std::size_t j = 1; j < f.size(); ++j)
        p[j] = p[j - 1] + 0.5 * h * (f[j] + f[j - 1]);
    return p;
}

std::vector<double> sample_nodes(const expr::Expr& e, const expr::Params& params,
                                 const Quadrature& quad) {
    std::vector<double> v(quad.nodes());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = expr::eval(e, quad.node(j), params);
    return v;
}

void check_finite(const std::vector<double>& v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw DomainError(std::string(what) + " overflowed quadrature");
}

} // namespace

std::size_t Quadrature::nodes() const {
    if (!(h > 0.0) || !(x_max > 0.0))
        throw DomainError("quadrature needs h > 0 and x_max > 0");
    return static_cast<std::size_t>(std::llround(x_max / h)) + 1;
}

std::size_t Quadrature::snap(double x) const {
    if (x < 0.0 || x > x_max + 0.5 * h)
        throw DomainError("evaluation point outside the quadrature span");
    const auto j = static_cast<std::size_t>(std::llround(x / h));
    return j >= nodes() ? nodes() - 1 : j;
}

ClassicalPairTable classical_solution_pair_table(const ClassicalPotentials& p,
                                                 const expr::Expr& u0, double D, double F) {
    const Quadrature& quad = p.quad;
    const std::size_t n = quad.nodes();

    const auto r = sample_nodes(p.R, p.params, quad);
    const auto s = sample_nodes(p.S, p.params, quad);
    const auto t = sample_nodes(p.T, p.params, quad);
    const auto u = sample_nodes(u0, p.params, quad);

    std::vector<double> f1(n), f2(n), f3(n);
    for (std::size_t j = 0; j < n; ++j) {
        f1[j] = r[j] + u[j] * s[j];          // exponent of the psi prefactor
        f2[j] = t[j] - r[j] - 2.0 * u[j] * s[j];
        f3[j] = t[j] - u[j] * s[j];          // exponent of the phi prefactor
    }
    const auto i1 = prefix_trapezoid(f1, quad.h);
    const auto i2 = prefix_trapezoid(f2, quad.h);
    const auto i3 = prefix_trapezoid(f3, quad.h);

    std::vector<double> inner(n);
    for (std::size_t j = 0; j < n; ++j) inner[j] = s[j] * std::exp(i2[j]);
    const auto j2 = prefix_trapezoid(inner, quad.h);

    ClassicalPairTable out;
    out.x.resize(n);
    out.psi.resize(n);
    out.phi.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        out.x[j] = quad.node(j);
        out.psi[j] = std::exp(i1[j]) * (D + F * j2[j]);
        out.phi[j] = F * std::exp(i3[j]) + u[j] * out.psi[j];
    }
    check_finite(out.psi, "classical psi");
    check_finite(out.phi, "classical phi");
    return out;
}

std::pair<double, double> classical_solution_pair(const ClassicalPotentials& p,
                                                  const expr::Expr& u0, double D, double F,
                                                  double x) {
    const auto table = classical_solution_pair_table(p, u0, D, F);
    const std::size_t j = p.quad.snap(x);
    return {table.psi[j], table.phi[j]};
}

std::vector<double> classical_backlund_table(const expr::Expr& u0,
                                             const ClassicalPotentials& p, double t) {
    const Quadrature& quad = p.quad;
    const std::size_t n = quad.nodes();

    const auto r = sample_nodes(p.R, p.params, quad);
    const auto s = sample_nodes(p.S, p.params, quad);
    const auto tt = sample_nodes(p.T, p.params, quad);
    const auto u = sample_nodes(u0, p.params, quad);

    std::vector<double> f2(n);
    for (std::size_t j = 0; j < n; ++j) f2[j] = tt[j] - r[j] - 2.0 * u[j] * s[j];
    const auto i2 = prefix_trapezoid(f2, quad.h);

    std::vector<double> e(n), inner(n);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = std::exp(i2[j]);
        inner[j] = s[j] * e[j];
    }
    const auto j2 = prefix_trapezoid(inner, quad.h);

    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double den = 1.0 + t * j2[j];
        if (den == 0.0 || (j > 0 && std::signbit(den) != std::signbit(1.0 + t * j2[j - 1])))
            throw DomainError("movable pole of the classical Backlund orbit", j);
        out[j] = u[j] + t * e[j] / den;
    }
    return out;
}

double classical_backlund(const expr::Expr& u0, const ClassicalPotentials& p, double t,
                          double x) {
    return classical_backlund_table(u0, p, t)[p.quad.snap(x)];
}

std::vector<double> classical_deformed_potential_table(const expr::Expr& u0,
                                                       const expr::Params& params,
                                                       double t, const Quadrature& quad) {
    const std::size_t n = quad.nodes();
    std::vector<double> u(n);
    for (std::size_t j = 0; j < n; ++j) u[j] = expr::eval(u0, quad.node(j), params);

    std::vector<double> two_u(n);
    for (std::size_t j = 0; j < n; ++j) two_u[j] = 2.0 * u[j];
    const auto inner = prefix_trapezoid(two_u, quad.h);

    std::vector<double> e(n);
    for (std::size_t j = 0; j < n; ++j) e[j] = std::exp(inner[j]);
    const auto outer = prefix_trapezoid(e, quad.h);

    std::vector<double> logv(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double arg = 1.0 + t * outer[j];
        if (!(arg > 0.0))
            throw DomainError("pole of the deformed-potential log argument", j);
        logv[j] = std::log(arg);
    }

    const double h = quad.h;
    std::vector<double> out(n, std::nan(""));
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const double u0p = (u[j + 1] - u[j - 1]) / (2.0 * h);
        const double lpp = (logv[j + 1] - 2.0 * logv[j] + logv[j - 1]) / (h * h);
        out[j] = u0p + u[j] * u[j] - 2.0 * lpp;
    }
    return out;
}

double classical_deformed_potential(const expr::Expr& u0, const expr::Params& params,
                                    double t, double x, const Quadrature& quad) {
    const auto table = classical_deformed_potential_table(u0, params, t, quad);
    std::size_t j = quad.snap(x);
    if (j == 0) j = 1;
    if (j + 1 >= table.size()) j = table.size() - 2;
    return table[j];
}

} // namespace qdx
