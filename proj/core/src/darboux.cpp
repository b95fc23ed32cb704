#include "qdx/darboux.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace qdx {

Mat2 gauge_transform(const PotentialQuad& p, const DarbouxMatrix& d, std::size_t i) {
    if (i + 1 >= p.grid().size())
        throw IndexError("gauge_transform needs D at the successor point", i);
    return d.inverse_at(i + 1) * lambda_at(p, i) * d.at(i);
}

PotentialQuad gauge_potentials(const PotentialQuad& p, const DarbouxMatrix& d) {
    const QGrid& g = p.grid();
    const std::size_t n = g.depth();
    std::vector<double> r(n + 1), s(n + 1), v(n + 1), t(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const Mat2 m = gauge_transform(p, d, i);
        const double lam = g.dq_scale(i);
        r[i] = (1.0 - m.a) / lam;
        s[i] = -m.b / lam;
        v[i] = -m.c / lam;
        t[i] = (1.0 - m.d) / lam;
    }
    r[n] = r[n - 1];
    s[n] = s[n - 1];
    v[n] = v[n - 1];
    t[n] = t[n - 1];
    return PotentialQuad(LatticeFn(g, std::move(r)), LatticeFn(g, std::move(s)),
                         LatticeFn(g, std::move(t)), LatticeFn(g, std::move(v)));
}

double triangular_defect(const PotentialQuad& p, const LatticeFn& c, std::size_t i) {
    // Gauge with lower-left entry +c(x): the (2,1) entry of the transformed
    // matrix then equals (1-q) x (R+ c - V), so it vanishes exactly when c
    // solves the Riccati equation of the system.
    const DarbouxMatrix d{involution(c)};
    return gauge_transform(p, d, i).c;
}

double riccati_apply_plus(const LatticeFn& u, const PotentialQuad& p, std::size_t i) {
    if (i + 1 >= u.size())
        throw IndexError("riccati_apply_plus needs the successor sample", i);
    const double lam = u.grid().dq_scale(i);
    return (u[i] - u[i + 1]) / lam - p.T[i] * u[i] + p.R[i] * u[i + 1] +
           p.S[i] * (u[i] * u[i + 1]);
}

double riccati_apply_minus(const LatticeFn& u, const PotentialQuad& p, std::size_t i) {
    if (i + 1 >= u.size())
        throw IndexError("riccati_apply_minus needs the successor sample", i);
    const double lam = u.grid().dq_scale(i);
    return (u[i + 1] - u[i]) / lam + p.T[i] * u[i] - p.R[i] * u[i + 1] +
           p.S[i] * (u[i] * u[i + 1]);
}

double riccati_term_scale(const LatticeFn& u, const PotentialQuad& p, std::size_t i) {
    const double lam = u.grid().dq_scale(i);
    return (std::abs(u[i]) + std::abs(u[i + 1])) / std::abs(lam) +
           std::abs(p.T[i] * u[i]) + std::abs(p.R[i] * u[i + 1]) +
           std::abs(p.S[i] * u[i] * u[i + 1]);
}

LatticeFn involution(const LatticeFn& u) {
    std::vector<double> v(u.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = -u[i];
    return LatticeFn(u.grid(), std::move(v));
}

namespace {

template <typename Op>
LatticeFn riccati_image(const LatticeFn& u, const PotentialQuad& p, Op op) {
    std::vector<double> v(u.size());
    for (std::size_t i = 0; i + 1 < u.size(); ++i) v[i] = op(u, p, i);
    v.back() = v[v.size() - 2];
    return LatticeFn(u.grid(), std::move(v));
}

} // namespace

LatticeFn riccati_image_plus(const LatticeFn& u, const PotentialQuad& p) {
    return riccati_image(u, p, [](const auto& uu, const auto& pp, std::size_t i) {
        return riccati_apply_plus(uu, pp, i);
    });
}

LatticeFn riccati_image_minus(const LatticeFn& u, const PotentialQuad& p) {
    return riccati_image(u, p, [](const auto& uu, const auto& pp, std::size_t i) {
        return riccati_apply_minus(uu, pp, i);
    });
}

double schrodinger_residual(const LatticeFn& psi, const LatticeFn& v, std::size_t i) {
    if (!(psi.grid() == v.grid())) throw GridMismatchError{};
    if (i + 2 >= psi.size())
        throw IndexError("schrodinger_residual needs two successor samples", i);
    const double d1 = q_derivative(psi, i);
    const double d2 = q_derivative(psi, i + 1);
    const double second = (d1 - d2) / psi.grid().dq_scale(i);
    return -second + v[i] * psi[i];
}

double schrodinger_term_scale(const LatticeFn& psi, const LatticeFn& v, std::size_t i) {
    const double lam0 = std::abs(psi.grid().dq_scale(i));
    const double lam1 = std::abs(psi.grid().dq_scale(i + 1));
    const double mag = std::abs(psi[i]) + std::abs(psi[i + 1]) + std::abs(psi[i + 2]);
    return mag / (lam0 * lam1) + std::abs(v[i] * psi[i]);
}

} // namespace qdx
