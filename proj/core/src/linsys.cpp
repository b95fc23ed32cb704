#include "qdx/linsys.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace qdx {

PotentialQuad::PotentialQuad(LatticeFn r, LatticeFn s, LatticeFn t, LatticeFn v)
    : R(std::move(r)), S(std::move(s)), T(std::move(t)), V(std::move(v)) {
    if (!(R.grid() == S.grid() && R.grid() == T.grid() && R.grid() == V.grid()))
        throw GridMismatchError{};
}

PotentialQuad PotentialQuad::zero(const QGrid& grid) {
    return {LatticeFn::constant(grid, 0.0), LatticeFn::constant(grid, 0.0),
            LatticeFn::constant(grid, 0.0), LatticeFn::constant(grid, 0.0)};
}

LatticeFn SolutionPair::ratio() const {
    std::vector<double> u(psi.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (psi[i] == 0.0)
            throw DomainError("ratio u = phi/psi at a zero of psi", i);
        u[i] = phi[i] / psi[i];
    }
    return LatticeFn(psi.grid(), std::move(u));
}

Mat2 lambda_at(const PotentialQuad& p, std::size_t i) {
    if (i >= p.grid().size())
        throw IndexError("lambda_at index out of range", i);
    const double lam = p.grid().dq_scale(i);
    return {1.0 - lam * p.R[i], -lam * p.S[i],
            -lam * p.V[i], 1.0 - lam * p.T[i]};
}

Mat2 resolvent_product(const PotentialQuad& p, std::size_t i, std::size_t n) {
    if (i + n > p.grid().depth())
        throw IndexError("resolvent_product runs past the lattice", i + n);
    Mat2 m = Mat2::identity();
    for (std::size_t j = i; j < i + n; ++j)
        m = lambda_at(p, j) * m;
    return m;
}

SolutionPair propagate(const PotentialQuad& p, double psi0, double phi0) {
    const std::size_t n = p.grid().depth();
    std::vector<double> psi(n + 1), phi(n + 1);
    psi[0] = psi0;
    phi[0] = phi0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto next = lambda_at(p, i).apply(psi[i], phi[i]);
        psi[i + 1] = next[0];
        phi[i + 1] = next[1];
        if (!std::isfinite(psi[i + 1]) || !std::isfinite(phi[i + 1]))
            throw DomainError("propagate overflowed the double range", i + 1);
    }
    return {LatticeFn(p.grid(), std::move(psi)), LatticeFn(p.grid(), std::move(phi))};
}

double propagated_residual(const PotentialQuad& p, const SolutionPair& s, std::size_t i) {
    if (i + 1 >= s.psi.size())
        throw IndexError("propagated_residual needs the successor sample", i);
    const auto pred = lambda_at(p, i).apply(s.psi[i], s.phi[i]);
    const double defect = std::max(std::abs(s.psi[i + 1] - pred[0]),
                                   std::abs(s.phi[i + 1] - pred[1]));
    const double scale = std::max({1.0, std::abs(s.psi[i]), std::abs(s.phi[i])});
    return defect / scale;
}

Mat2 closed_form_V0(const PotentialQuad& p, std::size_t i, double tail_tol) {
    const QGrid& g = p.grid();
    const std::size_t n = g.depth();
    if (i > n) throw IndexError("closed_form_V0 index out of range", i);
    for (std::size_t m = 0; m <= n; ++m) {
        if (p.V[m] != 0.0)
            throw DomainError("closed_form_V0 requires V identically zero", m);
    }

    // ln(1-(1-q)tR(t)) and ln(1-(1-q)tT(t)) sampled, then suffix-summed:
    // sum over m >= i is the Jackson integral of ln(.)/t from 0 to point(i),
    // divided by (1-q).
    std::vector<double> lr(n + 1), lt(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        const double fr = 1.0 - g.dq_scale(m) * p.R[m];
        const double ft = 1.0 - g.dq_scale(m) * p.T[m];
        if (!(fr > 0.0)) throw DomainError("closed_form_V0: log factor 1-(1-q)tR(t) <= 0", m);
        if (!(ft > 0.0)) throw DomainError("closed_form_V0: log factor 1-(1-q)tT(t) <= 0", m);
        lr[m] = std::log(fr);
        lt[m] = std::log(ft);
    }
    const double tail = std::max(std::abs(lr[n]), std::abs(lt[n]));
    if (!(tail < tail_tol))
        throw ConvergenceError("closed_form_V0 log-factor tail above tolerance", tail);

    std::vector<double> sr(n + 2, 0.0), st(n + 2, 0.0);
    for (std::size_t m = n + 1; m-- > 0;) {
        sr[m] = sr[m + 1] + lr[m];
        st[m] = st[m + 1] + lt[m];
    }

    // Corner entry: B(x_i) = -A_T(x_i) * int_0^{x_i} S(t)/(1-(1-q)tR(t))
    //   * exp((1/(1-q)) int_0^t ln(ratio)/s d_q s) d_q t.
    double corner_sum = 0.0;
    for (std::size_t m = n + 1; m-- > i;) {
        const double fr = 1.0 - g.dq_scale(m) * p.R[m];
        corner_sum += g.dq_scale(m) * p.S[m] / fr * std::exp(sr[m] - st[m]);
    }

    const double diag_r = std::exp(sr[i]);
    const double diag_t = std::exp(st[i]);
    return {diag_r, -diag_t * corner_sum, 0.0, diag_t};
}

double three_term_step(const PotentialQuad& p, double psi_n, double psi_n1, std::size_t n) {
    const QGrid& g = p.grid();
    if (g.base() != 1.0)
        throw DomainError("three_term_step is defined on the lattice {q^n} (base 1)");
    if (n + 1 > g.depth())
        throw IndexError("three_term_step needs samples at n and n+1", n);
    const double q = g.q();
    const double c1 = 1.0 - (1.0 - q) * g.point(n + 1) * p.R[n + 1];
    const double c0 = (1.0 - q) * (1.0 - q) * g.point(n) * g.point(n + 1) * p.S[n + 1] * p.V[n];
    return c1 * psi_n1 + c0 * psi_n;
}

} // namespace qdx
