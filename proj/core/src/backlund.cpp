#include "qdx/backlund.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <utility>

namespace qdx {

namespace {

constexpr double kNoiseCoef = 1e-12;

void check_tail(double value, const char* what, double tail_tol) {
    if (!(std::abs(value) < tail_tol))
        throw ConvergenceError(std::string(what) + " tail above tolerance", std::abs(value));
}

/// First index i where sign(f[i]) != sign(f[i+1]) (or f[i] == 0), if any.
template <typename F>
std::optional<std::size_t> sign_change(const F& f, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        if (f(i) == 0.0 || std::signbit(f(i)) != std::signbit(f(i + 1)))
            return i;
    }
    return std::nullopt;
}

void require_schrodinger_form(const PotentialQuad& p) {
    for (std::size_t i = 0; i < p.grid().size(); ++i) {
        if (p.R[i] != 0.0 || p.T[i] != 0.0 || p.S[i] != 1.0)
            throw DomainError("operation requires the Schrodinger form R=T=0, S=1", i);
    }
}

} // namespace

SeedSolution SeedSolution::create(LatticeFn u0, PotentialQuad potentials, double tol) {
    if (!(u0.grid() == potentials.grid())) throw GridMismatchError{};
    for (std::size_t i = 0; i + 1 < u0.size(); ++i) {
        const double img = riccati_apply_plus(u0, potentials, i);
        const double v = potentials.V[i];
        const double allowed = tol * std::max({1.0, std::abs(img), std::abs(v)}) +
                               kNoiseCoef * riccati_term_scale(u0, potentials, i);
        if (!(std::abs(img - v) <= allowed))
            throw DomainError("seed is not a Riccati solution of its potentials", i);
    }
    return SeedSolution{std::move(u0), std::move(potentials)};
}

SeedSolution SeedSolution::from_rst(LatticeFn u0, LatticeFn r, LatticeFn s, LatticeFn t) {
    PotentialQuad p(std::move(r), std::move(s), std::move(t), LatticeFn::constant(u0.grid(), 0.0));
    p.V = riccati_image_plus(u0, p);
    return SeedSolution{std::move(u0), std::move(p)};
}

BacklundKernel backlund_kernel(const LatticeFn& u0, const PotentialQuad& p, double tail_tol) {
    const QGrid& g = u0.grid();
    const std::size_t n = g.depth();

    std::vector<double> fa(n + 1), fb(n + 1), log_ratio(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double lam = g.dq_scale(i);
        const double u0_next = (i < n) ? u0[i + 1] : u0[n];
        fa[i] = 1.0 - lam * (p.R[i] + u0[i] * p.S[i]);
        fb[i] = 1.0 - lam * (p.T[i] - u0_next * p.S[i]);
        if (!(fa[i] > 0.0))
            throw DomainError("log factor 1-(1-q)y[R+u0 S] is not positive", i);
        if (!(fb[i] > 0.0))
            throw DomainError("log factor 1-(1-q)y[T-u0(q.) S] is not positive", i);
        log_ratio[i] = std::log(fa[i]) - std::log(fb[i]);
    }
    check_tail(log_ratio[n], "Backlund growth exponent", tail_tol);

    std::vector<double> growth(n + 1);
    double acc = 0.0;
    for (std::size_t i = n + 1; i-- > 0;) {
        acc += log_ratio[i];
        growth[i] = std::exp(acc);
    }

    std::vector<double> integral(n + 1);
    check_tail(g.dq_scale(n) * p.S[n] / fa[n] * growth[n], "Backlund integral", tail_tol);
    double sum = 0.0;
    for (std::size_t i = n + 1; i-- > 0;) {
        sum += g.dq_scale(i) * p.S[i] / fa[i] * growth[i];
        integral[i] = sum;
    }

    return BacklundKernel{LatticeFn(g, std::move(fa)), LatticeFn(g, std::move(fb)),
                          LatticeFn(g, std::move(growth)), LatticeFn(g, std::move(integral))};
}

SolutionPair general_solution(const SeedSolution& seed, double D, double F, double tail_tol) {
    const QGrid& g = seed.grid();
    const std::size_t n = g.depth();
    const PotentialQuad& p = seed.potentials;
    const LatticeFn& u0 = seed.u0;

    const BacklundKernel k = backlund_kernel(u0, p, tail_tol);

    // exp(-(1/(1-q)) int ln(factor)/t d_q t) as suffix log sums.
    std::vector<double> psi(n + 1), phi(n + 1);
    double sa = 0.0, sb = 0.0;
    for (std::size_t i = n + 1; i-- > 0;) {
        sa += std::log(k.factor_a[i]);
        sb += std::log(k.factor_b[i]);
        const double combo = D + F * k.integral[i];
        psi[i] = std::exp(-sa) * combo;
        phi[i] = F * std::exp(-sb) + u0[i] * psi[i];
    }

    if (auto z = sign_change([&](std::size_t i) { return D + F * k.integral[i]; }, n))
        throw DomainError("movable zero of psi between adjacent lattice points", *z);

    return SolutionPair{LatticeFn(g, std::move(psi)), LatticeFn(g, std::move(phi))};
}

namespace {

LatticeFn orbit_values(const LatticeFn& u0, const BacklundKernel& k, double t,
                       std::vector<std::uint8_t>* marks) {
    const QGrid& g = u0.grid();
    const std::size_t n = g.depth();
    auto den = [&](std::size_t i) { return 1.0 + t * k.integral[i]; };

    if (marks) {
        marks->assign(n + 1, 0);
        for (std::size_t i = 0; i < n; ++i) {
            if (den(i) == 0.0 || std::signbit(den(i)) != std::signbit(den(i + 1))) {
                (*marks)[i] = 1;
                (*marks)[i + 1] = 1;
            }
        }
    } else if (auto pole = sign_change(den, n)) {
        throw PoleError(*pole);
    }

    std::vector<double> u(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        u[i] = u0[i] + t * k.growth[i] / den(i);
    return LatticeFn(g, std::move(u));
}

} // namespace

LatticeFn backlund_plus(const SeedSolution& seed, double t, double tail_tol) {
    const BacklundKernel k = backlund_kernel(seed.u0, seed.potentials, tail_tol);
    return orbit_values(seed.u0, k, t, nullptr);
}

LatticeFn backlund_minus(const SeedSolution& seed, double t, double tail_tol) {
    const LatticeFn w0 = involution(seed.u0);
    const BacklundKernel k = backlund_kernel(w0, seed.potentials, tail_tol);
    return involution(orbit_values(w0, k, t, nullptr));
}

MaskedOrbit backlund_plus_masked(const SeedSolution& seed, double t, double tail_tol) {
    const BacklundKernel k = backlund_kernel(seed.u0, seed.potentials, tail_tol);
    std::vector<std::uint8_t> marks;
    LatticeFn u = orbit_values(seed.u0, k, t, &marks);
    return MaskedOrbit{std::move(u), std::move(marks)};
}

MaskedOrbit backlund_minus_masked(const SeedSolution& seed, double t, double tail_tol) {
    const LatticeFn w0 = involution(seed.u0);
    const BacklundKernel k = backlund_kernel(w0, seed.potentials, tail_tol);
    std::vector<std::uint8_t> marks;
    LatticeFn u = involution(orbit_values(w0, k, t, &marks));
    return MaskedOrbit{std::move(u), std::move(marks)};
}

double cross_ratio(double u1, double u2, double u3, double u4) {
    const double den = (u3 - u1) * (u2 - u4);
    if (den == 0.0)
        throw DomainError("degenerate cross ratio: coincident orbit values");
    return ((u4 - u3) * (u1 - u2)) / den;
}

double parameter_cross_ratio(double t1, double t2, double t3, double t4) {
    const double den = (t3 - t1) * (t2 - t4);
    if (den == 0.0)
        throw DomainError("degenerate cross ratio: coincident parameters");
    return ((t4 - t3) * (t1 - t2)) / den;
}

std::pair<LatticeFn, LatticeFn> deform_chain(const DeformationChain& chain, double tail_tol) {
    const PotentialQuad& p = chain.seed.potentials;
    LatticeFn u = chain.seed.u0;
    if (chain.params.empty())
        return {u, p.V};

    for (std::size_t stage = chain.params.size(); stage-- > 0;) {
        try {
            const LatticeFn w = involution(u);
            const BacklundKernel k = backlund_kernel(w, p, tail_tol);
            u = involution(orbit_values(w, k, chain.params[stage], nullptr));
        } catch (const DomainError& e) {
            throw DomainError("deformation chain stage " + std::to_string(stage + 1) +
                              " failed: " + e.what());
        }
    }
    return {u, riccati_image_plus(u, p)};
}

LatticeFn deformed_potential_once(const SeedSolution& seed, double t, double tail_tol) {
    require_schrodinger_form(seed.potentials);
    const QGrid& g = seed.grid();
    const std::size_t n = g.depth();
    const LatticeFn& u0 = seed.u0;
    const LatticeFn& v0 = seed.potentials.V;

    const LatticeFn w0 = involution(u0);
    const BacklundKernel k = backlund_kernel(w0, seed.potentials, tail_tol);
    auto den = [&](std::size_t i) { return 1.0 + t * k.integral[i]; };
    if (auto pole = sign_change(den, n)) throw PoleError(*pole);

    // d_q of W = t growth/(1 + t integral), expanded so the (1-q)x factor
    // cancels analytically:
    //   d_q W(x_i) = t [ G_{i+1} (u0_i + u0_{i+1}) / b_i * den_i
    //                    - t G_i^2 / a_i ] / (den_i den_{i+1}),
    // using d_q G = (u0(x) G(qx) + u0(qx) G(x)) and d_q J = growth/a.
    std::vector<double> v(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const std::size_t j = (i < n) ? i + 1 : n;  // clamp at the last slot
        const double g_next = k.growth[j];
        const double den_next = den(j);
        const double u0_next = (i < n) ? u0[i + 1] : u0[n];
        const double num = g_next * (u0[i] + u0_next) / k.factor_b[i] * den(i) -
                           t * k.growth[i] * k.growth[i] / k.factor_a[i];
        const double dq_w = t * num / (den(i) * den_next);
        v[i] = v0[i] - 2.0 * dq_w;
    }
    return LatticeFn(g, std::move(v));
}

std::pair<double, double> quadratic_reconstruct(const LatticeFn& v_t,
                                                const LatticeFn& r_minus_u0,
                                                std::size_t i) {
    if (!(v_t.grid() == r_minus_u0.grid())) throw GridMismatchError{};
    if (i >= v_t.size()) throw IndexError("quadratic_reconstruct index out of range", i);
    const double delta = v_t.grid().dq_scale(i) * 0.5 * (v_t[i] - r_minus_u0[i]);
    const double disc = delta * delta + 2.0 * (v_t[i] + r_minus_u0[i]);
    if (disc < 0.0)
        throw DomainError("negative discriminant in quadratic reconstruction", i);
    const double root = std::sqrt(disc);
    return {0.5 * (delta + root), 0.5 * (delta - root)};
}

SeedSolution power_law_family(double a, double alpha, const QGrid& grid) {
    if (!(alpha > -1.0)) throw DomainError("power-law family needs alpha > -1");
    if (!(grid.base() > 0.0)) throw DomainError("power-law family needs a positive grid base");

    const double q = grid.q();
    LatticeFn u0 = LatticeFn::sample(grid, [&](double x) { return a * std::pow(x, alpha); });
    LatticeFn v0 = LatticeFn::sample(grid, [&](double x) {
        return a * (1.0 - std::pow(q, alpha)) / (1.0 - q) * std::pow(x, alpha - 1.0) +
               a * a * std::pow(q, alpha) * std::pow(x, 2.0 * alpha);
    });
    PotentialQuad p(LatticeFn::constant(grid, 0.0), LatticeFn::constant(grid, 1.0),
                    LatticeFn::constant(grid, 0.0), std::move(v0));
    return SeedSolution::create(std::move(u0), std::move(p));
}

} // namespace qdx
