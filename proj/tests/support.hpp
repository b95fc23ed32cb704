#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "qdx/linsys.hpp"
#include "qdx/qlattice.hpp"

namespace qdx::test {

/// Machine-noise allowance: evaluation of a q-difference expression cannot
/// be certified below ~ eps times the magnitude of its largest term
/// (the d_q quotient divides storage quantization by (1-q) q^i base).
inline constexpr double kNoiseCoef = 1e-12;

/// Residual of the identity lhs == rhs, relative to the values and net of
/// the rounding floor set by term_scale. Compare the result against the
/// identity's tolerance.
inline double scaled_defect(double lhs, double rhs, double term_scale = 0.0) {
    const double noise = kNoiseCoef * term_scale;
    const double err = std::max(0.0, std::abs(lhs - rhs) - noise);
    return err / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

/// Plain value comparison scale-normalized at 1.
inline double value_defect(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

inline double sup_diff(const LatticeFn& a, const LatticeFn& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

/// Random polynomial c0 + c1 x + c2 x^2 + c3 x^3 with coefficients in
/// [-amplitude, amplitude].
inline LatticeFn random_poly(const QGrid& grid, std::mt19937& rng, double amplitude) {
    std::uniform_real_distribution<double> dist(-amplitude, amplitude);
    const double c0 = dist(rng), c1 = dist(rng), c2 = dist(rng), c3 = dist(rng);
    return LatticeFn::sample(grid, [=](double x) { return c0 + x * (c1 + x * (c2 + x * c3)); });
}

/// Rounding-amplification scale of the quadratic reconstruction at index i:
/// the root error is first-order (|V| + |R- u0|) / sqrt(discriminant), which
/// blows up where the discriminant cancels (e.g. t -> 0 at deep indices).
inline double reconstruction_term_scale(const LatticeFn& v_t, const LatticeFn& r_minus_u0,
                                        std::size_t i) {
    const double delta = v_t.grid().dq_scale(i) * 0.5 * (v_t[i] - r_minus_u0[i]);
    const double disc = delta * delta + 2.0 * (v_t[i] + r_minus_u0[i]);
    const double mag = std::abs(v_t[i]) + std::abs(r_minus_u0[i]);
    return mag / std::max(std::sqrt(std::max(disc, 0.0)), 1e-150);
}

/// Independent route for the corner entry of the V=0 closed form: the
/// iterative series, direct products and sums only (no exp/log).
inline double series_corner_oracle(const PotentialQuad& p, std::size_t i) {
    const QGrid& g = p.grid();
    const std::size_t n = g.depth();
    double pt = 1.0;
    for (std::size_t k = n + 1; k-- > i;) pt *= 1.0 - g.dq_scale(k) * p.T[k];
    double total = 0.0;
    for (std::size_t m = i; m <= n; ++m) {
        double tail = 1.0;
        for (std::size_t k = m; k <= n; ++k)
            tail *= (1.0 - g.dq_scale(k) * p.R[k]) / (1.0 - g.dq_scale(k) * p.T[k]);
        total += g.dq_scale(m) * p.S[m] / (1.0 - g.dq_scale(m) * p.R[m]) * tail;
    }
    return -pt * total;
}

} // namespace qdx::test
