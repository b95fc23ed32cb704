#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "qdx/errors.hpp"

namespace qdx {

/// Default truncation depth for geometric lattices.
inline constexpr std::size_t kDefaultDepth = 256;
/// Default absolute tolerance on the last term of a truncated Jackson sum
/// (or |last factor - 1| of a truncated product).
inline constexpr double kDefaultTailTol = 1e-12;

/// Geometric lattice {base * q^i : i = 0..depth} with ratio q in (0,1).
///
/// The lattice is the evaluation domain of every q-difference operator in
/// this library: multiplying the argument by q is an index shift, so the
/// q-derivative is exact in this representation. Points are computed once
/// at construction (iterated multiplication, strictly monotone toward 0)
/// and shared between copies.
class QGrid {
public:
    QGrid(double base, double q, std::size_t depth = kDefaultDepth);

    double base() const noexcept { return base_; }
    double q() const noexcept { return q_; }
    std::size_t depth() const noexcept { return depth_; }
    /// Number of samples, depth + 1.
    std::size_t size() const noexcept { return depth_ + 1; }

    double point(std::size_t i) const { return (*points_)[i]; }
    std::span<const double> points() const noexcept { return *points_; }

    /// (1-q) * point(i), the denominator of the q-derivative at i.
    double dq_scale(std::size_t i) const { return (1.0 - q_) * (*points_)[i]; }

    friend bool operator==(const QGrid& a, const QGrid& b) noexcept {
        return a.points_ == b.points_ ||
               (a.base_ == b.base_ && a.q_ == b.q_ && a.depth_ == b.depth_);
    }

private:
    double base_;
    double q_;
    std::size_t depth_;
    std::shared_ptr<const std::vector<double>> points_;
};

/// A scalar function sampled on a QGrid: values[i] = f(base * q^i).
///
/// Arithmetic is defined only between functions on the same grid.
class LatticeFn {
public:
    LatticeFn(QGrid grid, std::vector<double> values);

    /// All samples equal to `value`.
    static LatticeFn constant(const QGrid& grid, double value);
    /// Samples of an arbitrary callable at the lattice points.
    static LatticeFn sample(const QGrid& grid, const std::function<double(double)>& f);

    const QGrid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }

    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    std::span<const double> values() const noexcept { return values_; }

    /// f(q x) as a lattice function: result[i] = values[i+1], bit-exact.
    /// The final slot has no successor sample and is clamped to values[N];
    /// it only ever multiplies the (1-q)q^N-sized tail of a Jackson sum.
    LatticeFn shifted() const;

    LatticeFn& operator+=(const LatticeFn& o);
    LatticeFn& operator-=(const LatticeFn& o);
    LatticeFn& operator*=(const LatticeFn& o);
    LatticeFn& operator*=(double s);

    friend LatticeFn operator+(LatticeFn a, const LatticeFn& b) { return a += b; }
    friend LatticeFn operator-(LatticeFn a, const LatticeFn& b) { return a -= b; }
    friend LatticeFn operator*(LatticeFn a, const LatticeFn& b) { return a *= b; }
    friend LatticeFn operator*(double s, LatticeFn a) { return a *= s; }

private:
    void check_same_grid(const LatticeFn& o) const {
        if (!(grid_ == o.grid_)) throw GridMismatchError{};
    }

    QGrid grid_;
    std::vector<double> values_;
};

/// q-derivative at lattice index i:
///   (f(x) - f(qx)) / ((1-q) x)  ==  (f[i] - f[i+1]) / ((1-q) point(i)).
/// Exact in the lattice representation; throws IndexError at i = depth.
double q_derivative(const LatticeFn& f, std::size_t i);

/// Truncated Jackson integral from 0 to base:
///   sum_{n=0..N} (1-q) q^n base f[n].
/// Throws ConvergenceError if the last term exceeds `tail_tol`.
double q_integral(const LatticeFn& f, double tail_tol = kDefaultTailTol);

/// All partial Jackson integrals at once: result[i] = integral from 0 to
/// point(i), i.e. the suffix sum over terms (1-q) point(m) f[m], m >= i.
LatticeFn q_integral_partial(const LatticeFn& f, double tail_tol = kDefaultTailTol);

/// Truncated deformation product at base:
///   prod_{n=0..N} (1 - (1-q) q^n base f[n]).
/// Every factor must be strictly positive (log-branch safety; violations
/// throw DomainError with the offending index) and the last factor must be
/// within `tail_tol` of 1.
double q_product(const LatticeFn& f, double tail_tol = kDefaultTailTol);

/// Partial products: result[i] = prod over factors at indices m >= i.
LatticeFn q_product_partial(const LatticeFn& f, double tail_tol = kDefaultTailTol);

/// Generalized exponential series
///   exp_R(x) = sum_{n>=0} x^n / (R(q) R(q^2) ... R(q^n)),
/// with the empty product equal to 1. `coefficient_rule` is R as a function
/// of the lattice point q^k.
struct RSeries {
    std::function<double(double)> coefficient_rule;
    double q = 0.5;
    std::size_t truncation = 512;
    double tail_tol = kDefaultTailTol;
};

/// The coefficient rule R(x) = (1 - x^(alpha+1)) / ((1-q) x^(alpha+1))
/// underlying the power-law deformation family; alpha = 0 reproduces the
/// standard q-exponential.
RSeries power_law_rseries(double alpha, double q);

double exp_r(double x, const RSeries& series);

} // namespace qdx
