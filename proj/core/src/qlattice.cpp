#include "qdx/qlattice.hpp"

#include <cfloat>
#include <cmath>
#include <utility>

namespace qdx {

QGrid::QGrid(double base, double q, std::size_t depth)
    : base_(base), q_(q), depth_(depth) {
    if (!std::isfinite(base) || base == 0.0)
        throw DomainError("grid base must be finite and nonzero");
    if (!(q > 0.0 && q < 1.0))
        throw DomainError("grid ratio q must lie strictly in (0,1)");
    if (depth == 0)
        throw DomainError("grid depth must be positive");

    auto pts = std::make_shared<std::vector<double>>(depth + 1);
    (*pts)[0] = base;
    for (std::size_t i = 0; i < depth; ++i)
        (*pts)[i + 1] = (*pts)[i] * q;
    if (std::abs(pts->back()) < DBL_MIN)
        throw DomainError("grid underflows: |base * q^depth| below the smallest normal double");
    points_ = std::move(pts);
}

LatticeFn::LatticeFn(QGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw DomainError("lattice function needs depth+1 samples");
}

LatticeFn LatticeFn::constant(const QGrid& grid, double value) {
    return LatticeFn(grid, std::vector<double>(grid.size(), value));
}

LatticeFn LatticeFn::sample(const QGrid& grid, const std::function<double(double)>& f) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.point(i));
    return LatticeFn(grid, std::move(v));
}

LatticeFn LatticeFn::shifted() const {
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i + 1 < values_.size(); ++i) v[i] = values_[i + 1];
    v.back() = values_.back();
    return LatticeFn(grid_, std::move(v));
}

LatticeFn& LatticeFn::operator+=(const LatticeFn& o) {
    check_same_grid(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

LatticeFn& LatticeFn::operator-=(const LatticeFn& o) {
    check_same_grid(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

LatticeFn& LatticeFn::operator*=(const LatticeFn& o) {
    check_same_grid(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= o.values_[i];
    return *this;
}

LatticeFn& LatticeFn::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

double q_derivative(const LatticeFn& f, std::size_t i) {
    if (i + 1 >= f.size())
        throw IndexError("q_derivative needs the successor sample", i);
    return (f[i] - f[i + 1]) / f.grid().dq_scale(i);
}

double q_integral(const LatticeFn& f, double tail_tol) {
    const std::size_t n = f.grid().depth();
    const double last = f.grid().dq_scale(n) * f[n];
    if (!(std::abs(last) < tail_tol))
        throw ConvergenceError("Jackson integral tail above tolerance", std::abs(last));
    double sum = 0.0;
    for (std::size_t m = n + 1; m-- > 0;)
        sum += f.grid().dq_scale(m) * f[m];
    return sum;
}

LatticeFn q_integral_partial(const LatticeFn& f, double tail_tol) {
    const std::size_t n = f.grid().depth();
    const double last = f.grid().dq_scale(n) * f[n];
    if (!(std::abs(last) < tail_tol))
        throw ConvergenceError("Jackson integral tail above tolerance", std::abs(last));
    std::vector<double> out(f.size());
    double sum = 0.0;
    for (std::size_t m = n + 1; m-- > 0;) {
        sum += f.grid().dq_scale(m) * f[m];
        out[m] = sum;
    }
    return LatticeFn(f.grid(), std::move(out));
}

namespace {

double product_factor(const LatticeFn& f, std::size_t m) {
    return 1.0 - f.grid().dq_scale(m) * f[m];
}

void check_product_preconditions(const LatticeFn& f, double tail_tol) {
    const std::size_t n = f.grid().depth();
    for (std::size_t m = 0; m <= n; ++m) {
        if (!(product_factor(f, m) > 0.0))
            throw DomainError("q-product factor is not strictly positive", m);
    }
    const double tail = std::abs(product_factor(f, n) - 1.0);
    if (!(tail < tail_tol))
        throw ConvergenceError("q-product tail factor far from 1", tail);
}

} // namespace

double q_product(const LatticeFn& f, double tail_tol) {
    check_product_preconditions(f, tail_tol);
    double prod = 1.0;
    for (std::size_t m = f.grid().depth() + 1; m-- > 0;)
        prod *= product_factor(f, m);
    return prod;
}

LatticeFn q_product_partial(const LatticeFn& f, double tail_tol) {
    check_product_preconditions(f, tail_tol);
    std::vector<double> out(f.size());
    double prod = 1.0;
    for (std::size_t m = f.grid().depth() + 1; m-- > 0;) {
        prod *= product_factor(f, m);
        out[m] = prod;
    }
    return LatticeFn(f.grid(), std::move(out));
}

RSeries power_law_rseries(double alpha, double q) {
    if (!(alpha > -1.0))
        throw DomainError("power-law coefficient rule needs alpha > -1");
    return RSeries{
        [alpha, q](double x) {
            const double p = std::pow(x, alpha + 1.0);
            return (1.0 - p) / ((1.0 - q) * p);
        },
        q};
}

double exp_r(double x, const RSeries& series) {
    if (x == 0.0) return 1.0;
    double sum = 1.0;
    double term = 1.0;
    double point = 1.0;
    for (std::size_t n = 1; n <= series.truncation; ++n) {
        point *= series.q;
        const double r = series.coefficient_rule(point);
        if (r == 0.0 || !std::isfinite(r))
            throw DomainError("exp_R denominator R(q^k) vanishes or is not finite", n);
        term *= x / r;
        sum += term;
        if (std::abs(term) < series.tail_tol) return sum;
    }
    throw ConvergenceError("exp_R series did not converge within truncation", std::abs(term));
}

} // namespace qdx
