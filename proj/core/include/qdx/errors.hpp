#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace qdx {

/// Numerical domain violation (log of a non-positive factor, division by
/// zero, negative discriminant, ...). Carries the offending lattice index
/// when the failure is localized.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what, std::optional<std::size_t> index = std::nullopt)
        : std::runtime_error(index ? what + " (lattice index " + std::to_string(*index) + ")" : what),
          index_(index) {}

    std::optional<std::size_t> index() const noexcept { return index_; }

private:
    std::optional<std::size_t> index_;
};

/// A truncated sum/product whose tail term is still above the configured
/// tolerance. `last_term` is the magnitude of the last term or |factor-1|.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double last_term)
        : std::runtime_error(what + " (last term " + std::to_string(last_term) + ")"),
          last_term_(last_term) {}

    double last_term() const noexcept { return last_term_; }

private:
    double last_term_;
};

/// Movable pole of a Riccati flow: the Backlund denominator 1 + t*J(x)
/// vanishes between two lattice points. A feature of the flow, not a bug,
/// but fatal for pointwise evaluation.
class PoleError : public DomainError {
public:
    explicit PoleError(std::size_t index)
        : DomainError("movable pole: Backlund denominator changes sign", index) {}
};

/// Lattice index without the required neighbour samples.
class IndexError : public std::out_of_range {
public:
    IndexError(const std::string& what, std::size_t index)
        : std::out_of_range(what + " (index " + std::to_string(index) + ")") {}
};

/// Two lattice functions on different grids were combined.
class GridMismatchError : public std::logic_error {
public:
    GridMismatchError() : std::logic_error("lattice functions live on different grids") {}
};

} // namespace qdx
