#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "qdx/errors.hpp"
#include "qdx/qlattice.hpp"

namespace qdx::expr {

/// Parameter bindings for free identifiers.
using Params = std::map<std::string, double>;

struct Node;

/// Immutable arithmetic expression over literals, the variable `x`, named
/// parameters, + - * / ^, unary minus and the functions exp, ln,
/// pow(base, exponent). ASTs are shared and safe to evaluate concurrently.
class Expr {
public:
    explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

    const Node& root() const { return *root_; }

private:
    std::shared_ptr<const Node> root_;
};

/// Syntax error with the byte offset of the offending token and a
/// description of what would have been accepted there.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, std::string expected)
        : std::runtime_error("syntax error at byte " + std::to_string(offset) +
                             ": expected " + expected),
          offset_(offset),
          expected_(std::move(expected)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

/// Parse `src`. Precedence, tightest first: ^ (right associative), unary
/// minus, * and /, + and - (left associative). The grammar is documented
/// in EBNF in the README and is the CLI's contract.
Expr parse(std::string_view src);

/// Evaluate at x with the given bindings. Domain violations (ln of a
/// non-positive value, division by zero, fractional powers of negatives)
/// throw DomainError instead of propagating NaN; unbound identifiers throw
/// DomainError naming the identifier.
double eval(const Expr& e, double x, const Params& params = {});

/// Render the expression; parse(to_string(e)) evaluates identically to e.
std::string to_string(const Expr& e);

/// Evaluate at every lattice point. Evaluation errors are rethrown with
/// the lattice index attached.
LatticeFn sample(const Expr& e, const QGrid& grid, const Params& params = {});

} // namespace qdx::expr
