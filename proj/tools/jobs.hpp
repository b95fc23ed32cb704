#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdx/expr.hpp"
#include "qdx/qlattice.hpp"

namespace qdx::cli {

/// Bad configuration (file, JSON shape, expression syntax, flag values).
/// Maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One fully-specified job: grid, potentials, seed, transform parameters
/// and output options. Loaded from a JSON file, then overridden by flags.
struct JobConfig {
    double grid_base = 1.0;
    double grid_q = 0.5;
    std::size_t grid_depth = kDefaultDepth;

    std::string r_expr = "0";
    std::string s_expr = "1";
    std::string t_expr = "0";
    std::optional<std::string> v_expr; // derived from the seed when absent

    std::string seed_expr = "0";
    expr::Params params;

    double psi0 = 1.0;
    double phi0 = 0.0;

    std::vector<double> t_list;
    std::string transform = "plus"; // plus | minus | chain

    std::string format = "csv"; // csv | json
    double tail_tol = kDefaultTailTol;
    double check_tol = 1e-8;
    std::uint32_t rng_seed = 12345;
};

JobConfig load_job_config(const std::string& path);

/// Flag overrides applied on top of the file.
struct Overrides {
    std::optional<double> grid_base, grid_q, tolerance;
    std::optional<std::size_t> grid_depth;
    std::vector<double> t_list;
    std::optional<std::string> format;
};

void apply_overrides(JobConfig& config, const Overrides& o);

/// Lattice table of the linear system solution (with a closed-form
/// comparison column when V is identically zero). Returns 0.
int run_solve_linear(const JobConfig& config, std::ostream& out, std::ostream& err);

/// Backlund orbit / deformation-chain table; pole rows are marked, not
/// dropped. With exactly four parameters and transform "plus" the table
/// carries the cross-ratio check columns. `selftest` adds a group-law
/// self-test; its failure returns 4.
int run_backlund(const JobConfig& config, bool selftest, std::ostream& out, std::ostream& err);

/// Machine-readable pass/fail report of the invariant suite on the
/// configured problem (or of the classical quadrature oracles with
/// `classic`). Returns 0 when every check passes, 4 otherwise.
int run_verify(const JobConfig& config, bool classic, std::ostream& out, std::ostream& err);

} // namespace qdx::cli
