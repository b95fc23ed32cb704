#include "jobs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <random>
#include <set>

#include "json.hpp"

#include "qdx/backlund.hpp"
#include "qdx/classic.hpp"
#include "qdx/darboux.hpp"
#include "qdx/linsys.hpp"
#include "table.hpp"

namespace qdx::cli {

namespace {

using nlohmann::json;

constexpr double kNoiseCoef = 1e-12;

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const std::string& where) {
    for (const auto& item : j.items()) {
        if (!known.contains(item.key()))
            throw ConfigError("unknown key \"" + item.key() + "\" in " + where);
    }
}

double as_number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ConfigError(where + " must be a number");
    return j.get<double>();
}

std::string as_string(const json& j, const std::string& where) {
    if (!j.is_string()) throw ConfigError(where + " must be a string");
    return j.get<std::string>();
}

/// Residual of lhs == rhs relative to the values, net of the rounding
/// floor 1e-12 * term_scale. Matches the library-wide check convention.
double scaled_defect(double lhs, double rhs, double term_scale) {
    const double err = std::max(0.0, std::abs(lhs - rhs) - kNoiseCoef * term_scale);
    return err / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

struct LatticeProblem {
    QGrid grid;
    PotentialQuad potentials;
    LatticeFn u0;
    bool v_given;
};

LatticeProblem build_problem(const JobConfig& c) {
    if (!(c.grid_q > 0.0 && c.grid_q < 1.0))
        throw ConfigError("grid.q = " + format_float(c.grid_q) +
                          " is outside (0,1); q = 1 is the classical limit, use "
                          "`verify --classic` for the differential-quadrature oracles");
    QGrid grid(c.grid_base, c.grid_q, c.grid_depth);

    expr::Params params = c.params;
    params.try_emplace("q", c.grid_q); // bound for convenience, user value wins

    auto sample = [&](const std::string& src, const char* what) {
        try {
            return expr::sample(expr::parse(src), grid, params);
        } catch (const expr::ParseError& e) {
            throw ConfigError(std::string(what) + ": " + e.what());
        }
    };

    LatticeFn r = sample(c.r_expr, "potentials.R");
    LatticeFn s = sample(c.s_expr, "potentials.S");
    LatticeFn t = sample(c.t_expr, "potentials.T");
    LatticeFn u0 = sample(c.seed_expr, "seed");

    if (c.v_expr) {
        LatticeFn v = sample(*c.v_expr, "potentials.V");
        return {grid, PotentialQuad(std::move(r), std::move(s), std::move(t), std::move(v)),
                std::move(u0), true};
    }
    PotentialQuad p(r, s, t, LatticeFn::constant(grid, 0.0));
    p.V = riccati_image_plus(u0, p);
    return {grid, std::move(p), std::move(u0), false};
}

SeedSolution build_seed(const LatticeProblem& prob, double tol) {
    return SeedSolution::create(prob.u0, prob.potentials, tol);
}

bool v_is_zero(const PotentialQuad& p) {
    for (std::size_t i = 0; i < p.grid().size(); ++i)
        if (p.V[i] != 0.0) return false;
    return true;
}

double nan_value() { return std::nan(""); }

} // namespace

JobConfig load_job_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    reject_unknown_keys(j,
                        {"grid", "potentials", "seed", "params", "initial", "transform",
                         "t", "format", "tail_tolerance", "tolerance", "rng_seed"},
                        "config");

    JobConfig c;
    if (j.contains("grid")) {
        const auto& g = j["grid"];
        reject_unknown_keys(g, {"base", "q", "depth"}, "grid");
        if (g.contains("base")) c.grid_base = as_number(g["base"], "grid.base");
        if (g.contains("q")) c.grid_q = as_number(g["q"], "grid.q");
        if (g.contains("depth")) {
            const double d = as_number(g["depth"], "grid.depth");
            if (d < 1 || d != std::floor(d)) throw ConfigError("grid.depth must be a positive integer");
            c.grid_depth = static_cast<std::size_t>(d);
        }
    }
    if (j.contains("potentials")) {
        const auto& p = j["potentials"];
        reject_unknown_keys(p, {"R", "S", "T", "V"}, "potentials");
        if (p.contains("R")) c.r_expr = as_string(p["R"], "potentials.R");
        if (p.contains("S")) c.s_expr = as_string(p["S"], "potentials.S");
        if (p.contains("T")) c.t_expr = as_string(p["T"], "potentials.T");
        if (p.contains("V")) c.v_expr = as_string(p["V"], "potentials.V");
    }
    if (j.contains("seed")) c.seed_expr = as_string(j["seed"], "seed");
    if (j.contains("params")) {
        for (const auto& item : j["params"].items())
            c.params[item.key()] = as_number(item.value(), "params." + item.key());
    }
    if (j.contains("initial")) {
        const auto& init = j["initial"];
        reject_unknown_keys(init, {"psi", "phi"}, "initial");
        if (init.contains("psi")) c.psi0 = as_number(init["psi"], "initial.psi");
        if (init.contains("phi")) c.phi0 = as_number(init["phi"], "initial.phi");
    }
    if (j.contains("transform")) {
        c.transform = as_string(j["transform"], "transform");
        if (c.transform != "plus" && c.transform != "minus" && c.transform != "chain")
            throw ConfigError("transform must be one of plus, minus, chain");
    }
    if (j.contains("t")) {
        if (j["t"].is_array()) {
            for (const auto& v : j["t"]) c.t_list.push_back(as_number(v, "t[]"));
        } else {
            c.t_list.push_back(as_number(j["t"], "t"));
        }
    }
    if (j.contains("format")) {
        c.format = as_string(j["format"], "format");
        if (c.format != "csv" && c.format != "json")
            throw ConfigError("format must be csv or json");
    }
    if (j.contains("tail_tolerance")) c.tail_tol = as_number(j["tail_tolerance"], "tail_tolerance");
    if (j.contains("tolerance")) c.check_tol = as_number(j["tolerance"], "tolerance");
    if (j.contains("rng_seed")) {
        const double s = as_number(j["rng_seed"], "rng_seed");
        if (s < 0 || s != std::floor(s)) throw ConfigError("rng_seed must be a non-negative integer");
        c.rng_seed = static_cast<std::uint32_t>(s);
    }
    return c;
}

void apply_overrides(JobConfig& config, const Overrides& o) {
    if (o.grid_base) config.grid_base = *o.grid_base;
    if (o.grid_q) config.grid_q = *o.grid_q;
    if (o.grid_depth) config.grid_depth = *o.grid_depth;
    if (o.tolerance) config.check_tol = *o.tolerance;
    if (!o.t_list.empty()) config.t_list = o.t_list;
    if (o.format) {
        if (*o.format != "csv" && *o.format != "json")
            throw ConfigError("--format must be csv or json");
        config.format = *o.format;
    }
}

int run_solve_linear(const JobConfig& config, std::ostream& out, std::ostream& err) {
    const LatticeProblem prob = build_problem(config);
    const QGrid& g = prob.grid;
    const SolutionPair s = propagate(prob.potentials, config.psi0, config.phi0);

    const bool with_closed_form = v_is_zero(prob.potentials);
    std::vector<std::string> columns{"index", "x", "psi", "phi", "u", "residual"};
    if (with_closed_form) columns.push_back("prop1_delta");

    double max_delta = 0.0;
    Table table(columns);
    for (std::size_t i = 0; i <= g.depth(); ++i) {
        std::vector<double> row{static_cast<double>(i), g.point(i), s.psi[i], s.phi[i],
                                s.psi[i] != 0.0 ? s.phi[i] / s.psi[i] : nan_value(),
                                i < g.depth() ? propagated_residual(prob.potentials, s, i)
                                              : nan_value()};
        if (with_closed_form) {
            // Lambda_inf(x_i) (psi,phi)(x_i) reconstructs the deep-end limit
            const Mat2 cf = closed_form_V0(prob.potentials, i, config.tail_tol);
            const auto limit = cf.apply(s.psi[i], s.phi[i]);
            const std::size_t n = g.depth();
            const double scale = std::max({1.0, std::abs(s.psi[n]), std::abs(s.phi[n])});
            const double delta = std::max(std::abs(limit[0] - s.psi[n]),
                                          std::abs(limit[1] - s.phi[n])) /
                                 scale;
            row.push_back(delta);
            max_delta = std::max(max_delta, delta);
        }
        table.add_row(std::move(row));
    }
    table.emit(config.format, out);
    if (with_closed_form)
        err << "max |closed-form delta| = " << format_float(max_delta) << "\n";
    return 0;
}

namespace {

int run_cross_ratio_table(const JobConfig& config, const SeedSolution& seed,
                          std::ostream& out, std::ostream& err) {
    const QGrid& g = seed.grid();
    const auto& ts = config.t_list;
    std::vector<LatticeFn> orbit;
    for (double t : ts) orbit.push_back(backlund_plus(seed, t, config.tail_tol));
    const double target = parameter_cross_ratio(ts[0], ts[1], ts[2], ts[3]);

    Table table({"index", "x", "u_t1", "u_t2", "u_t3", "u_t4", "cross_ratio",
                 "cross_ratio_target"});
    double worst = 0.0;
    for (std::size_t i = 0; i <= g.depth(); ++i) {
        const double den = (orbit[2][i] - orbit[0][i]) * (orbit[1][i] - orbit[3][i]);
        double ratio = nan_value();
        if (std::abs(den) > 1e-6) {
            ratio = cross_ratio(orbit[0][i], orbit[1][i], orbit[2][i], orbit[3][i]);
            worst = std::max(worst, std::abs(ratio - target));
        }
        table.add_row({static_cast<double>(i), g.point(i), orbit[0][i], orbit[1][i],
                       orbit[2][i], orbit[3][i], ratio, target});
    }
    table.emit(config.format, out);
    err << "max |cross ratio - parameter side| = " << format_float(worst) << "\n";
    return 0;
}

int run_group_selftest(const JobConfig& config, const SeedSolution& seed, std::ostream& err) {
    std::mt19937 rng(config.rng_seed);
    std::uniform_real_distribution<double> dt(-0.5, 0.5);
    double worst = 0.0;
    for (int rep = 0; rep < 5; ++rep) {
        const double t1 = dt(rng), t2 = dt(rng);
        const LatticeFn inner = backlund_plus(seed, t2, config.tail_tol);
        const SeedSolution stage = SeedSolution::create(inner, seed.potentials, 1e-7);
        const LatticeFn composed = backlund_plus(stage, t1, config.tail_tol);
        const LatticeFn direct = backlund_plus(seed, t1 + t2, config.tail_tol);
        for (std::size_t i = 0; i < composed.size(); ++i)
            worst = std::max(worst, std::abs(composed[i] - direct[i]));
    }
    err << "group-law self-test: max deviation = " << format_float(worst) << "\n";
    return worst < config.check_tol ? 0 : 4;
}

} // namespace

int run_backlund(const JobConfig& config, bool selftest, std::ostream& out, std::ostream& err) {
    if (config.t_list.empty())
        throw ConfigError("backlund needs at least one transform parameter t");

    const LatticeProblem prob = build_problem(config);
    const QGrid& g = prob.grid;
    const SeedSolution seed = build_seed(prob, SeedSolution::kSeedTol);

    if (config.transform == "plus" && config.t_list.size() == 4)
        return run_cross_ratio_table(config, seed, out, err);
    if (config.transform != "chain" && config.t_list.size() != 1)
        throw ConfigError("transform \"" + config.transform +
                          "\" takes a single t (or exactly four for the cross-ratio job)");

    LatticeFn u_t = seed.u0;
    LatticeFn v_after = seed.potentials.V;
    std::vector<std::uint8_t> pole_mark(g.size(), 0);

    if (config.transform == "plus") {
        MaskedOrbit m = backlund_plus_masked(seed, config.t_list[0], config.tail_tol);
        u_t = m.u;
        pole_mark = m.pole_mark;
        // auto-Backlund: the potential is unchanged
    } else if (config.transform == "minus") {
        MaskedOrbit m = backlund_minus_masked(seed, config.t_list[0], config.tail_tol);
        u_t = m.u;
        pole_mark = m.pole_mark;
        bool schrodinger = true;
        for (std::size_t i = 0; i < g.size() && schrodinger; ++i)
            schrodinger = prob.potentials.R[i] == 0.0 && prob.potentials.T[i] == 0.0 &&
                          prob.potentials.S[i] == 1.0;
        v_after = schrodinger ? deformed_potential_once(seed, config.t_list[0], config.tail_tol)
                              : riccati_image_plus(u_t, seed.potentials);
    } else {
        auto [u, v] = deform_chain({seed, config.t_list}, config.tail_tol);
        u_t = u;
        v_after = v;
    }

    Table table({"index", "x", "u0", "u_t", "v_before", "v_after", "residual", "pole"});
    double worst = 0.0;
    for (std::size_t i = 0; i <= g.depth(); ++i) {
        double residual = nan_value();
        if (i < g.depth() && !pole_mark[i] && !pole_mark[i + 1]) {
            residual = scaled_defect(riccati_apply_plus(u_t, seed.potentials, i), v_after[i],
                                     riccati_term_scale(u_t, seed.potentials, i));
            worst = std::max(worst, residual);
        }
        table.add_row({static_cast<double>(i), g.point(i), seed.u0[i], u_t[i],
                       seed.potentials.V[i], v_after[i], residual,
                       static_cast<double>(pole_mark[i])});
    }
    table.emit(config.format, out);
    err << "max scaled Riccati residual = " << format_float(worst) << "\n";

    if (selftest) return run_group_selftest(config, seed, err);
    return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

namespace {

struct CheckResult {
    std::string name;
    double max_defect = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    bool skipped = false;
    std::string note;
};

class Verifier {
public:
    Verifier(const JobConfig& config) : config_(config) {}

    void run_lattice_checks() {
        prob_.emplace(build_problem(config_));
        seed_check();
        if (!seed_) return; // everything else needs a valid seed
        fundamental_theorem();
        leibniz();
        identity_19b();
        if (!config_.t_list.empty()) {
            closure();
            group_law();
            cross_ratio_check();
            deformation_consistency();
        }
        prop1();
        recurrence();
    }

    void run_classic_checks() {
        quadrature_order();
        classical_riccati();
    }

    int report(const std::string& format, std::ostream& out) const {
        bool all = true;
        for (const auto& r : results_) all = all && r.pass;

        if (format == "json") {
            nlohmann::json j;
            j["pass"] = all;
            auto& checks = j["checks"];
            checks = nlohmann::json::array();
            for (const auto& r : results_) {
                nlohmann::json c;
                c["name"] = r.name;
                c["max_residual"] = r.max_defect;
                c["tolerance"] = r.tolerance;
                c["pass"] = r.pass;
                c["skipped"] = r.skipped;
                if (!r.note.empty()) c["note"] = r.note;
                checks.push_back(std::move(c));
            }
            out << j.dump(2) << '\n';
        } else {
            out << "check,max_residual,tolerance,pass,skipped\n";
            for (const auto& r : results_)
                out << r.name << ',' << format_float(r.max_defect) << ','
                    << format_float(r.tolerance) << ',' << (r.pass ? 1 : 0) << ','
                    << (r.skipped ? 1 : 0) << '\n';
        }
        return all ? 0 : 4;
    }

private:
    void record(std::string name, double max_defect, double tol) {
        results_.push_back({std::move(name), max_defect, tol, max_defect <= tol, false, ""});
    }
    void skip(std::string name, std::string note) {
        results_.push_back({std::move(name), 0.0, 0.0, true, true, std::move(note)});
    }

    void seed_check() {
        double worst = 0.0;
        const auto& p = prob_->potentials;
        for (std::size_t i = 0; i < prob_->grid.depth(); ++i) {
            worst = std::max(worst,
                             scaled_defect(riccati_apply_plus(prob_->u0, p, i), p.V[i],
                                           riccati_term_scale(prob_->u0, p, i)));
        }
        record("seed-riccati", worst, config_.check_tol);
        if (worst <= config_.check_tol)
            seed_.emplace(SeedSolution{prob_->u0, prob_->potentials});
    }

    void fundamental_theorem() {
        // d_q of the partial Jackson integral reproduces the integrand;
        // run it on 1 + u0^2, which is bounded away from zero.
        const QGrid& g = prob_->grid;
        LatticeFn f = prob_->u0 * prob_->u0 + LatticeFn::constant(g, 1.0);
        LatticeFn F = q_integral_partial(f, config_.tail_tol);
        double worst = 0.0;
        for (std::size_t i = 0; i < g.depth(); ++i)
            worst = std::max(worst, std::abs(q_derivative(F, i) - f[i]) / std::abs(f[i]));
        record("fundamental-theorem", worst, 1e-10);
    }

    void leibniz() {
        const QGrid& g = prob_->grid;
        const LatticeFn& f = prob_->u0;
        const LatticeFn& h = prob_->potentials.V;
        LatticeFn fh = f * h;
        double worst = 0.0;
        for (std::size_t i = 0; i < g.depth(); ++i) {
            const double lhs = q_derivative(fh, i);
            const double rhs = f[i + 1] * q_derivative(h, i) + h[i] * q_derivative(f, i);
            const double scale = (std::abs(fh[i]) + std::abs(fh[i + 1])) / g.dq_scale(i);
            worst = std::max(worst, scaled_defect(lhs, rhs, scale));
        }
        record("q-leibniz", worst, 1e-12);
    }

    void identity_19b() {
        const QGrid& g = prob_->grid;
        const LatticeFn& f = prob_->u0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double factor = 1.0 - g.dq_scale(i) * f[i];
            if (!(factor > 0.5 && factor < 1.5)) {
                skip("identity-19b", "seed factors leave (0.5, 1.5)");
                return;
            }
        }
        const double lhs = q_product(f, config_.tail_tol);
        std::vector<double> vals(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            vals[i] = std::log(1.0 - g.dq_scale(i) * f[i]) / g.point(i);
        const double rhs =
            std::exp(q_integral(LatticeFn(g, std::move(vals)), config_.tail_tol) /
                     (1.0 - g.q()));
        record("identity-19b", std::abs(lhs - rhs), 1e-9);
    }

    void closure() {
        const double t = config_.t_list[0];
        LatticeFn u = backlund_plus(*seed_, t, config_.tail_tol);
        double worst = 0.0;
        for (std::size_t i = 0; i < prob_->grid.depth(); ++i)
            worst = std::max(worst, scaled_defect(riccati_apply_plus(u, seed_->potentials, i),
                                                  seed_->potentials.V[i],
                                                  riccati_term_scale(u, seed_->potentials, i)));
        record("auto-backlund-closure", worst, config_.check_tol);
    }

    void group_law() {
        const double t = config_.t_list[0];
        const double t1 = t, t2 = -0.5 * t;
        LatticeFn inner = backlund_plus(*seed_, t2, config_.tail_tol);
        SeedSolution stage = SeedSolution::create(inner, seed_->potentials, 1e-7);
        LatticeFn composed = backlund_plus(stage, t1, config_.tail_tol);
        LatticeFn direct = backlund_plus(*seed_, t1 + t2, config_.tail_tol);
        double worst = 0.0;
        for (std::size_t i = 0; i < composed.size(); ++i)
            worst = std::max(worst, std::abs(composed[i] - direct[i]));
        record("backlund-group-law", worst, config_.check_tol);
    }

    void cross_ratio_check() {
        const double t = config_.t_list.back();
        const double t1 = 0.0, t2 = t / 3.0, t3 = 2.0 * t / 3.0, t4 = t;
        if (t == 0.0) {
            skip("cross-ratio", "needs a nonzero t");
            return;
        }
        std::vector<LatticeFn> orbit;
        for (double tv : {t1, t2, t3, t4})
            orbit.push_back(backlund_plus(*seed_, tv, config_.tail_tol));
        const double target = parameter_cross_ratio(t1, t2, t3, t4);
        double worst = 0.0;
        for (std::size_t i = 0; i < orbit[0].size(); ++i) {
            const double den = (orbit[2][i] - orbit[0][i]) * (orbit[1][i] - orbit[3][i]);
            if (std::abs(den) <= 1e-6) continue;
            worst = std::max(
                worst, std::abs(cross_ratio(orbit[0][i], orbit[1][i], orbit[2][i], orbit[3][i]) -
                                target));
        }
        record("cross-ratio", worst, config_.check_tol);
    }

    void deformation_consistency() {
        bool schrodinger = true;
        const auto& p = seed_->potentials;
        for (std::size_t i = 0; i < prob_->grid.size() && schrodinger; ++i)
            schrodinger = p.R[i] == 0.0 && p.T[i] == 0.0 && p.S[i] == 1.0;
        if (!schrodinger) {
            skip("deformation-consistency", "needs the Schrodinger form R=T=0, S=1");
            return;
        }
        const double t = config_.t_list[0];
        LatticeFn u = backlund_minus(*seed_, t, config_.tail_tol);
        LatticeFn v = deformed_potential_once(*seed_, t, config_.tail_tol);
        double worst = 0.0;
        for (std::size_t i = 0; i < prob_->grid.depth(); ++i) {
            const double scale = riccati_term_scale(u, p, i) +
                                 riccati_term_scale(seed_->u0, p, i);
            worst = std::max(worst, scaled_defect(riccati_apply_plus(u, p, i), v[i], scale));
            worst = std::max(worst,
                             scaled_defect(riccati_apply_minus(u, p, i),
                                           riccati_apply_minus(seed_->u0, p, i), scale));
        }
        record("deformation-consistency", worst, config_.check_tol);
    }

    void prop1() {
        if (!v_is_zero(prob_->potentials)) {
            skip("prop1-closed-form", "needs V identically zero");
            return;
        }
        const QGrid& g = prob_->grid;
        double worst = 0.0;
        for (std::size_t i : {std::size_t{0}, g.depth() / 2}) {
            const Mat2 cf = closed_form_V0(prob_->potentials, i, config_.tail_tol);
            const Mat2 pr = resolvent_product(prob_->potentials, i, g.depth() - i);
            worst = std::max({worst, std::abs(cf.a - pr.a), std::abs(cf.b - pr.b),
                              std::abs(cf.c - pr.c), std::abs(cf.d - pr.d)});
        }
        record("prop1-closed-form", worst, config_.check_tol);
    }

    void recurrence() {
        const QGrid& g = prob_->grid;
        const auto& p = prob_->potentials;
        if (g.base() != 1.0) {
            skip("recurrence", "needs grid base 1");
            return;
        }
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (std::abs(1.0 - g.dq_scale(i) * p.T[i]) > 1e-12) {
                skip("recurrence", "T does not satisfy 1-(1-q)xT(x)=0 on the lattice");
                return;
            }
        }
        SolutionPair s = propagate(p, config_.psi0, config_.phi0);
        double worst = 0.0;
        double pn = s.psi[0], pn1 = s.psi[1];
        for (std::size_t n = 0; n + 2 <= g.depth(); ++n) {
            const double pn2 = three_term_step(p, pn, pn1, n);
            worst = std::max(worst, std::abs(pn2 - s.psi[n + 2]) /
                                        std::max(1.0, std::abs(s.psi[n + 2])));
            pn = pn1;
            pn1 = pn2;
        }
        record("recurrence", worst, 1e-10);
    }

    // -- classical oracles ---------------------------------------------------

    ClassicalPotentials classical(double h) const {
        return ClassicalPotentials{expr::parse(config_.r_expr), expr::parse(config_.s_expr),
                                   expr::parse(config_.t_expr), expr::parse("0"),
                                   config_.params, Quadrature{h, 1.0}};
    }

    void quadrature_order() {
        const expr::Expr u0 = expr::parse(config_.seed_expr);
        auto residual_sup = [&](double h) {
            ClassicalPotentials p = classical(h);
            auto table = classical_solution_pair_table(p, u0, 1.0, 0.25);
            // V0 = u0' + (R - T) u0 + S u0^2 by central differences
            const std::size_t n = table.x.size();
            std::vector<double> u(n), r(n), s(n), t(n);
            for (std::size_t j = 0; j < n; ++j) {
                u[j] = expr::eval(u0, table.x[j], p.params);
                r[j] = expr::eval(p.R, table.x[j], p.params);
                s[j] = expr::eval(p.S, table.x[j], p.params);
                t[j] = expr::eval(p.T, table.x[j], p.params);
            }
            double worst = 0.0;
            for (std::size_t j = 1; j + 1 < n; ++j) {
                const double u0p = (u[j + 1] - u[j - 1]) / (2.0 * h);
                const double v0 = u0p + (r[j] - t[j]) * u[j] + s[j] * u[j] * u[j];
                const double dpsi = (table.psi[j + 1] - table.psi[j - 1]) / (2.0 * h);
                const double dphi = (table.phi[j + 1] - table.phi[j - 1]) / (2.0 * h);
                worst = std::max(worst,
                                 std::abs(dpsi - r[j] * table.psi[j] - s[j] * table.phi[j]));
                worst = std::max(worst,
                                 std::abs(dphi - v0 * table.psi[j] - t[j] * table.phi[j]));
            }
            return worst;
        };
        const double r1 = residual_sup(2e-3);
        const double r2 = residual_sup(1e-3);
        const double ratio = r2 > 0.0 ? r1 / r2 : 4.0;
        const bool ok = ratio > 3.5 && ratio < 4.5;
        results_.push_back({"quadrature-order", ratio, 4.5, ok, false,
                            "halving h must reduce residuals by 3.5x-4.5x"});
    }

    void classical_riccati() {
        const expr::Expr u0 = expr::parse(config_.seed_expr);
        const double h = 1e-4;
        const double t = config_.t_list.empty() ? 0.5 : config_.t_list[0];
        ClassicalPotentials p = classical(h);
        auto u = classical_backlund_table(u0, p, t);
        const std::size_t n = u.size();
        std::vector<double> us(n), r(n), s(n), tt(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double x = p.quad.node(j);
            us[j] = expr::eval(u0, x, p.params);
            r[j] = expr::eval(p.R, x, p.params);
            s[j] = expr::eval(p.S, x, p.params);
            tt[j] = expr::eval(p.T, x, p.params);
        }
        double worst = 0.0;
        for (std::size_t j = 1; j + 1 < n; ++j) {
            const double u0p = (us[j + 1] - us[j - 1]) / (2.0 * h);
            const double v0 = u0p + (r[j] - tt[j]) * us[j] + s[j] * us[j] * us[j];
            const double up = (u[j + 1] - u[j - 1]) / (2.0 * h);
            worst = std::max(worst,
                             std::abs(up + (r[j] - tt[j]) * u[j] + s[j] * u[j] * u[j] - v0));
        }
        record("classical-riccati-residual", worst, 1e-5);
    }

    const JobConfig& config_;
    std::optional<LatticeProblem> prob_;
    std::optional<SeedSolution> seed_;
    std::vector<CheckResult> results_;
};

} // namespace

int run_verify(const JobConfig& config, bool classic, std::ostream& out, std::ostream& err) {
    Verifier v(config);
    if (classic)
        v.run_classic_checks();
    else
        v.run_lattice_checks();
    const int code = v.report(config.format, out);
    if (code != 0) err << "verification failed\n";
    return code;
}

} // namespace qdx::cli
