#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "elemsym/extrema.hpp"
#include "elemsym/hyperbolic.hpp"
#include "elemsym/polytope.hpp"
#include "elemsym/symfun.hpp"

namespace elemsym {

// A problem instance as read from a JSON file: phi = sum coeffs[j] E_j in n
// variables, the level constraint gamma (or the Theorem 3 vector gammas), and
// an optional box (default [0,1]^n).  Optional knobs override the tool
// defaults printed in every report header.
struct ProblemSpec {
    int n = 0;
    std::vector<double> coeffs;   // ascending E-index, length n + 1
    std::vector<double> gammas;   // length 1 unless the file used "gammas"
    bool variety_mode = false;    // true when "gammas" was given
    std::vector<double> lo, hi;   // box bounds, length n
    std::optional<Point> point;   // probe point for check-point
    std::uint64_t seed = 0;
    std::vector<double> radii{1e-2, 1e-3, 1e-4};
    int samples_per_radius = 512;
    int resolution = 101;
    double tol = 1e-9;
    int trials = 20;

    SymCombo combo() const { return SymCombo(n, coeffs); }
    BoxDomain domain() const { return BoxDomain(lo, hi, gammas.at(0)); }
};

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& field, const std::string& what) {
    throw std::invalid_argument("problem file: field \"" + field + "\": " + what);
}

inline std::vector<double> number_list(const nlohmann::json& j, const std::string& field) {
    if (!j.is_array()) parse_fail(field, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) parse_fail(field, "expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace detail

inline ProblemSpec parse_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("problem file: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("problem file: " + path + ": " + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("problem file: top level must be an object");

    ProblemSpec spec;
    if (!j.contains("n") || !j["n"].is_number_integer())
        detail::parse_fail("n", "required integer");
    spec.n = j["n"].get<int>();
    if (spec.n < 1) detail::parse_fail("n", "must be positive");

    if (!j.contains("coeffs")) detail::parse_fail("coeffs", "required");
    spec.coeffs = detail::number_list(j["coeffs"], "coeffs");
    if (spec.coeffs.size() != static_cast<std::size_t>(spec.n) + 1)
        detail::parse_fail("coeffs", "expected length n+1 = " + std::to_string(spec.n + 1) +
                                         ", got " + std::to_string(spec.coeffs.size()));
    if (j.contains("order")) {
        const std::string ord = j["order"].is_string() ? j["order"].get<std::string>() : "";
        if (ord == "descending")
            std::reverse(spec.coeffs.begin(), spec.coeffs.end());
        else if (ord != "ascending")
            detail::parse_fail("order", "expected \"ascending\" or \"descending\"");
    }

    const bool has_g = j.contains("gamma"), has_gs = j.contains("gammas");
    if (has_g == has_gs)
        detail::parse_fail("gamma", "exactly one of \"gamma\" and \"gammas\" is required");
    if (has_g) {
        if (!j["gamma"].is_number()) detail::parse_fail("gamma", "expected a number");
        spec.gammas = {j["gamma"].get<double>()};
    } else {
        spec.gammas = detail::number_list(j["gammas"], "gammas");
        spec.variety_mode = true;
        if (spec.gammas.empty() || static_cast<int>(spec.gammas.size()) >= spec.n)
            detail::parse_fail("gammas", "expected length k with 1 <= k < n");
    }

    if (j.contains("box")) {
        if (!j["box"].is_array() || j["box"].size() != static_cast<std::size_t>(spec.n))
            detail::parse_fail("box", "expected n pairs");
        for (std::size_t i = 0; i < j["box"].size(); ++i) {
            const auto pair = detail::number_list(j["box"][i], "box[" + std::to_string(i) + "]");
            if (pair.size() != 2 || !(pair[0] < pair[1]))
                detail::parse_fail("box[" + std::to_string(i) + "]", "expected [a, b] with a < b");
            spec.lo.push_back(pair[0]);
            spec.hi.push_back(pair[1]);
        }
    } else {
        spec.lo.assign(static_cast<std::size_t>(spec.n), 0.0);
        spec.hi.assign(static_cast<std::size_t>(spec.n), 1.0);
    }

    if (j.contains("point")) {
        auto p = detail::number_list(j["point"], "point");
        if (p.size() != static_cast<std::size_t>(spec.n))
            detail::parse_fail("point", "expected length n");
        spec.point = std::move(p);
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer()) detail::parse_fail("seed", "expected an integer");
        spec.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("radii")) {
        spec.radii = detail::number_list(j["radii"], "radii");
        for (double r : spec.radii)
            if (!(r > 0.0)) detail::parse_fail("radii", "radii must be positive");
    }
    if (j.contains("samples_per_radius")) {
        if (!j["samples_per_radius"].is_number_integer() || j["samples_per_radius"].get<int>() < 1)
            detail::parse_fail("samples_per_radius", "expected a positive integer");
        spec.samples_per_radius = j["samples_per_radius"].get<int>();
    }
    if (j.contains("resolution")) {
        if (!j["resolution"].is_number_integer() || j["resolution"].get<int>() < 2)
            detail::parse_fail("resolution", "expected an integer >= 2");
        spec.resolution = j["resolution"].get<int>();
    }
    if (j.contains("tol")) {
        if (!j["tol"].is_number() || !(j["tol"].get<double>() > 0.0))
            detail::parse_fail("tol", "expected a positive number");
        spec.tol = j["tol"].get<double>();
    }
    if (j.contains("trials")) {
        if (!j["trials"].is_number_integer() || j["trials"].get<int>() < 1)
            detail::parse_fail("trials", "expected a positive integer");
        spec.trials = j["trials"].get<int>();
    }
    return spec;
}

namespace detail {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline int env_threads() {
    const char* s = std::getenv("ELEMSYM_THREADS");
    if (!s) return 1;
    const long v = std::strtol(s, nullptr, 10);
    // orchestration is single-threaded; the cap never raises parallelism
    return v >= 1 ? 1 : 1;
}

inline nlohmann::json spec_to_json(const ProblemSpec& spec) {
    nlohmann::json j;
    j["n"] = spec.n;
    j["coeffs"] = spec.coeffs;
    if (spec.variety_mode) j["gammas"] = spec.gammas;
    else j["gamma"] = spec.gammas[0];
    nlohmann::json box = nlohmann::json::array();
    for (int i = 0; i < spec.n; ++i)
        box.push_back({spec.lo[static_cast<std::size_t>(i)], spec.hi[static_cast<std::size_t>(i)]});
    j["box"] = box;
    if (spec.point) j["point"] = *spec.point;
    return j;
}

inline nlohmann::json params_to_json(const ProblemSpec& spec) {
    return {{"seed", spec.seed},
            {"radii", spec.radii},
            {"samples_per_radius", spec.samples_per_radius},
            {"resolution", spec.resolution},
            {"tol", spec.tol},
            {"trials", spec.trials},
            {"threads", env_threads()}};
}

inline nlohmann::json candidate_to_json(const Candidate& c) {
    nlohmann::json j{{"point", c.point}, {"pattern", c.pattern}};
    if (c.e) j["e"] = *c.e;
    return j;
}

inline nlohmann::json witness_to_json(const Witness& w) {
    return {{"point", w.point}, {"radius", w.radius}, {"value", w.value}};
}

// Text rendering of a JSON report: same tree, same 17-significant-digit
// numbers, one "key: value" line per scalar.
inline void render_text(const nlohmann::json& j, std::ostream& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const auto scalar = [](const nlohmann::json& v) -> std::string {
        if (v.is_number_float()) return fmt17(v.get<double>());
        return v.dump();
    };
    const auto is_scalar_array = [](const nlohmann::json& a) {
        for (const auto& v : a)
            if (v.is_object() || v.is_array()) return false;
        return true;
    };
    if (j.is_object()) {
        for (const auto& [key, val] : j.items()) {
            if (val.is_object()) {
                out << pad << key << ":\n";
                render_text(val, out, indent + 1);
            } else if (val.is_array() && !is_scalar_array(val)) {
                out << pad << key << ":\n";
                int i = 0;
                for (const auto& item : val) {
                    out << pad << "  - [" << i++ << "]\n";
                    render_text(item, out, indent + 2);
                }
            } else if (val.is_array()) {
                out << pad << key << ": [";
                for (std::size_t i = 0; i < val.size(); ++i)
                    out << (i ? ", " : "") << scalar(val[i]);
                out << "]\n";
            } else {
                out << pad << key << ": " << scalar(val) << "\n";
            }
        }
    } else {
        out << pad << scalar(j) << "\n";
    }
}

inline void emit(const nlohmann::json& report, const std::string& format, std::ostream& out) {
    if (format == "json") out << report.dump(2) << "\n";
    else render_text(report, out, 0);
}

inline std::vector<double> parse_number_csv(const std::string& s, const char* what) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        const std::string tok = s.substr(pos, next - pos);
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (tok.empty() || end != tok.c_str() + tok.size())
            throw std::invalid_argument(std::string(what) + ": expected comma-separated numbers");
        out.push_back(v);
        pos = next + 1;
    }
    return out;
}

inline nlohmann::json profile_to_json(const RootProfile& rp) {
    return {{"roots", rp.roots},
            {"multiplicities", rp.mult},
            {"distinct_count", rp.distinct_count},
            {"interval", {rp.lo, rp.hi}}};
}

}  // namespace detail

// Command-line entry point.  Exit codes: 0 success, 2 invalid or infeasible
// input (including usage errors), 1 internal error.
inline int run(const std::vector<std::string>& args,
               std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"extrema of linear combinations of elementary symmetric polynomials on a level slice of a box"};
    app.require_subcommand(1);
    app.fallthrough();  // accept global options after the subcommand

    std::string format = "text";
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "text"}));

    std::string file;
    std::string point_csv, poly_csv;
    std::vector<std::string> fixes;
    bool edge_mode = false, diag_mode = false;
    int theorem = 0;
    std::optional<int> opt_resolution, opt_trials, opt_n;
    std::optional<std::uint64_t> opt_seed;

    const auto add_file = [&](CLI::App* cmd, bool required = true) {
        auto* opt = cmd->add_option("file", file, "problem file (JSON)");
        if (required) opt->required();
    };
    CLI::App* c_solve = app.add_subcommand("solve", "global extrema over the slice");
    add_file(c_solve);
    CLI::App* c_cands = app.add_subcommand("candidates", "finite candidate point set");
    add_file(c_cands);
    CLI::App* c_faces = app.add_subcommand("faces", "face lattice of the slice");
    add_file(c_faces);
    CLI::App* c_check = app.add_subcommand("check-point", "falsify a claimed local extremum");
    add_file(c_check);
    c_check->add_option("--point", point_csv, "probe point, comma-separated (default: the file's point)");
    CLI::App* c_perturb = app.add_subcommand("perturb", "repeated-root splitting perturbation");
    c_perturb->add_option("--poly", poly_csv, "polynomial coefficients, ascending, comma-separated")->required();
    CLI::App* c_restrict = app.add_subcommand("restrict", "univariate restriction along a curve in the slice");
    add_file(c_restrict);
    c_restrict->add_flag("--edge", edge_mode, "two free coordinates trade off as (t, gamma* - t)");
    c_restrict->add_flag("--diagonal", diag_mode, "all free coordinates but one equal t");
    c_restrict->add_option("--fix", fixes, "fixed coordinate as index=value (repeatable)");
    CLI::App* c_sample = app.add_subcommand("sample-variety", "random point with pinned E_1..E_k");
    add_file(c_sample);
    c_sample->add_option("--seed", opt_seed, "RNG seed");
    CLI::App* c_oracle = app.add_subcommand("oracle", "brute-force grid extrema");
    add_file(c_oracle);
    c_oracle->add_option("--resolution", opt_resolution, "grid points per axis");
    CLI::App* c_verify = app.add_subcommand("verify", "statistical suites");
    add_file(c_verify, false);
    c_verify->add_option("--theorem", theorem, "which statement to exercise")
        ->required()->check(CLI::IsMember({1, 3}));
    c_verify->add_option("--n", opt_n, "number of variables");
    c_verify->add_option("--trials", opt_trials, "number of random instances");
    c_verify->add_option("--seed", opt_seed, "RNG seed");

    std::vector<const char*> argv;
    argv.push_back("elemsym");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        ProblemSpec spec;
        if (!file.empty()) {
            spec = parse_problem(file);
            if (opt_seed) spec.seed = *opt_seed;
            if (opt_resolution) spec.resolution = *opt_resolution;
            if (opt_trials) spec.trials = *opt_trials;
        }

        nlohmann::json report;
        if (!file.empty()) {
            report["problem"] = detail::spec_to_json(spec);
            report["params"] = detail::params_to_json(spec);
        }

        if (app.got_subcommand(c_solve)) {
            report["command"] = "solve";
            const ExtremumReport rep = solve_global(spec.domain(), spec.combo(), spec.resolution);
            nlohmann::json r;
            r["hypothesis_ok"] = rep.hypothesis_ok;
            r["method"] = rep.method == SolveMethod::CandidatesExact ? "candidates_exact" : "grid_fallback";
            r["min_value"] = rep.min_value;
            r["max_value"] = rep.max_value;
            r["min_points"] = nlohmann::json::array();
            for (const auto& c : rep.min_points) r["min_points"].push_back(detail::candidate_to_json(c));
            r["max_points"] = nlohmann::json::array();
            for (const auto& c : rep.max_points) r["max_points"].push_back(detail::candidate_to_json(c));
            report["result"] = r;
            if (spec.point) {
                // cross-reference for check-point on the same file
                report["check_point"] = {{"point", *spec.point},
                                         {"value", eval_combo(spec.combo(), *spec.point)}};
            }
        } else if (app.got_subcommand(c_cands)) {
            report["command"] = "candidates";
            nlohmann::json arr = nlohmann::json::array();
            const SymCombo phi = spec.combo();
            for (const auto& c : enumerate_candidates(spec.domain())) {
                auto j = detail::candidate_to_json(c);
                j["value"] = eval_combo(phi, c.point);
                arr.push_back(std::move(j));
            }
            report["result"] = {{"count", arr.size()}, {"candidates", arr}};
        } else if (app.got_subcommand(c_faces)) {
            report["command"] = "faces";
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& f : enumerate_faces(spec.domain()))
                arr.push_back({{"pattern", f.pattern_string()},
                               {"dim", f.dim},
                               {"gamma_star", f.gamma_star}});
            report["result"] = {{"count", arr.size()}, {"faces", arr}};
        } else if (app.got_subcommand(c_check)) {
            report["command"] = "check-point";
            Point p;
            if (!point_csv.empty()) p = detail::parse_number_csv(point_csv, "--point");
            else if (spec.point) p = *spec.point;
            else throw std::invalid_argument("check-point: no --point given and the file has none");
            const LocalVerdict v = falsify_local_extremum(spec.domain(), spec.combo(), p,
                                                          spec.radii, spec.samples_per_radius, spec.seed);
            nlohmann::json r;
            r["point"] = p;
            r["value_at_p"] = v.value_at_p;
            r["status"] = v.status == LocalStatus::Falsified ? "FALSIFIED" : "NOT_FALSIFIED";
            r["budget_used"] = v.budget_used;
            if (v.ascent) r["ascent"] = detail::witness_to_json(*v.ascent);
            if (v.descent) r["descent"] = detail::witness_to_json(*v.descent);
            report["result"] = r;
        } else if (app.got_subcommand(c_perturb)) {
            report["command"] = "perturb";
            const UniPoly f(detail::parse_number_csv(poly_csv, "--poly"));
            const Perturbation pert = lemma2_perturb(f);
            nlohmann::json r;
            r["f"] = f.coeffs();
            r["g"] = pert.g.coeffs();
            r["eps0"] = pert.eps0;
            r["witness_points"] = pert.xi;
            r["before"] = detail::profile_to_json(pert.profile);
            const double eps = pert.eps0 / 2.0;
            for (double sign : {1.0, -1.0}) {
                const auto rp = roots_of(f.add_scaled(pert.g, sign * eps));
                if (!rp) throw std::runtime_error("perturb: verified invariant failed on re-check");
                r[sign > 0 ? "after_plus" : "after_minus"] = detail::profile_to_json(*rp);
            }
            report["result"] = r;
        } else if (app.got_subcommand(c_restrict)) {
            report["command"] = "restrict";
            if (edge_mode == diag_mode)
                throw std::invalid_argument("restrict: exactly one of --edge/--diagonal is required");
            std::vector<std::pair<int, double>> fixed;
            double fixed_sum = 0.0;
            for (const std::string& s : fixes) {
                const std::size_t eq = s.find('=');
                if (eq == std::string::npos)
                    throw std::invalid_argument("--fix: expected index=value");
                const int idx = std::stoi(s.substr(0, eq));
                const double val = std::stod(s.substr(eq + 1));
                fixed.emplace_back(idx, val);
                fixed_sum += val;
            }
            const double gamma_star = spec.gammas[0] - fixed_sum;
            double t_lo = spec.lo[0], t_hi = spec.hi[0];
            for (int i = 0; i < spec.n; ++i) {
                t_lo = std::min(t_lo, spec.lo[static_cast<std::size_t>(i)]);
                t_hi = std::max(t_hi, spec.hi[static_cast<std::size_t>(i)]);
            }
            const UniPoly p = diagonal_restriction(spec.combo(), gamma_star, fixed,
                                                   edge_mode ? CurveMode::Edge : CurveMode::Diagonal,
                                                   t_lo, t_hi);
            report["result"] = {{"mode", edge_mode ? "edge" : "diagonal"},
                                {"gamma_star", gamma_star},
                                {"t_range", {t_lo, t_hi}},
                                {"coeffs", p.coeffs()},
                                {"nonconstant", is_nonconstant(p)}};
        } else if (app.got_subcommand(c_sample)) {
            report["command"] = "sample-variety";
            const auto pt = sample_variety_point(spec.n, spec.gammas, spec.seed);
            if (!pt) throw std::invalid_argument("sample-variety: sampling budget exhausted (constraints infeasible?)");
            nlohmann::json r;
            r["point"] = *pt;
            nlohmann::json res = nlohmann::json::array();
            for (std::size_t j = 1; j <= spec.gammas.size(); ++j)
                res.push_back(eval_elem_sym(*pt, static_cast<int>(j)) - spec.gammas[j - 1]);
            r["residuals"] = res;
            report["result"] = r;
        } else if (app.got_subcommand(c_oracle)) {
            report["command"] = "oracle";
            const GridResult g = grid_oracle(spec.domain(), spec.combo(), spec.resolution);
            report["result"] = {{"min", g.min},
                                {"max", g.max},
                                {"argmin", g.argmin},
                                {"argmax", g.argmax},
                                {"feasible_count", g.feasible_count}};
        } else if (app.got_subcommand(c_verify)) {
            report["command"] = "verify";
            const int n = opt_n ? *opt_n : (!file.empty() ? spec.n : 4);
            const int trials = opt_trials ? *opt_trials : (!file.empty() ? spec.trials : 20);
            const std::uint64_t seed = opt_seed ? *opt_seed : (!file.empty() ? spec.seed : 0);
            if (theorem == 1) {
                const Theorem1Report rep = verify_theorem1_suite(n, trials, seed);
                nlohmann::json r;
                r["theorem"] = 1;
                r["trials"] = rep.trials;
                r["points_probed"] = rep.points_probed;
                r["falsified"] = rep.falsified;
                r["escalations"] = rep.escalations;
                nlohmann::json an = nlohmann::json::array();
                for (const auto& a : rep.anomalies)
                    an.push_back({{"trial", a.trial}, {"gamma", a.gamma}, {"point", a.point},
                                  {"coeffs", a.phi.coeffs}});
                r["anomalies"] = an;
                report["result"] = r;
            } else {
                std::vector<double> gammas = (!file.empty() && spec.variety_mode)
                                                 ? spec.gammas
                                                 : std::vector<double>{0.0, -2.0};
                const Theorem3Report rep = verify_theorem3_bound(n, gammas, trials, seed);
                nlohmann::json r;
                r["theorem"] = 3;
                r["gammas"] = gammas;
                r["trials"] = rep.trials;
                r["skipped"] = rep.skipped;
                r["max_components"] = rep.max_components;
                nlohmann::json eps = nlohmann::json::array();
                for (const auto& ep : rep.endpoints)
                    eps.push_back({{"point", ep.point}, {"value", ep.value},
                                   {"components", ep.components}, {"residuals", ep.residuals},
                                   {"flagged", ep.flagged}});
                r["endpoints"] = eps;
                report["result"] = r;
            }
        }
        detail::emit(report, format, out);
        return 0;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
}

inline int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace elemsym
