#pragma once

/**
 * @file cli.hpp
 * @brief Command-line surface. One verb per criterion:
 *
 *   classify        recurrence/transience verdicts (criteria picked by --d/--model)
 *   kstar           the k* statistic for balanced unary supports
 *   moment-matrix   first moment matrix of the type process
 *   spectral-radius certified Perron root enclosure
 *   decompose       standard-piece decomposition on T_2
 *   sweep           exhaustive balanced sweeps (shift conjecture / rotation agreement)
 *   simulate        Z-process runs (unary trajectory / tree expansion)
 *   excursions      chained walk excursions with leftover environments
 *   montecarlo      seeded i.i.d. trials
 *
 * dispatch() is the testable entry point: it returns the exit code and the
 * captured stdout/stderr text. Every report starts with a canonical echo of
 * the parsed run spec and the tool version; seeded subcommands are
 * bit-reproducible.
 */

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rotor/report.hpp"
#include "rotor/unary.hpp"
#include "rotor/version.hpp"

namespace rotor::cli {

using nlohmann::json;

struct CliResult {
    int exit_code = 0;
    std::string out;
    std::string err;
};

namespace detail {

struct Options {
    int degree = 1;
    std::string model; // set when the subcommand takes --model
    std::string seq_text;
    std::string dist_text;
    std::string list_text;
    std::string matrix_text;
    std::int64_t k = 1;
    std::uint64_t seed = 1;
    std::int64_t trials = 100;
    std::int64_t budget = 1'000'000;
    std::int64_t escape = 100'000;
    std::int64_t types = 0;
    std::string tol = "1/1000000000";
    std::int64_t period = 6;
    std::int64_t num = 5;
    std::int64_t nodes = 100'000;
    int jobs = 1;
    std::string format = "text";
    std::string side = "right";
};

inline SupportDistribution build_distribution(const Options& o) {
    if (o.model == "rotation" || o.model == "shift") {
        if (o.seq_text.empty()) throw std::invalid_argument("--model " + o.model + " needs --seq");
        RotorSequence s = RotorSequence::parse(o.seq_text, o.degree);
        return o.model == "rotation" ? SupportDistribution::rotation_model(s)
                                     : SupportDistribution::shift_model(s);
    }
    if (o.dist_text.empty()) throw std::invalid_argument("--model custom needs --dist");
    return SupportDistribution::parse(o.dist_text, o.degree);
}

inline std::vector<RotorSequence> parse_list(const std::string& text, int degree) {
    std::vector<RotorSequence> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(';', start);
        std::string item = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
        if (!item.empty()) out.push_back(RotorSequence::parse(item, degree));
        if (end == std::string::npos) break;
        start = end + 1;
    }
    if (out.empty()) throw std::invalid_argument("empty sequence list");
    return out;
}

/// Canonical run-spec echo: parsed inputs are re-formatted, so the header
/// round-trips to an equivalent spec.
inline json spec_echo(const std::string& command, const Options& o, bool seeded) {
    json spec{{"tool", "rotorwalk"}, {"version", kVersion}, {"command", command},
              {"degree", o.degree}, {"format", o.format}};
    const bool signs = o.degree == 1;
    if (!o.model.empty()) spec["model"] = o.model;
    if (!o.seq_text.empty()) spec["seq"] = RotorSequence::parse(o.seq_text, o.degree).format(signs);
    if (!o.dist_text.empty()) spec["dist"] = SupportDistribution::parse(o.dist_text, o.degree).format(signs);
    if (!o.list_text.empty()) {
        std::string canon;
        for (const auto& s : parse_list(o.list_text, o.degree)) {
            if (!canon.empty()) canon += ';';
            canon += s.format(signs);
        }
        spec["list"] = canon;
    }
    if (seeded) spec["seed"] = o.seed;
    return spec;
}

inline std::string text_header(const json& spec) {
    std::string line = "# rotorwalk v" + std::string(kVersion) + " |";
    for (auto it = spec.begin(); it != spec.end(); ++it) {
        if (it.key() == "tool" || it.key() == "version") continue;
        line += " " + it.key() + "=" + (it.value().is_string() ? it.value().get<std::string>() : it.value().dump());
    }
    return line;
}

inline UnaryAssignment build_unary_assignment(const Options& o) {
    if (!o.seq_text.empty()) return UnaryAssignment::homogeneous(RotorSequence::parse(o.seq_text, o.degree));
    if (!o.list_text.empty()) return UnaryAssignment::cyclic(parse_list(o.list_text, o.degree));
    if (!o.dist_text.empty()) {
        return UnaryAssignment::sampled(SupportDistribution::parse(o.dist_text, o.degree), o.seed);
    }
    throw std::invalid_argument("assignment needs --seq, --list or --dist");
}

inline TreeAssignment build_tree_assignment(const Options& o) {
    if (!o.seq_text.empty()) return TreeAssignment::homogeneous(RotorSequence::parse(o.seq_text, o.degree));
    if (!o.list_text.empty()) return TreeAssignment::cyclic(parse_list(o.list_text, o.degree));
    if (!o.dist_text.empty()) {
        return TreeAssignment::sampled(SupportDistribution::parse(o.dist_text, o.degree), o.seed);
    }
    throw std::invalid_argument("assignment needs --seq, --list or --dist");
}

inline RatMatrix parse_matrix(const std::string& text) {
    std::vector<std::vector<Rat>> rows;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(';', start);
        std::string row = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
        std::vector<Rat> entries;
        std::size_t rs = 0;
        while (rs <= row.size()) {
            std::size_t re = row.find(',', rs);
            std::string cell = row.substr(rs, re == std::string::npos ? std::string::npos : re - rs);
            if (!cell.empty()) entries.push_back(Rat::parse(cell));
            if (re == std::string::npos) break;
            rs = re + 1;
        }
        if (!entries.empty()) rows.push_back(std::move(entries));
        if (end == std::string::npos) break;
        start = end + 1;
    }
    if (rows.empty()) throw std::invalid_argument("empty matrix");
    RatMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) throw std::invalid_argument("matrix must be square");
        for (std::size_t j = 0; j < rows.size(); ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

// ---- subcommand handlers -------------------------------------------------

inline json handle_classify(const Options& o) {
    json out;
    if (o.degree == 1) {
        if (o.model == "rotation") {
            if (o.seq_text.empty()) throw std::invalid_argument("--model rotation needs --seq");
            RotorSequence s = RotorSequence::parse(o.seq_text, 1);
            if (!s.non_degenerate()) throw std::invalid_argument("degenerate sequence");
            out["verdict"] = "Recurrent";
            out["criterion"] = "uniform-rotation";
        } else if (o.model == "shift") {
            if (o.seq_text.empty()) throw std::invalid_argument("--model shift needs --seq");
            RotorSequence s = RotorSequence::parse(o.seq_text, 1);
            out["verdict"] = unary::to_string(unary::classify_shift_model(s));
            out["criterion"] = "shift-counting";
            out["ones_per_period"] = s.period_count(1);
            out["zeros_per_period"] = s.period_count(0);
        } else {
            SupportDistribution dist = build_distribution(o);
            auto ks = unary::k_star(dist);
            out["verdict"] = to_string(unary::classify_unary_balanced(dist));
            out["criterion"] = "k-star";
            if (ks) out["k_star"] = *ks;
            else out["k_star"] = "INFINITY";
        }
        return out;
    }
    if (o.model == "rotation") {
        if (o.seq_text.empty()) throw std::invalid_argument("--model rotation needs --seq");
        RotorSequence s = RotorSequence::parse(o.seq_text, o.degree);
        Verdict v = tree::classify_uniform_rotation(s);
        out["verdict"] = to_string(v);
        if (o.degree == 2) {
            out["criterion"] = "standard-pieces";
            out["decomposable"] = v == Verdict::recurrent;
        } else {
            out["criterion"] = "rotation-lower-bound";
            out["offspring_bound"] = tree::rotation_offspring_bound(o.degree).to_string();
        }
        if (s.balanced()) {
            tree::TreeClassification cls = tree::classify_tree_balanced(SupportDistribution::rotation_model(s));
            out["rho"] = report::rho_json(cls.rho);
            out["types"] = cls.types;
            if (cls.verdict != v) throw std::logic_error("piece and spectral classifiers disagree");
        }
        return out;
    }
    if (o.model == "shift") {
        if (o.seq_text.empty()) throw std::invalid_argument("--model shift needs --seq");
        RotorSequence s = RotorSequence::parse(o.seq_text, o.degree);
        std::optional<std::int64_t> trunc;
        if (o.types > 0) trunc = o.types;
        tree::ShiftClassification cls = tree::classify_uniform_shift(s, trunc);
        out["verdict"] = tree::to_string(cls.verdict);
        out["criterion"] = "shift-spectral";
        out["in_conjectured_set"] = cls.in_conjectured_set;
        if (cls.spectral) {
            out["rho"] = report::rho_json(cls.spectral->rho);
            out["types"] = cls.spectral->types;
        }
        return out;
    }
    SupportDistribution dist = build_distribution(o);
    tree::TreeClassification cls = tree::classify_tree_balanced(dist);
    out["verdict"] = to_string(cls.verdict);
    out["criterion"] = "moment-spectral";
    out["rho"] = report::rho_json(cls.rho);
    out["types"] = cls.types;
    return out;
}

inline json handle_kstar(const Options& o) {
    SupportDistribution dist = [&] {
        if (!o.dist_text.empty()) return SupportDistribution::parse(o.dist_text, o.degree);
        if (o.seq_text.empty()) throw std::invalid_argument("kstar needs --dist or --seq");
        RotorSequence s = RotorSequence::parse(o.seq_text, o.degree);
        if (o.model == "shift") return SupportDistribution::shift_model(s);
        if (o.model == "rotation") return SupportDistribution::rotation_model(s);
        return SupportDistribution({{s, Rat(1)}});
    }();
    if (o.side == "left") {
        // left excursions on Z: swap the roles of the two symbols
        std::vector<SupportDistribution::Atom> atoms;
        for (const auto& a : dist.atoms()) atoms.push_back({a.sequence.rotated(1), a.weight});
        dist = SupportDistribution(std::move(atoms));
    }
    auto ks = unary::k_star(dist);
    json out;
    out["side"] = o.side;
    if (ks) out["k_star"] = *ks;
    else out["k_star"] = "INFINITY";
    out["verdict"] = to_string(ks ? Verdict::transient : Verdict::recurrent);
    return out;
}

inline json handle_moment_matrix(const Options& o, bool truncate) {
    SupportDistribution dist = build_distribution(o);
    std::int64_t K = o.types;
    if (K == 0) {
        if (!dist.all_balanced()) throw std::invalid_argument("unbalanced support needs an explicit --types");
        K = dist.common_period() / (dist.degree() + 1);
    }
    json out;
    if (truncate) {
        tree::TruncatedMatrix tm = tree::moment_matrix_truncated(dist, K);
        RhoCertificate rho = certify_spectral_radius(tm.matrix, Rat::parse(o.tol));
        out = report::matrix_json(tm.matrix, rho);
        out["escaped_transitions"] = tm.escaped_transitions;
        out["truncated"] = true;
    } else {
        RatMatrix m = tree::moment_matrix(dist, K);
        RhoCertificate rho = certify_spectral_radius(m, Rat::parse(o.tol));
        out = report::matrix_json(m, rho);
        out["truncated"] = false;
    }
    return out;
}

inline json handle_spectral(const Options& o) {
    RatMatrix m = [&] {
        if (!o.matrix_text.empty()) return parse_matrix(o.matrix_text);
        SupportDistribution dist = build_distribution(o);
        std::int64_t K = o.types;
        if (K == 0) {
            if (!dist.all_balanced()) throw std::invalid_argument("unbalanced support needs an explicit --types");
            K = dist.common_period() / (dist.degree() + 1);
        }
        return tree::moment_matrix(dist, K);
    }();
    RhoCertificate rho = certify_spectral_radius(m, Rat::parse(o.tol));
    json out = report::rho_json(rho);
    out["size"] = m.size();
    out["estimate"] = power_iteration_estimate(m);
    return out;
}

inline json handle_decompose(const Options& o) {
    if (o.seq_text.empty()) throw std::invalid_argument("decompose needs --seq");
    RotorSequence s = RotorSequence::parse(o.seq_text, o.degree);
    auto dec = tree::decompose_standard_pieces(s);
    json out;
    out["decomposable"] = dec.has_value();
    if (dec) {
        json pieces = json::array();
        for (const auto& p : dec->pieces) pieces.push_back(report::piece_json(p));
        out["pieces"] = pieces;
        out["cycle_start"] = dec->cycle_start;
    }
    return out;
}

inline json handle_simulate(const Options& o) {
    if (o.degree == 1) {
        UnaryAssignment assign = build_unary_assignment(o);
        ZParams zp;
        zp.horizon = o.budget;
        ZTrajectory z = z_trajectory(assign, o.k, zp);
        return report::ztrajectory_json(z);
    }
    TreeAssignment assign = build_tree_assignment(o);
    sim::ZTreeResult r = sim::z_tree_expand(assign, o.k, o.nodes);
    return report::ztree_json(r);
}

inline json handle_excursions(const Options& o) {
    json out;
    json outcomes = json::array();
    if (o.degree == 1) {
        UnaryAssignment assign = build_unary_assignment(o);
        sim::UnaryRunParams params;
        params.num_excursions = o.num;
        params.budget = o.budget;
        params.escape_level = o.escape;
        sim::UnaryRunResult r = sim::run_excursions(assign, params);
        for (const auto& x : r.outcomes) outcomes.push_back(report::outcome_json(x));
        out["outcomes"] = outcomes;
        out["infinite_count"] = r.infinite_count();
        out["steps_total"] = r.record.step_count;
        out["origin_loops"] = r.record.origin_loop_count;
        out["max_vertex"] = r.record.max_vertex;
        return out;
    }
    TreeAssignment assign = build_tree_assignment(o);
    sim::TreeRunParams params;
    params.num_excursions = o.num;
    params.budget = o.budget;
    sim::TreeRunResult r = sim::run_tree_excursions(assign, params);
    for (const auto& x : r.outcomes) outcomes.push_back(report::outcome_json(x));
    out["outcomes"] = outcomes;
    out["steps_total"] = r.record.step_count;
    out["origin_loops"] = r.record.origin_loop_count;
    out["max_depth"] = r.record.max_depth;
    out["nodes_touched"] = r.record.nodes_touched;
    return out;
}

inline json handle_montecarlo(const Options& o) {
    SupportDistribution dist = build_distribution(o);
    sim::MonteCarloParams params;
    params.k = o.k;
    params.trials = o.trials;
    params.budget = o.budget;
    params.escape_level = o.escape;
    params.seed = o.seed;
    params.jobs = o.jobs;
    return report::montecarlo_json(sim::monte_carlo(dist, params));
}

// ---- rendering -----------------------------------------------------------

inline void render_json(std::ostream& os, const json& spec, const json& payload) {
    json out = payload;
    out["spec"] = spec;
    os << out.dump() << "\n";
}

inline void render_text_kv(std::ostream& os, const json& payload, int indent = 0) {
    for (auto it = payload.begin(); it != payload.end(); ++it) {
        os << std::string(static_cast<std::size_t>(indent), ' ') << it.key() << ": ";
        if (it.value().is_object()) {
            os << "\n";
            render_text_kv(os, it.value(), indent + 2);
        } else {
            os << it.value().dump() << "\n";
        }
    }
}

inline std::string csv_escape(const json& v) {
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find(',') == std::string::npos && s.find('"') == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        out += c;
    }
    out += "\"";
    return out;
}

} // namespace detail

inline CliResult dispatch(const std::vector<std::string>& args) {
    using namespace detail;
    CliResult result;
    std::ostringstream out, err;

    CLI::App app{"rotor walk recurrence/transience toolkit"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* cmd, bool with_model = true) {
        cmd->add_option("--d", o.degree, "tree degree d (children per vertex)");
        cmd->add_option("--format", o.format, "output format: text, json, csv")
            ->check(CLI::IsMember({"text", "json", "csv"}));
        if (with_model) {
            o.model = "custom";
            cmd->add_option("--model", o.model, "rotation, shift or custom")
                ->check(CLI::IsMember({"rotation", "shift", "custom"}));
        }
    };

    CLI::App* c_classify = app.add_subcommand("classify", "recurrence/transience verdict");
    add_common(c_classify);
    c_classify->add_option("--seq", o.seq_text, "rotor sequence, e.g. \"(012)\"");
    c_classify->add_option("--dist", o.dist_text, "distribution, e.g. \"(-+)=1/2;(+-)=1/2\"");
    c_classify->add_option("--types", o.types, "truncation size for unbalanced shift supports");
    c_classify->add_option("--tol", o.tol, "enclosure tolerance (rational)");

    CLI::App* c_kstar = app.add_subcommand("kstar", "k* statistic for balanced unary supports");
    add_common(c_kstar);
    c_kstar->add_option("--seq", o.seq_text, "single sequence (point mass)");
    c_kstar->add_option("--dist", o.dist_text, "distribution text");
    c_kstar->add_option("--side", o.side, "right or left excursions on Z")
        ->check(CLI::IsMember({"right", "left"}));

    CLI::App* c_matrix = app.add_subcommand("moment-matrix", "first moment matrix of the type process");
    add_common(c_matrix);
    bool truncate = false;
    c_matrix->add_option("--seq", o.seq_text, "sequence for rotation/shift models");
    c_matrix->add_option("--dist", o.dist_text, "distribution text");
    c_matrix->add_option("--types", o.types, "matrix size K (default: N for balanced supports)");
    c_matrix->add_option("--tol", o.tol, "enclosure tolerance (rational)");
    c_matrix->add_flag("--truncate", truncate, "drop children with type > K (unbalanced supports)");

    CLI::App* c_rho = app.add_subcommand("spectral-radius", "certified Perron root enclosure");
    add_common(c_rho);
    c_rho->add_option("--matrix", o.matrix_text, "rational matrix, e.g. \"1/3,2/3;1/3,1\"");
    c_rho->add_option("--seq", o.seq_text, "sequence for rotation/shift models");
    c_rho->add_option("--dist", o.dist_text, "distribution text");
    c_rho->add_option("--types", o.types, "matrix size K");
    c_rho->add_option("--tol", o.tol, "enclosure tolerance (rational)");

    CLI::App* c_dec = app.add_subcommand("decompose", "standard-piece decomposition on T_2");
    add_common(c_dec, false);
    c_dec->add_option("--seq", o.seq_text, "sequence to decompose");

    CLI::App* c_sweep = app.add_subcommand("sweep", "exhaustive balanced sweep at period L");
    add_common(c_sweep);
    c_sweep->add_option("--L", o.period, "period length");
    c_sweep->add_option("--jobs", o.jobs, "parallel workers");

    CLI::App* c_sim = app.add_subcommand("simulate", "Z-process trajectory / tree expansion");
    add_common(c_sim, false);
    c_sim->add_option("--seq", o.seq_text, "homogeneous assignment");
    c_sim->add_option("--list", o.list_text, "cyclic assignment \"SEQ;SEQ;...\"");
    c_sim->add_option("--dist", o.dist_text, "sampled assignment (with --seed)");
    c_sim->add_option("--seed", o.seed, "master seed");
    c_sim->add_option("--k", o.k, "excursion index");
    c_sim->add_option("--budget", o.budget, "step horizon (unary)");
    c_sim->add_option("--nodes", o.nodes, "node budget (tree)");

    CLI::App* c_exc = app.add_subcommand("excursions", "chained walk excursions");
    add_common(c_exc, false);
    c_exc->add_option("--seq", o.seq_text, "homogeneous assignment");
    c_exc->add_option("--list", o.list_text, "cyclic assignment");
    c_exc->add_option("--dist", o.dist_text, "sampled assignment (with --seed)");
    c_exc->add_option("--seed", o.seed, "master seed");
    c_exc->add_option("--num", o.num, "number of excursions");
    c_exc->add_option("--budget", o.budget, "steps per excursion");
    c_exc->add_option("--escape", o.escape, "escape level for survival fallback certificates");

    CLI::App* c_mc = app.add_subcommand("montecarlo", "seeded i.i.d. trials");
    add_common(c_mc);
    c_mc->add_option("--seq", o.seq_text, "sequence for rotation/shift models");
    c_mc->add_option("--dist", o.dist_text, "distribution text");
    c_mc->add_option("--seed", o.seed, "master seed");
    c_mc->add_option("--k", o.k, "excursion index");
    c_mc->add_option("--trials", o.trials, "number of trials");
    c_mc->add_option("--budget", o.budget, "per-trial budget (z horizon / node budget)");
    c_mc->add_option("--escape", o.escape, "tree escape level");
    c_mc->add_option("--jobs", o.jobs, "parallel workers");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            out << app.help();
            result.out = out.str();
            return result;
        }
        err << e.what() << "\n";
        result.err = err.str();
        result.exit_code = 2;
        return result;
    }

    try {
        std::string command;
        json payload;
        bool seeded = false;
        if (app.got_subcommand(c_classify)) {
            command = "classify";
            payload = handle_classify(o);
        } else if (app.got_subcommand(c_kstar)) {
            command = "kstar";
            if (o.degree != 1) throw std::invalid_argument("kstar is a unary-tree criterion (--d 1)");
            payload = handle_kstar(o);
        } else if (app.got_subcommand(c_matrix)) {
            command = "moment-matrix";
            payload = handle_moment_matrix(o, truncate);
        } else if (app.got_subcommand(c_rho)) {
            command = "spectral-radius";
            payload = handle_spectral(o);
        } else if (app.got_subcommand(c_dec)) {
            command = "decompose";
            o.model.clear(); // no --model on this subcommand
            payload = handle_decompose(o);
        } else if (app.got_subcommand(c_sim)) {
            command = "simulate";
            o.model.clear();
            seeded = !o.dist_text.empty();
            payload = handle_simulate(o);
        } else if (app.got_subcommand(c_exc)) {
            command = "excursions";
            o.model.clear();
            seeded = !o.dist_text.empty();
            payload = handle_excursions(o);
        } else if (app.got_subcommand(c_mc)) {
            command = "montecarlo";
            seeded = true;
            payload = handle_montecarlo(o);
        } else if (app.got_subcommand(c_sweep)) {
            command = "sweep";
            if (o.model == "custom") o.model = "shift";
            tree::SweepReport rep = o.model == "rotation"
                                        ? tree::sweep_rotation_agreement(o.period, o.degree, o.jobs)
                                        : tree::sweep_shift_conjecture(o.period, o.degree, o.jobs);
            json spec = spec_echo(command, o, false);
            spec["L"] = o.period;
            spec["jobs"] = o.jobs;
            if (o.format == "json") {
                out << json{{"spec", spec}}.dump() << "\n";
                for (const auto& row : rep.rows) out << report::sweep_row_json(row).dump() << "\n";
                out << json{{"summary", {{"classes", rep.rows.size()},
                                         {"mismatches", rep.mismatches},
                                         {"model", rep.model}}}}
                           .dump()
                    << "\n";
            } else if (o.format == "csv") {
                out << text_header(spec) << "\n";
                out << "seq,class_size,verdict,in_set,rho_lo_exact,rho_hi_exact,rho_verdict,agrees\n";
                for (const auto& row : rep.rows) {
                    out << row.representative.format() << "," << row.class_size << ","
                        << to_string(row.verdict) << "," << (row.in_conjectured_set ? "true" : "false") << ","
                        << row.rho.lo.to_string() << "," << row.rho.hi.to_string() << ","
                        << row.rho.verdict() << "," << (row.agrees ? "true" : "false") << "\n";
                }
            } else {
                out << text_header(spec) << "\n";
                for (const auto& row : rep.rows) {
                    out << row.representative.format() << "  class_size=" << row.class_size
                        << "  verdict=" << to_string(row.verdict)
                        << "  in_set=" << (row.in_conjectured_set ? "yes" : "no")
                        << "  rho=[" << row.rho.lo.to_double() << "," << row.rho.hi.to_double() << "]"
                        << (row.agrees ? "" : "  MISMATCH") << "\n";
                }
                out << "classes=" << rep.rows.size() << " mismatches=" << rep.mismatches << "\n";
            }
            result.out = out.str();
            return result;
        }

        json spec = spec_echo(command, o, seeded);
        if (o.format == "json") {
            render_json(out, spec, payload);
        } else if (o.format == "csv") {
            if (command == "excursions") {
                out << text_header(spec) << "\n";
                out << "excursion,kind,steps,certificate\n";
                std::size_t idx = 1;
                for (const auto& oc : payload["outcomes"]) {
                    out << idx++ << "," << oc["kind"].get<std::string>() << "," << oc["steps"]
                        << "," << (oc.contains("certificate") ? csv_escape(oc["certificate"]) : "") << "\n";
                }
            } else if (command == "montecarlo") {
                out << text_header(spec) << "\n";
                out << "trial,seed,outcome\n";
                const std::string& oc = payload["trial_outcomes"].get_ref<const std::string&>();
                for (std::size_t t = 0; t < oc.size(); ++t) {
                    out << (t + 1) << "," << payload["trial_seeds"][t] << "," << oc[t] << "\n";
                }
            } else {
                throw std::invalid_argument("csv output supports the tabular subcommands (sweep, excursions, montecarlo)");
            }
        } else {
            out << text_header(spec) << "\n";
            render_text_kv(out, payload);
        }
        result.out = out.str();
        return result;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        result.err = err.str();
        result.exit_code = 2;
        return result;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        result.err = err.str();
        result.exit_code = 2;
        return result;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        result.err = err.str();
        result.exit_code = 1;
        return result;
    }
}

inline int run_main(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    CliResult r = dispatch(args);
    if (!r.out.empty()) fputs(r.out.c_str(), stdout);
    if (!r.err.empty()) fputs(r.err.c_str(), stderr);
    return r.exit_code;
}

} // namespace rotor::cli
