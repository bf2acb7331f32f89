#pragma once

/**
 * @file report.hpp
 * @brief JSON serialization of reports (nlohmann::json).
 */

#include <string>

#include <json.hpp>

#include "rotor/distribution.hpp"
#include "rotor/matrix.hpp"
#include "rotor/sim.hpp"
#include "rotor/spectral.hpp"
#include "rotor/tree.hpp"
#include "rotor/walk.hpp"
#include "rotor/zprocess.hpp"

namespace rotor::report {

using nlohmann::json;

inline json rho_json(const RhoCertificate& c) {
    return json{{"lo", c.lo.to_double()},
                {"hi", c.hi.to_double()},
                {"lo_exact", c.lo.to_string()},
                {"hi_exact", c.hi.to_string()},
                {"verdict", c.verdict()},
                {"exactly_one", c.exactly_one},
                {"refined_to_tol", c.refined_to_tol}};
}

inline json matrix_json(const RatMatrix& m, const RhoCertificate& rho) {
    json entries = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m.at(i, j).to_string());
        entries.push_back(row);
    }
    return json{{"size", m.size()}, {"entries", entries}, {"rho", rho_json(rho)}};
}

inline json outcome_json(const ExcursionOutcome& o) {
    json j{{"kind", to_string(o.kind)}, {"steps", o.steps}};
    if (!o.certificate.empty()) j["certificate"] = o.certificate;
    return j;
}

inline json piece_json(const tree::Piece& p) {
    return json{{"rotation", p.rotation}, {"multiplicity", p.multiplicity}, {"mirrored", p.mirrored}};
}

inline json sweep_row_json(const tree::SweepRow& row, bool unary_signs = false) {
    return json{{"seq", row.representative.format(unary_signs)},
                {"class_size", row.class_size},
                {"verdict", to_string(row.verdict)},
                {"in_set", row.in_conjectured_set},
                {"rho", rho_json(row.rho)},
                {"agrees", row.agrees}};
}

inline json montecarlo_json(const sim::MonteCarloSummary& s) {
    json seeds = json::array();
    for (auto v : s.trial_seeds) seeds.push_back(v);
    std::string outcomes(s.trial_outcomes.begin(), s.trial_outcomes.end());
    return json{{"trials", s.trials},
                {"decided_recurrent", s.decided_recurrent},
                {"decided_transient", s.decided_transient},
                {"undecided", s.undecided},
                {"k", s.params.k},
                {"budget", s.params.budget},
                {"escape_level", s.params.escape_level},
                {"seed", s.params.seed},
                {"trial_outcomes", outcomes},
                {"trial_seeds", seeds}};
}

inline json ztrajectory_json(const ZTrajectory& z) {
    json values = json::array();
    for (auto v : z.values) values.push_back(v);
    json j{{"k", z.k},
           {"outcome", to_string(z.outcome)},
           {"resolved_at", z.resolved_at},
           {"values", values},
           {"values_truncated", z.values_truncated}};
    if (!z.certificate.empty()) j["certificate"] = z.certificate;
    return j;
}

inline json ztree_json(const sim::ZTreeResult& r) {
    const char* status = r.status == sim::ZTreeStatus::died ? "died"
                       : r.status == sim::ZTreeStatus::alive_at_budget ? "alive_at_budget"
                                                                       : "overflow";
    json levels = json::array();
    for (const auto& hist : r.level_histograms) {
        json h = json::object();
        for (const auto& [type, count] : hist) h[std::to_string(type)] = count;
        levels.push_back(h);
    }
    return json{{"status", status},
                {"live_nodes", r.live_nodes},
                {"frontier_size", r.frontier_size},
                {"deepest_level", r.deepest_level},
                {"level_histograms", levels}};
}

} // namespace rotor::report
