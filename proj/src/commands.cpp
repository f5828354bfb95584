// Copyright 2026 the pgmkit developers
// SPDX-License-Identifier: Apache-2.0

#include "pgmkit/commands.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include "pgmkit/ensemble_io.hpp"
#include "pgmkit/version.hpp"

namespace pgmkit {

namespace {

using ordered_json = nlohmann::ordered_json;

// JSON has no infinities; they render as null, paired with a vacuous flag.
ordered_json finite_or_null(double x) {
    if (std::isfinite(x)) {
        return x;
    }
    return nullptr;
}

ordered_json report_header(const std::string& command) {
    ordered_json doc;
    doc["toolkit"] = ordered_json{{"name", "pgmkit"}, {"version", kVersion}};
    doc["command"] = command;
    return doc;
}

ordered_json bound_to_json(const BoundReport& b) {
    ordered_json j;
    j["name"] = b.name;
    j["bound"] = finite_or_null(b.bound_value);
    j["measured"] = b.measured_value;
    j["holds"] = b.holds;
    j["slack"] = finite_or_null(b.slack);
    j["vacuous"] = b.vacuous;
    return j;
}

ordered_json budget_to_json(const CopyBudget& b) {
    ordered_json j;
    j["k"] = b.k;
    j["l"] = b.l;
    j["total"] = b.total;
    j["epsilon"] = b.epsilon;
    j["delta"] = b.delta;
    return j;
}

ordered_json real_matrix_to_json(const RealMatrix& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ordered_json epsilon_to_json(const EpsilonReport& e) {
    ordered_json j;
    j["max_fidelity"] = e.max_fidelity;
    j["max_overlap"] = e.max_overlap;
    j["eps_fidelity"] = e.eps_fidelity;
    j["eps_overlap"] = e.eps_overlap;
    return j;
}

void collect(const BoundReport& b, ordered_json& list, std::vector<std::string>& failures) {
    list.push_back(bound_to_json(b));
    if (!b.holds) {
        failures.push_back("bound:" + b.name);
    }
}

RunResult finalize(ordered_json doc, std::vector<std::string> failures) {
    doc["status"]["ok"] = failures.empty();
    doc["status"]["failures"] = failures;
    return RunResult{std::move(doc),
                     failures.empty() ? kExitOk : kExitBoundViolation};
}

void flatten(const ordered_json& node, const std::string& path, std::string& out) {
    if (node.is_object() && !node.empty()) {
        for (auto it = node.begin(); it != node.end(); ++it) {
            flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
        }
    } else if (node.is_array() && !node.empty()) {
        for (std::size_t i = 0; i < node.size(); ++i) {
            flatten(node[i], path + "[" + std::to_string(i) + "]", out);
        }
    } else {
        // Leaves (and empty containers) serialize through the same dump()
        // used by the structured format, so the numeric text is identical.
        out += path;
        out += '\t';
        out += node.dump();
        out += '\n';
    }
}

} // namespace

std::string render_report(const ordered_json& report, ReportFormat format) {
    if (format == ReportFormat::structured) {
        return report.dump(2) + "\n";
    }
    std::string out;
    flatten(report, "", out);
    return out;
}

RunResult cmd_pgm(const std::filesystem::path& input, double cutoff) {
    const Ensemble s = read_ensemble(input);
    const GramMatrix g = build_gram(s, cutoff);
    const Povm povm = build_pgm(s, cutoff);
    const ConfusionMatrix direct = confusion_matrix(s, ConfusionMethod::direct, cutoff);
    const ConfusionMatrix via_gram = confusion_from_gram(g);
    const GramSpectral spectral = gram_spectral(g, cutoff);

    const double route_diff =
        (direct.entries() - via_gram.entries()).cwiseAbs().maxCoeff();

    Matrix povm_sum = Matrix::Zero(s.dim(), s.dim());
    double min_eig = 0.0;
    double herm_residual = 0.0;
    for (const Matrix& element : povm.elements) {
        povm_sum += element;
        herm_residual = std::max(herm_residual, (element - element.adjoint()).norm());
        min_eig = std::min(min_eig, hermitian_eig(element).eigenvalues.minCoeff());
    }
    const double completeness_residual = (povm_sum - povm.support_projector).norm();

    ordered_json doc = report_header("pgm");
    doc["parameters"] = ordered_json{
        {"input", input.string()}, {"n", s.size()},
        {"dim", s.dim()},          {"all_pure", s.all_pure()},
        {"cutoff", cutoff},
    };

    ordered_json results;
    results["worst_case_error"] = worst_case_error(direct);
    ordered_json success = ordered_json::array();
    for (int i = 0; i < direct.size(); ++i) {
        success.push_back(direct(i, i));
    }
    results["success_probabilities"] = std::move(success);
    results["confusion_direct"] = real_matrix_to_json(direct.entries());
    results["confusion_gram"] = real_matrix_to_json(via_gram.entries());
    results["confusion_route_max_diff"] = route_diff;
    results["povm"] = ordered_json{
        {"elements", static_cast<int>(povm.elements.size())},
        {"completeness_residual", completeness_residual},
        {"hermiticity_residual", herm_residual},
        {"min_eigenvalue", min_eig},
    };
    results["gram"] = ordered_json{
        {"size", g.size()},
        {"op_norm", spectral.op_norm},
        {"min_eigenvalue", spectral.min_eig},
        {"inv_norm", finite_or_null(spectral.inv_norm)},
        {"invertible", spectral.invertible},
    };
    doc["results"] = std::move(results);

    std::vector<std::string> failures;
    if (route_diff > 1e-8) {
        failures.push_back("confusion_route_mismatch");
    }
    if (completeness_residual > 1e-8) {
        failures.push_back("povm_completeness");
    }
    if (min_eig < -1e-10) {
        failures.push_back("povm_not_psd");
    }
    return finalize(std::move(doc), std::move(failures));
}

RunResult cmd_bounds(const std::filesystem::path& input, double delta, double cutoff) {
    const Ensemble s = read_ensemble(input);
    const GramMatrix g = build_gram(s, cutoff);
    const EpsilonReport eps = measured_epsilon(s);
    const ChainReport chain = fidelity_bound_chain(s, g);

    ordered_json doc = report_header("bounds");
    doc["parameters"] = ordered_json{
        {"input", input.string()}, {"n", s.size()},
        {"dim", s.dim()},          {"all_pure", s.all_pure()},
        {"delta", delta},          {"cutoff", cutoff},
    };

    std::vector<std::string> failures;
    ordered_json bound_list = ordered_json::array();
    collect(fidelity_sum_bound(s, g), bound_list, failures);
    for (const BoundReport& b : spectral_sandwich(s, g)) {
        collect(b, bound_list, failures);
    }
    if (s.all_pure()) {
        collect(gram_norm_upper(g), bound_list, failures);
    }

    ordered_json results;
    results["epsilon"] = epsilon_to_json(eps);
    results["bounds"] = std::move(bound_list);

    ordered_json chain_doc;
    chain_doc["worst_case_error"] = chain.worst_case_error;
    chain_doc["offdiag_sqrt_sq_sum"] = chain.offdiag_sqrt_sq_sum;
    chain_doc["sqrt_diff_sq"] = chain.sqrt_diff_sq;
    chain_doc["delta_trace_norm"] = chain.delta_trace_norm;
    chain_doc["offdiag_block_trace_sum"] = chain.offdiag_block_trace_sum;
    chain_doc["fidelity_sum"] = chain.fidelity_sum;
    ordered_json links = ordered_json::array();
    for (const ChainLink& l : chain.links) {
        links.push_back(ordered_json{{"name", l.name},
                                     {"lhs", l.lhs},
                                     {"rhs", l.rhs},
                                     {"equality", l.equality},
                                     {"holds", l.holds}});
        if (!l.holds) {
            failures.push_back("chain:" + l.name);
        }
    }
    chain_doc["links"] = std::move(links);
    chain_doc["all_hold"] = chain.all_hold;
    results["chain"] = std::move(chain_doc);

    // States at fidelity 1 reach this code as ε of rounding size (amplitudes
    // survive a decimal round trip only to ~1e-16), so "identical" must be
    // judged against a noise floor rather than exact zero.
    constexpr double kEpsIdentical = 1e-12;
    ordered_json budgets;
    if (eps.eps_fidelity > kEpsIdentical) {
        budgets["multicopy_pgm"] =
            budget_to_json(multicopy_pgm_budget(s.size(), eps.eps_fidelity, delta));
    } else {
        budgets["multicopy_pgm"] = nullptr;
        budgets["multicopy_pgm_note"] =
            "skipped: the ensemble contains states at fidelity 1";
    }
    if (!s.all_pure()) {
        budgets["two_stage"] = nullptr;
        budgets["two_stage_note"] = "skipped: defined for pure ensembles only";
    } else if (eps.eps_overlap > kEpsIdentical) {
        budgets["two_stage"] = budget_to_json(
            two_stage_budget(gram_spectral(g, cutoff).op_norm, eps.eps_overlap, delta));
    } else {
        budgets["two_stage"] = nullptr;
        budgets["two_stage_note"] =
            "skipped: the ensemble contains states at overlap 1";
    }
    results["copy_budgets"] = std::move(budgets);
    doc["results"] = std::move(results);

    return finalize(std::move(doc), std::move(failures));
}

RunResult cmd_simulate(const std::filesystem::path& input, double delta,
                       std::optional<double> epsilon, std::int64_t trials,
                       std::uint64_t seed, bool dedup, int threads, double cutoff) {
    const Ensemble s = read_ensemble(input);
    const EpsilonReport eps = measured_epsilon(s);
    // The protocol premise is stated in the overlap convention; a missing
    // epsilon is resolved from the ensemble itself.
    const double resolved = epsilon.value_or(eps.eps_overlap);
    const ProtocolReport run =
        estimate_failure(s, delta, resolved, trials, seed, dedup, threads);

    ordered_json doc = report_header("simulate");
    ordered_json params;
    params["input"] = input.string();
    params["n"] = s.size();
    params["dim"] = s.dim();
    params["delta"] = delta;
    params["epsilon"] = resolved;
    params["epsilon_source"] = epsilon.has_value() ? "given" : "measured";
    params["epsilon_measured"] = epsilon_to_json(eps);
    params["trials_per_index"] = trials;
    params["seed"] = seed;
    params["dedup"] = dedup;
    params["cutoff"] = cutoff;
    doc["parameters"] = std::move(params);

    ordered_json results;
    results["budget"] = budget_to_json(run.budget);
    ordered_json per_index = ordered_json::array();
    for (double rate : run.per_index_failure) {
        per_index.push_back(rate);
    }
    results["per_index_failure"] = std::move(per_index);
    results["worst_case_failure"] = run.worst_case_failure;
    results["ci_halfwidth"] = run.ci_halfwidth;
    results["delta_target"] = delta;
    const bool target_met = run.worst_case_failure <= delta + run.ci_halfwidth;
    results["target_met"] = target_met;
    results["mean_copies_used"] = run.mean_copies_used;
    results["max_copies_used"] = run.max_copies_used;
    results["measured_max_overlap"] = run.measured_max_overlap;
    results["epsilon_warning"] = run.epsilon_warning;
    doc["results"] = std::move(results);

    std::vector<std::string> failures;
    if (!target_met) {
        failures.push_back("failure_rate_exceeds_delta");
    }
    return finalize(std::move(doc), std::move(failures));
}

RunResult cmd_copies(std::optional<int> n, std::optional<double> gram_norm,
                     double epsilon, double delta) {
    if (!n.has_value() && !gram_norm.has_value()) {
        throw Error(errc::invalid_argument,
                    "copies needs a state count, a Gram norm, or both");
    }
    ordered_json doc = report_header("copies");
    ordered_json params;
    params["n"] = n.has_value() ? ordered_json(*n) : ordered_json(nullptr);
    params["gram_norm"] =
        gram_norm.has_value() ? ordered_json(*gram_norm) : ordered_json(nullptr);
    params["epsilon"] = epsilon;
    params["delta"] = delta;
    doc["parameters"] = std::move(params);

    ordered_json results;
    if (n.has_value()) {
        results["multicopy_pgm"] = budget_to_json(multicopy_pgm_budget(*n, epsilon, delta));
    }
    if (gram_norm.has_value()) {
        results["two_stage"] = budget_to_json(two_stage_budget(*gram_norm, epsilon, delta));
    }
    doc["results"] = std::move(results);
    return finalize(std::move(doc), {});
}

RunResult cmd_gen(const GenParams& params, const std::filesystem::path& output) {
    const bool randomized =
        params.kind == "haar" || params.kind == "sign" || params.kind == "ginibre";
    if (randomized && !params.seed.has_value()) {
        throw Error(errc::invalid_argument,
                    "kind \"" + params.kind + "\" requires a seed");
    }

    Ensemble s = [&]() -> Ensemble {
        if (params.kind == "haar") {
            return gen_haar_pure(params.d, params.n, *params.seed);
        }
        if (params.kind == "sign") {
            return gen_sign_states(params.d, params.n, *params.seed);
        }
        if (params.kind == "equal-overlap") {
            return gen_equal_overlap(params.n, params.c);
        }
        if (params.kind == "ginibre") {
            return gen_ginibre_mixed(params.d, params.rank, params.n, *params.seed);
        }
        throw Error(errc::invalid_argument,
                    "unknown ensemble kind \"" + params.kind + "\"");
    }();
    write_ensemble(output, s);

    const EpsilonReport eps = measured_epsilon(s);
    ordered_json doc = report_header("gen");
    ordered_json p;
    p["kind"] = params.kind;
    p["n"] = s.size();
    p["dim"] = s.dim();
    if (params.kind == "equal-overlap") {
        p["c"] = params.c;
    }
    if (params.kind == "ginibre") {
        p["rank"] = params.rank;
    }
    p["seed"] = params.seed.has_value() ? ordered_json(*params.seed)
                                        : ordered_json(nullptr);
    doc["parameters"] = std::move(p);

    ordered_json results;
    results["output"] = output.string();
    results["all_pure"] = s.all_pure();
    results["epsilon"] = epsilon_to_json(eps);
    doc["results"] = std::move(results);
    return finalize(std::move(doc), {});
}

} // namespace pgmkit
