// Copyright 2026 the pgmkit developers
// SPDX-License-Identifier: Apache-2.0
//
// pgmkit command-line driver. Subcommands:
//   pgm       build the pretty good measurement and its confusion matrix
//   bounds    check every bound and identity on an ensemble
//   simulate  Monte Carlo run of the two-stage discrimination protocol
//   copies    evaluate the copy-budget formulas without an ensemble
//   gen       generate an ensemble file
//
// Exit codes: 0 success, 1 bound violation, 2 input error, 3 unsupported.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pgmkit/commands.hpp"
#include "pgmkit/version.hpp"

namespace {

struct ReportSink {
    std::string format = "structured";
    std::string path; // empty = stdout
};

void add_report_flags(CLI::App* cmd, ReportSink& sink, bool with_output = true) {
    cmd->add_option("--format", sink.format, "Report format")
        ->check(CLI::IsMember({"structured", "tabular"}))
        ->capture_default_str();
    if (with_output) {
        cmd->add_option("--output", sink.path,
                        "Write the report to this file instead of stdout");
    }
}

int emit(const pgmkit::RunResult& result, const ReportSink& sink) {
    const pgmkit::ReportFormat format = sink.format == "tabular"
                                            ? pgmkit::ReportFormat::tabular
                                            : pgmkit::ReportFormat::structured;
    const std::string text = pgmkit::render_report(result.report, format);
    if (sink.path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(sink.path);
        out << text;
        if (!out) {
            std::cerr << "cannot write report to " << sink.path << "\n";
            return pgmkit::kExitInputError;
        }
    }
    return result.exit_code;
}

int exit_for(pgmkit::errc code) {
    switch (code) {
        case pgmkit::errc::unsupported_mixed:
        case pgmkit::errc::size_limit_exceeded:
        case pgmkit::errc::zero_epsilon:
            return pgmkit::kExitUnsupported;
        default:
            return pgmkit::kExitInputError;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pgmkit: pretty good measurement toolkit"};
    app.set_version_flag("--version", std::string(pgmkit::kVersion));
    app.require_subcommand(1);

    // --- pgm ---
    CLI::App* pgm = app.add_subcommand(
        "pgm", "Build the PGM; report the confusion matrix by both routes");
    std::string pgm_input;
    double pgm_cutoff = pgmkit::kSupportCutoff;
    ReportSink pgm_sink;
    pgm->add_option("--input", pgm_input, "Ensemble file")->required();
    pgm->add_option("--cutoff", pgm_cutoff, "Relative support cutoff")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_report_flags(pgm, pgm_sink);

    // --- bounds ---
    CLI::App* bounds = app.add_subcommand(
        "bounds", "Check every bound and identity on an ensemble");
    std::string bounds_input;
    double bounds_delta = 0.1;
    double bounds_cutoff = pgmkit::kSupportCutoff;
    ReportSink bounds_sink;
    bounds->add_option("--input", bounds_input, "Ensemble file")->required();
    bounds->add_option("--delta", bounds_delta, "Failure budget for copy formulas")
        ->capture_default_str();
    bounds->add_option("--cutoff", bounds_cutoff, "Relative support cutoff")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_report_flags(bounds, bounds_sink);

    // --- simulate ---
    CLI::App* simulate = app.add_subcommand(
        "simulate", "Monte Carlo run of the two-stage protocol (pure ensembles)");
    std::string sim_input;
    double sim_delta = 0.1;
    std::optional<double> sim_epsilon;
    std::int64_t sim_trials = 1000;
    std::uint64_t sim_seed = 0;
    bool sim_dedup = false;
    int sim_threads = 1;
    double sim_cutoff = pgmkit::kSupportCutoff;
    ReportSink sim_sink;
    simulate->add_option("--input", sim_input, "Ensemble file")->required();
    simulate->add_option("--delta", sim_delta, "Target failure probability")
        ->capture_default_str();
    simulate->add_option("--epsilon", sim_epsilon,
                         "Overlap gap premise; measured when omitted");
    simulate->add_option("--trials", sim_trials, "Trials per true index")
        ->capture_default_str();
    simulate->add_option("--seed", sim_seed, "Master seed (required)")->required();
    simulate->add_flag("--dedup", sim_dedup,
                       "Merge duplicate outcomes into a single test group");
    simulate->add_option("--threads", sim_threads,
                         "Worker threads (never changes report content)")
        ->check(CLI::Range(1, 64))
        ->capture_default_str();
    simulate->add_option("--cutoff", sim_cutoff, "Relative support cutoff")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_report_flags(simulate, sim_sink);

    // --- copies ---
    CLI::App* copies = app.add_subcommand(
        "copies", "Evaluate the copy-budget formulas without an ensemble");
    std::optional<int> copies_n;
    std::optional<double> copies_gram;
    double copies_epsilon = 0.0;
    double copies_delta = 0.0;
    ReportSink copies_sink;
    copies->add_option("--n", copies_n, "State count for the multi-copy PGM budget");
    copies->add_option("--gram-norm", copies_gram,
                       "Gram operator norm for the two-stage budget");
    copies->add_option("--epsilon", copies_epsilon, "Gap premise")->required();
    copies->add_option("--delta", copies_delta, "Target failure probability")
        ->required();
    add_report_flags(copies, copies_sink);

    // --- gen ---
    CLI::App* gen = app.add_subcommand("gen", "Generate an ensemble file");
    pgmkit::GenParams gen_params;
    std::string gen_output;
    std::optional<std::uint64_t> gen_seed;
    ReportSink gen_sink;
    gen->add_option("--kind", gen_params.kind, "haar | sign | equal-overlap | ginibre")
        ->required()
        ->check(CLI::IsMember({"haar", "sign", "equal-overlap", "ginibre"}));
    gen->add_option("--d", gen_params.d, "Dimension (ignored by equal-overlap)");
    gen->add_option("--n", gen_params.n, "Number of states")->required();
    gen->add_option("--c", gen_params.c, "Pairwise overlap for equal-overlap");
    gen->add_option("--rank", gen_params.rank, "State rank for ginibre");
    gen->add_option("--seed", gen_seed, "Master seed (required for random kinds)");
    gen->add_option("--output", gen_output, "Ensemble file to write")->required();
    add_report_flags(gen, gen_sink, /*with_output=*/false); // the report goes to stdout

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : pgmkit::kExitInputError;
    }

    try {
        if (app.got_subcommand(pgm)) {
            return emit(pgmkit::cmd_pgm(pgm_input, pgm_cutoff), pgm_sink);
        }
        if (app.got_subcommand(bounds)) {
            return emit(pgmkit::cmd_bounds(bounds_input, bounds_delta, bounds_cutoff),
                        bounds_sink);
        }
        if (app.got_subcommand(simulate)) {
            return emit(pgmkit::cmd_simulate(sim_input, sim_delta, sim_epsilon,
                                             sim_trials, sim_seed, sim_dedup,
                                             sim_threads, sim_cutoff),
                        sim_sink);
        }
        if (app.got_subcommand(copies)) {
            return emit(pgmkit::cmd_copies(copies_n, copies_gram, copies_epsilon,
                                           copies_delta),
                        copies_sink);
        }
        if (app.got_subcommand(gen)) {
            gen_params.seed = gen_seed;
            return emit(pgmkit::cmd_gen(gen_params, gen_output), gen_sink);
        }
    } catch (const pgmkit::Error& e) {
        nlohmann::ordered_json err;
        err["error"] = nlohmann::ordered_json{
            {"code", pgmkit::errc_name(e.code())}, {"message", e.what()}};
        std::cerr << err.dump(2) << "\n";
        return exit_for(e.code());
    } catch (const std::exception& e) {
        nlohmann::ordered_json err;
        err["error"] = nlohmann::ordered_json{{"code", "internal"},
                                              {"message", e.what()}};
        std::cerr << err.dump(2) << "\n";
        return pgmkit::kExitInputError;
    }
    return pgmkit::kExitInputError; // unreachable: a subcommand is required
}
