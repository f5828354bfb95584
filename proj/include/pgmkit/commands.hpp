// Copyright 2026 the pgmkit developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "pgmkit/protocol.hpp"

namespace pgmkit {

enum class ReportFormat { structured, tabular };

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
    kExitOk = 0,
    kExitBoundViolation = 1,
    kExitInputError = 2,
    kExitUnsupported = 3,
};

/// A finished run: the report document plus the exit status, with the
/// machine-readable failure list already folded into the document.
struct RunResult {
    nlohmann::ordered_json report;
    int exit_code = kExitOk;
};

/// Renders the report as pretty-printed JSON (structured) or as flat
/// `path<TAB>value` lines (tabular). Both carry identical numeric content.
std::string render_report(const nlohmann::ordered_json& report, ReportFormat format);

/// Single-copy PGM analysis: confusion matrix by both routes, worst-case
/// error, ||G|| and ||G^{-1}||.
RunResult cmd_pgm(const std::filesystem::path& input, double cutoff = kSupportCutoff);

/// Every bound check on one ensemble: fidelity-sum bound with its full
/// chain, the spectral sandwich, the pure-state norm bound, and both copy
/// budgets from the measured ε values (omitted with a diagnostic when the
/// ensemble contains duplicates).
RunResult cmd_bounds(const std::filesystem::path& input, double delta,
                     double cutoff = kSupportCutoff);

/// Monte Carlo simulation of the two-stage protocol on a pure ensemble.
RunResult cmd_simulate(const std::filesystem::path& input, double delta,
                       std::optional<double> epsilon, std::int64_t trials,
                       std::uint64_t seed, bool dedup, int threads = 1,
                       double cutoff = kSupportCutoff);

/// Copy-budget formula evaluation without an ensemble: the multi-copy PGM
/// budget needs n, the two-stage budget needs ||G||; either or both.
RunResult cmd_copies(std::optional<int> n, std::optional<double> gram_norm,
                     double epsilon, double delta);

struct GenParams {
    std::string kind; // haar | sign | equal-overlap | ginibre
    int d = 0;
    int n = 0;
    double c = 0.0;
    int rank = 0;
    std::optional<std::uint64_t> seed;
};

/// Generates an ensemble file. Randomized kinds require a seed.
RunResult cmd_gen(const GenParams& params, const std::filesystem::path& output);

} // namespace pgmkit
