// Copyright 2026 the pgmkit developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "pgmkit/states.hpp"

namespace pgmkit {

/// Norm/validation tolerance for states read from files. Inputs farther off
/// than this are rejected — never silently renormalized.
inline constexpr double kFileStateTol = 1e-8;

/// Ensemble file layout:
///   {"dim": d,
///    "states": [{"type": "pure",  "amplitudes": [[re, im], ...]},
///               {"type": "mixed", "matrix": [[[re, im], ...], ...]}]}
/// Parse errors carry the file path and the offending state index.
Ensemble parse_ensemble(const nlohmann::json& doc, const std::string& context);

Ensemble read_ensemble(const std::filesystem::path& path);

nlohmann::ordered_json ensemble_to_json(const Ensemble& s);

void write_ensemble(const std::filesystem::path& path, const Ensemble& s);

} // namespace pgmkit
