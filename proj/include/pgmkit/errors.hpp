// Copyright 2026 the pgmkit developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace pgmkit {

/// Classifies every failure the toolkit can report, so callers can branch
/// on the kind without parsing messages.
enum class errc {
    not_hermitian,
    not_psd,
    trace_not_one,
    zero_support,
    dimension_mismatch,
    invalid_argument,
    size_limit_exceeded,
    zero_epsilon,
    unsupported_mixed,
    parse_error,
};

const char* errc_name(errc code) noexcept;

class Error : public std::runtime_error {
  public:
    Error(errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    errc code() const noexcept { return code_; }

  private:
    errc code_;
};

} // namespace pgmkit
