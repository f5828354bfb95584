// Copyright 2026 the pgmkit developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace pgmkit {

inline constexpr const char* kVersion = "0.1.0";

} // namespace pgmkit
