// Copyright 2026 The bitrade Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

namespace bitrade::cli {

/// Exit codes.
inline constexpr int kOk             = 0;
inline constexpr int kCertifyFailed  = 1;
inline constexpr int kBadInput       = 2;
inline constexpr int kTooLarge       = 3;
inline constexpr int kInternalError  = 4;

/// Runs the command line; all output goes to `out` and `err`.
int run(int argc, char const *const *argv, std::ostream &out, std::ostream &err);

}  // namespace bitrade::cli
