// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>

namespace aimc::cli {

enum ExitCode : int { Yes = 0, No = 1, Failure = 2, Unknown = 3 };

/// Runs one command line. Output goes to `out`, diagnostics to `err`.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace aimc::cli
