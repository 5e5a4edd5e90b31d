#pragma once

#include <iosfwd>

namespace drrs::cli {

/// Exit codes: 0 success, 1 runtime abort (singularity, failed
/// verification, IO during a run), 2 usage or configuration error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// drrs simulate --config FILE [--out DIR] [--set key=value]...
/// drrs sweep --kind inertia|rotor|axis [--out DIR] [--config FILE] [--set ...] [--dt S]
/// drrs gains [--config FILE] [--set ...]
/// drrs verify [--work DIR]
/// drrs plot --trace FILE [--out DIR]
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace drrs::cli
