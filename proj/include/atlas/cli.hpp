#pragma once

namespace atlas::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;

/// Entry point of the `atlas` command line tool:
///   atlas run --config PATH [--stages LIST] [--seed N] [--out DIR]
///             [--log-level error|warn|info|debug]
///   atlas search --bundle PATH --query TEXT [--config PATH]
///   atlas validate --bundle PATH [--schema PATH]
int main(int argc, char** argv);

}  // namespace atlas::cli
