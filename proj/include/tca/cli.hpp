#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tca::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDiagnostics = 1;
inline constexpr int kExitFailure = 2;

inline constexpr int kDefaultPort = 8357;
inline constexpr const char* kPortEnv = "TCA_PORT";

/// Runs one subcommand: validate, resolve, compare, template, serve.
/// Exit 0 on success, 1 when E-diagnostics were found, 2 on I/O or syntax
/// failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tca::cli
