#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "exo/volume_transfer.hpp"

namespace exo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Runs one subcommand (torque, graph, transfer, validate, emg). `args`
/// excludes the program name. A `--config FILE` of key=value lines supplies
/// any flag not given on the command line.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses a `theta_deg:p_kpa:min_Nm` requirement. Throws UsageError.
TorqueRequirement parse_requirement(std::string_view text);

/// Merges key=value config text into `args`; command-line flags win.
/// Throws UsageError on malformed lines.
std::vector<std::string> merge_config(const std::vector<std::string>& args, std::string_view config);

}  // namespace exo::cli
