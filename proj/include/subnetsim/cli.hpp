#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace subnetsim {

/// Exit statuses of the command-line entry point.
enum ExitStatus : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitOutput = 3,
    kExitCampaign = 4,
};

/// Entry point behind the `subnetsim` executable; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace subnetsim
