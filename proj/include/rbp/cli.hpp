#pragma once

#include <iosfwd>

namespace rbp
{

//! Process exit statuses of the command-line tool.
enum ExitCode : int
{
    kExitOk = 0,
    kExitInternal = 1,
    kExitUsage = 2,
    kExitConfig = 3,
    kExitIo = 4,
    kExitDegenerate = 5,
    kExitCapacity = 6,
    kExitInsufficientData = 7,
};

/*!
 * Parse a command line and run the selected subcommand.
 *
 * Subcommands: hull, fvector, classify, sample, cap, stabilize, experiment,
 * report. Normal output goes to `out`, diagnostics to `err`. Every run that
 * gets past argument parsing writes manifest.json into the output directory.
 */
int parse_and_dispatch(int argc, char const* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rbp
