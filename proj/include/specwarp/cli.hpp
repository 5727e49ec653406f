#pragma once

namespace specwarp::cli {

/// Entry point for the specwarp command-line tool. Returns the process
/// exit code; never throws and never prints a raw stack trace.
int run(int argc, const char* const* argv);

}  // namespace specwarp::cli
