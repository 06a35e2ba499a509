#pragma once

#include <iosfwd>

namespace matword::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConstraintFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one subcommand: scan, minpoly, lemniscate, grid, deform, verify,
/// generate or words. Returns 0 on success, 1 when the run completed but
/// its constraints failed, 2 on usage, input or I/O errors.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace matword::cli
