#pragma once

namespace betwise {

/// Entry point for the betwise tool. Subcommands: run, trace, null-check,
/// banks. Returns 0 on success, 2 on configuration/usage errors, 1 on
/// runtime failures.
int cli_main(int argc, const char* const* argv);

}  // namespace betwise
