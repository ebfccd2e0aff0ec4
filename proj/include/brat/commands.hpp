#pragma once

namespace brat {

// Full command-line surface; returns the process exit status (0 iff every
// requested validation passed).
int run_cli(int argc, const char* const* argv);

} // namespace brat
