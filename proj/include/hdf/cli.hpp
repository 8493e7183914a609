#pragma once

// Command-line surface: flag parsing into a RunConfig, command dispatch,
// and report rendering.  Exposed as a library so the whole pipeline can be
// driven in-process.

#include <cstdint>
#include <iosfwd>
#include <string>

namespace hdf {

struct RunConfig {
    std::string command;
    std::uint64_t p_min = 0; // single p sets p_min == p_max
    std::uint64_t p_max = 0;
    // "all", "supersingular-only", "ordinary-only", or a decimal residue.
    std::string lambda_selector = "all";
    unsigned k = 1;          // extension degree for orbit start points
    std::uint64_t f_min = 0; // census period range; 0 means not set
    std::uint64_t f_max = 0;
    std::string weights;     // census weight tuple "a/b,c/d,e/f,g/h"
    std::string format = "text"; // json | csv | text
    std::string output;      // file path; empty writes to the out stream
    unsigned threads = 0;    // 0: HDF_THREADS env, then hardware parallelism
    std::uint64_t seed = 0;  // reserved; no randomized mode uses it yet
    std::string x;           // orbit start: element index, or "inf"
    std::uint64_t max_iter = 100000; // orbit iteration budget
};

inline constexpr int kExitOk = 0;          // every item passed
inline constexpr int kExitMathFailure = 1; // some item failed; see report
inline constexpr int kExitUsage = 2;       // bad flags or invalid parameters

// Runs one configured command.  The rendered report goes to `out` or to
// cfg.output when set; usage diagnostics go to `err`.
int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// argv front end over execute(); supports --help at every level.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace hdf
