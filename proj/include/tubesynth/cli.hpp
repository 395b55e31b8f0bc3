#pragma once

// Subcommand drivers. Each returns a process exit code and reports problems
// on `err`; nothing here calls exit().

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>

namespace tubesynth::cli {

enum ExitCode : int {
    kOk = 0,
    kInputError = 2,
    kSynthesisFailure = 3,
    kAuditFailure = 4,
};

struct SynthArgs {
    std::filesystem::path config;
    std::filesystem::path out;
};

struct SimulateArgs {
    std::filesystem::path config;
    std::filesystem::path gains;
    // When given, x0 is drawn from X(0) and runs are also audited against X(k).
    std::optional<std::filesystem::path> sets;
    std::optional<std::size_t> runs;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::filesystem::path out;
};

struct CheckArgs {
    std::filesystem::path config;
    // Report is written here if set, and always printed.
    std::optional<std::filesystem::path> out;
};

struct DemoArgs {
    std::filesystem::path out;
    std::optional<double> r1;
    std::uint64_t seed = 1;
    std::optional<std::size_t> horizon;
    std::size_t runs = 100;
    double tol = 1e-7;
};

int run_synth(const SynthArgs& args, std::ostream& log, std::ostream& err);
int run_simulate(const SimulateArgs& args, std::ostream& log, std::ostream& err);
// {"model": ..., "F": matrix?, "source": set, "target": set, "disturbance": set?}
int run_check_contain(const CheckArgs& args, std::ostream& log, std::ostream& err);
// {"model": ..., "F": matrix?, "S": set, "V": set}; model must carry D.
int run_check_invariant(const CheckArgs& args, std::ostream& log, std::ostream& err);
int run_demo_tanks(const DemoArgs& args, std::ostream& log, std::ostream& err);

}  // namespace tubesynth::cli
