#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qtel/cli/report.hpp"

namespace qtel::cli {

// Process exit codes. Each failure mode has its own code.
enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitParse = 2,
    kExitInput = 3,
    kExitInfeasible = 4,
    kExitPhasesNotFound = 5,
    kExitVerification = 6,
};

// Raised by cmd_verify; `violations` lists each failed check.
class VerificationFailed : public std::runtime_error {
public:
    explicit VerificationFailed(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

struct SynthesizeOptions {
    SynthesisMethod method = SynthesisMethod::Auto;
    bool emit_table = false;
};

struct SimulateOptions {
    SynthesisMethod method = SynthesisMethod::Auto;
    bool emit_table = false;
    std::optional<std::size_t> trials;    // overrides the problem file
    std::optional<std::uint64_t> seed;
};

inline constexpr std::size_t kDefaultTrials = 100;
inline constexpr std::uint64_t kDefaultSeed = 0;
// Random inputs used by verify when the report carries no simulation section.
inline constexpr std::size_t kVerifyTrials = 20;

// Each command returns the report it would print. Errors surface as
// ParseError, InputError, qtel::InfeasibleSpectrum,
// qtel::PhaseFactorsNotFound or VerificationFailed.
ReportDoc cmd_bounds(const ProblemSpec& problem);
ReportDoc cmd_synthesize(const ProblemSpec& problem, const SynthesizeOptions& options = {});
ReportDoc cmd_simulate(const ProblemSpec& problem, const SimulateOptions& options = {});
// Returns a one-line summary on success.
std::string cmd_verify(const ReportDoc& report);
ReportDoc cmd_concentrate(const std::string& spectrum, std::size_t copies, std::size_t bells);

// Full command-line entry point: parses argv, dispatches, writes the report
// to `out` (or --out), diagnostics to `err`, and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qtel::cli
