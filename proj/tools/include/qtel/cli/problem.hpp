#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qtel/linalg.hpp"
#include "qtel/spectrum.hpp"

namespace qtel::cli {

using Json = nlohmann::ordered_json;

// Malformed document or field (exit code 2). The message names the field.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Well-formed but violates a value invariant (exit code 3).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kDecimalSumTolerance = 1e-9;

// A problem file:
//   {"d": 2, "spectrum": ["1/2", "1/3", "1/6"],
//    "inputState": [[1, 0], [0, 0]], "seed": 7, "trials": 100}
// "spectrum" may also be a comma-separated string or an array of numbers.
// "num/den" entries select the exact rational path (all entries must be
// rational for it to apply).
struct ProblemSpec {
    std::size_t d = 0;
    std::vector<std::string> spectrum;
    std::optional<std::vector<Complex>> input_state;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;

    bool operator==(const ProblemSpec&) const = default;
};

// Splits "1/2, 1/3,1/6" into trimmed tokens.
std::vector<std::string> split_spectrum(std::string_view text);

// Exact when every token is a rational; otherwise decimals summing to 1
// within kDecimalSumTolerance, renormalized. Throws ParseError for tokens
// that are not numbers and InputError for invariant violations.
SchmidtSpectrum parse_spectrum(const std::vector<std::string>& tokens);

// Field-level validation that needs no spectrum arithmetic is done here
// (ParseError); value invariants are checked by `validate` (InputError).
ProblemSpec problem_from_json(const Json& doc);
Json to_json(const ProblemSpec& problem);

ProblemSpec parse_problem_text(std::string_view text);
ProblemSpec load_problem(const std::string& path);

struct ValidatedProblem {
    std::size_t d;
    SchmidtSpectrum spectrum;
    std::optional<ComplexVec> input_state;  // unit norm
};

ValidatedProblem validate(const ProblemSpec& problem);

}  // namespace qtel::cli
