#pragma once

// The report document every subcommand emits. It is plain JSON; doubles
// are written in shortest round-trip form so parse(serialize(x)) == x.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qtel/bounds.hpp"
#include "qtel/cli/problem.hpp"
#include "qtel/phases.hpp"
#include "qtel/protocol.hpp"
#include "qtel/sim.hpp"

namespace qtel::cli {

// Tables with more outcomes than this are summarized unless asked for.
inline constexpr std::size_t kTableElisionThreshold = 64;

struct Tolerances {
    double orthonormality = kConditionTolerance;
    double unitarity = kConditionTolerance;
    double fidelity = 1e-10;
    double probability = 1e-10;
    double phase = kPhaseTolerance;

    bool operator==(const Tolerances&) const = default;
};

struct PhaseSection {
    std::string method;
    PhaseMatrix phases;
    double residual = 0.0;

    bool operator==(const PhaseSection&) const = default;
};

struct ProtocolSection {
    std::string construction;
    std::size_t d = 0;
    std::size_t n = 0;
    std::size_t outcomes = 0;
    std::optional<ProtocolTable> table;  // absent when elided
    ConditionReport conditions;

    bool operator==(const ProtocolSection&) const = default;
};

struct SimulationSection {
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    SweepReport sweep;
    // Per-outcome data from one reference run: the problem's inputState if
    // given, else the first random input of the sweep.
    std::vector<double> probabilities;
    std::vector<double> fidelities;
    std::vector<std::size_t> residual_schmidt;
    double min_fidelity = 1.0;
    double classical_bits = 0.0;

    bool operator==(const SimulationSection&) const = default;
};

struct ConcentrationSection {
    std::vector<std::string> spectrum;
    Bits et;
    Bits esch;
    ConcentrationBounds bounds;

    bool operator==(const ConcentrationSection&) const = default;
};

struct ReportDoc {
    std::string tool_version;
    std::string command;
    std::optional<ProblemSpec> problem;
    std::optional<PhaseSection> phases;
    std::optional<ProtocolSection> protocol;
    std::optional<SimulationSection> simulation;
    std::optional<BoundsReport> bounds;
    std::optional<ConcentrationSection> concentration;
    Tolerances tolerances;

    bool operator==(const ReportDoc&) const = default;
};

Json to_json(const ReportDoc& doc);
ReportDoc report_from_json(const Json& doc);

std::string serialize(const ReportDoc& doc);
// Throws ParseError on malformed input.
ReportDoc parse_report(std::string_view text);

}  // namespace qtel::cli
