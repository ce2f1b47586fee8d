#pragma once

// Entanglement measures and classical-communication-cost (CCC) bounds.
// All quantities are in bits.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "qtel/spectrum.hpp"

namespace qtel {

// coefficient * log2(argument), both rational.
struct LogTerm {
    Rational coefficient = 1;
    Rational argument = 1;

    double value() const;
    std::string to_string() const;

    bool operator==(const LogTerm&) const = default;
};

// A float value, plus an exact symbolic form when one is available.
struct Bits {
    double value = 0.0;
    std::optional<LogTerm> exact;

    static Bits log2_of(Rational argument, Rational coefficient = 1);
    static Bits approximate(double value) { return {value, std::nullopt}; }

    bool operator==(const Bits&) const = default;
};

// -log2(max_k p_k)
Bits entanglement_of_teleportation(const SchmidtSpectrum& spectrum);
// log2(number of Schmidt terms)
Bits schmidt_entanglement(const SchmidtSpectrum& spectrum);

// Faithful teleportation of a d-level state is possible iff p_max <= 1/d.
bool teleport_feasible(const SchmidtSpectrum& spectrum, std::size_t d);

// Converting a Schmidt-rank-n1 state into a Schmidt-rank-n2 state by LOCC
// needs at least log2(n1 / n2) bits. Throws RankOrder when n1 < n2.
Bits locc_ccc_bound(std::size_t n1, std::size_t n2);

enum class CccAssumption {
    ZeroResidual,           // no entanglement left after teleporting
    DAboveHalfN,            // d > n/2 forces zero residual entanglement
    ConcentrateAndTeleport, // concentrate to d x d, then the standard protocol
    StandardFloor,          // 2 log2 d; valid but not tight for n > d
};
std::string_view to_string(CccAssumption a);

struct CccBound {
    Bits bits;
    CccAssumption assumption = CccAssumption::StandardFloor;
    bool tight = true;

    bool operator==(const CccBound&) const = default;
};

// log2(n d) when d > n/2 or when zero residual entanglement is assumed;
// otherwise the 2 log2 d floor, marked not tight.
CccBound teleport_ccc_bound(std::size_t n, std::size_t d, bool assume_zero_residual);

// log2(n / d) for concentrating, plus 2 log2 d for teleporting.
CccBound concentrate_and_teleport_bound(std::size_t n, std::size_t d);

struct ResidualCap {
    // log2 n - log2 d, or 0 when d > n/2.
    Bits raw;
    // log2 of the largest integer n_s with n_s * d <= n.
    Bits integer_constrained;

    bool operator==(const ResidualCap&) const = default;
};
ResidualCap residual_cap(std::size_t n, std::size_t d);

struct ConcentrationBounds {
    std::size_t copies = 0;
    std::size_t bells = 0;
    bool feasible = false;     // bells <= copies * E_t
    std::size_t max_bells = 0; // floor(copies * E_t)
    double c1_lower_bound = 0.0;  // copies * E_Sch - bells
    double c1_minimum = 0.0;      // copies * (E_Sch - E_t)
    std::size_t c2 = 0;           // 2 * bells

    bool operator==(const ConcentrationBounds&) const = default;
};
ConcentrationBounds concentration_bounds(const SchmidtSpectrum& spectrum, std::size_t copies, std::size_t bells);

struct BoundsReport {
    std::size_t d = 0;
    std::size_t n = 0;
    Bits et;
    Bits esch;
    bool teleport_feasible = false;
    // Absent when n < d: no faithful protocol exists to bound.
    std::optional<CccBound> ccc_zero_residual;
    std::optional<CccBound> ccc_unconditional;
    std::optional<CccBound> ccc_concentrate_and_teleport;
    std::optional<ResidualCap> residual;
    ConcentrationBounds concentration;  // one copy, max_bells Bell pairs

    bool operator==(const BoundsReport&) const = default;
};

BoundsReport compute_bounds(const SchmidtSpectrum& spectrum, std::size_t d);

}  // namespace qtel
