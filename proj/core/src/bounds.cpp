#include "qtel/bounds.hpp"

#include <cmath>

#include "qtel/error.hpp"

namespace qtel {

namespace {

constexpr double kBitsSlack = 1e-12;

Rational as_rational(std::size_t v) { return Rational(static_cast<unsigned long long>(v)); }

// log2 of a positive rational without losing precision to the quotient.
double log2_rational(const Rational& r) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    const double num = numerator(r).convert_to<double>();
    const double den = denominator(r).convert_to<double>();
    return std::log2(num) - std::log2(den);
}

// 2^bells * p_max^copies <= 1, exactly.
bool exact_concentration_feasible(const Rational& pmax, std::size_t copies, std::size_t bells) {
    Rational lhs = 1;
    for (std::size_t i = 0; i < copies; ++i) lhs *= pmax;
    for (std::size_t i = 0; i < bells; ++i) lhs *= 2;
    return lhs <= 1;
}

}  // namespace

double LogTerm::value() const {
    if (coefficient == 0) return 0.0;
    return to_double(coefficient) * log2_rational(argument);
}

std::string LogTerm::to_string() const {
    if (coefficient == 0 || argument == 1) return "0";
    const std::string arg = "log2(" + qtel::to_string(argument) + ")";
    if (coefficient == 1) return arg;
    return qtel::to_string(coefficient) + "*" + arg;
}

Bits Bits::log2_of(Rational argument, Rational coefficient) {
    if (argument <= 0) throw InvalidInput("log2 of a non-positive number");
    LogTerm term{std::move(coefficient), std::move(argument)};
    return {term.value(), std::move(term)};
}

Bits entanglement_of_teleportation(const SchmidtSpectrum& spectrum) {
    if (spectrum.exact()) {
        const Rational& pmax = (*spectrum.exact())[spectrum.argmax()];
        return Bits::log2_of(1 / pmax);
    }
    return Bits::approximate(-std::log2(spectrum.max()));
}

Bits schmidt_entanglement(const SchmidtSpectrum& spectrum) { return Bits::log2_of(as_rational(spectrum.size())); }

bool teleport_feasible(const SchmidtSpectrum& spectrum, std::size_t d) {
    if (d < 2) throw InvalidInput("qudit dimension d must be at least 2");
    return max_prob_within(spectrum, d);
}

Bits locc_ccc_bound(std::size_t n1, std::size_t n2) {
    if (n2 == 0) throw InvalidInput("Schmidt rank must be positive");
    if (n1 < n2) {
        throw RankOrder("source rank " + std::to_string(n1) + " is below target rank " + std::to_string(n2));
    }
    return Bits::log2_of(Rational(as_rational(n1) / as_rational(n2)));
}

std::string_view to_string(CccAssumption a) {
    switch (a) {
        case CccAssumption::ZeroResidual: return "zero-residual";
        case CccAssumption::DAboveHalfN: return "d>n/2";
        case CccAssumption::ConcentrateAndTeleport: return "concentrate-and-teleport";
        case CccAssumption::StandardFloor: return "standard-floor";
    }
    return "unknown";
}

CccBound teleport_ccc_bound(std::size_t n, std::size_t d, bool assume_zero_residual) {
    if (d < 2 || n < d) throw InvalidInput("CCC bound needs n >= d >= 2");
    if (2 * d > n) return {Bits::log2_of(as_rational(n * d)), CccAssumption::DAboveHalfN, true};
    if (assume_zero_residual) return {Bits::log2_of(as_rational(n * d)), CccAssumption::ZeroResidual, true};
    return {Bits::log2_of(as_rational(d), 2), CccAssumption::StandardFloor, false};
}

CccBound concentrate_and_teleport_bound(std::size_t n, std::size_t d) {
    if (d < 2 || n < d) throw InvalidInput("CCC bound needs n >= d >= 2");
    const double total = locc_ccc_bound(n, d).value + 2.0 * std::log2(static_cast<double>(d));
    // log2(n/d) + 2 log2 d = log2(n d)
    Bits bits = Bits::log2_of(as_rational(n * d));
    bits.value = total;
    return {std::move(bits), CccAssumption::ConcentrateAndTeleport, true};
}

ResidualCap residual_cap(std::size_t n, std::size_t d) {
    if (d < 1 || n < d) throw InvalidInput("residual cap needs n >= d >= 1");
    ResidualCap cap;
    cap.raw = 2 * d > n ? Bits::log2_of(1) : Bits::log2_of(Rational(as_rational(n) / as_rational(d)));
    cap.integer_constrained = Bits::log2_of(as_rational(n / d));
    return cap;
}

ConcentrationBounds concentration_bounds(const SchmidtSpectrum& spectrum, std::size_t copies, std::size_t bells) {
    if (copies == 0) throw InvalidInput("concentration needs at least one copy");
    ConcentrationBounds out;
    out.copies = copies;
    out.bells = bells;
    const Bits et = entanglement_of_teleportation(spectrum);
    const Bits esch = schmidt_entanglement(spectrum);
    const double budget = static_cast<double>(copies) * et.value;

    if (spectrum.exact()) {
        const Rational& pmax = (*spectrum.exact())[spectrum.argmax()];
        out.feasible = exact_concentration_feasible(pmax, copies, bells);
        auto m = static_cast<std::size_t>(std::floor(budget + kBitsSlack));
        while (m > 0 && !exact_concentration_feasible(pmax, copies, m)) --m;
        while (exact_concentration_feasible(pmax, copies, m + 1)) ++m;
        out.max_bells = m;
    } else {
        out.feasible = static_cast<double>(bells) <= budget + kBitsSlack;
        out.max_bells = static_cast<std::size_t>(std::floor(budget + kBitsSlack));
    }
    out.c1_lower_bound = static_cast<double>(copies) * esch.value - static_cast<double>(bells);
    out.c1_minimum = static_cast<double>(copies) * (esch.value - et.value);
    out.c2 = 2 * bells;
    return out;
}

BoundsReport compute_bounds(const SchmidtSpectrum& spectrum, std::size_t d) {
    BoundsReport r;
    r.d = d;
    r.n = spectrum.size();
    r.et = entanglement_of_teleportation(spectrum);
    r.esch = schmidt_entanglement(spectrum);
    r.teleport_feasible = teleport_feasible(spectrum, d);
    if (r.n >= d) {
        r.ccc_zero_residual = teleport_ccc_bound(r.n, d, true);
        r.ccc_unconditional = teleport_ccc_bound(r.n, d, false);
        r.ccc_concentrate_and_teleport = concentrate_and_teleport_bound(r.n, d);
        r.residual = residual_cap(r.n, d);
    }
    const ConcentrationBounds probe = concentration_bounds(spectrum, 1, 0);
    r.concentration = concentration_bounds(spectrum, 1, probe.max_bells);
    return r;
}

}  // namespace qtel
