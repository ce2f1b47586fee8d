#include "qtel/protocol.hpp"

#include <cmath>
#include <string>

#include "qtel/error.hpp"

namespace qtel {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr double kColumnTolerance = 1e-8;

// exp(2 pi i * num / den) with num reduced first.
Complex root_of_unity(std::size_t num, std::size_t den) {
    return std::polar(1.0, kTwoPi * static_cast<double>(num % den) / static_cast<double>(den));
}

void require_table_feasible(const SchmidtSpectrum& spectrum, std::size_t d) {
    if (d < 2) throw InvalidInput("qudit dimension d must be at least 2");
    if (!max_prob_within(spectrum, d)) {
        throw InfeasibleSpectrum("largest Schmidt probability " + std::to_string(spectrum.max()) + " exceeds 1/" +
                                 std::to_string(d) + "; faithful teleportation is impossible");
    }
}

void require_phase_shape(const PhaseMatrix& phases, std::size_t d, std::size_t n) {
    if (phases.d() != d || phases.n() != n) {
        throw DimensionMismatch("phase matrix is " + std::to_string(phases.d()) + "x" + std::to_string(phases.n()) +
                                ", expected " + std::to_string(d) + "x" + std::to_string(n));
    }
}

}  // namespace

std::string_view to_string(Construction c) {
    switch (c) {
        case Construction::GeneralFormula: return "general";
        case Construction::D2Formula: return "d2";
        case Construction::Explicit: return "explicit";
    }
    return "unknown";
}

ProtocolTable synthesize_general(const SchmidtSpectrum& spectrum, std::size_t d, const PhaseMatrix& phases) {
    require_table_feasible(spectrum, d);
    const std::size_t n = spectrum.size();
    require_phase_shape(phases, d, n);
    const std::size_t s = n * d;
    const double scale = 1.0 / std::sqrt(static_cast<double>(s));

    ProtocolTable table(d, n, Construction::GeneralFormula);
    for (std::size_t j = 0; j < s; ++j) {
        for (std::size_t m = 0; m < d; ++m) {
            for (std::size_t k = 0; k < n; ++k) {
                const std::size_t jf = j + 1;
                const Complex dft = root_of_unity(jf * (m + 1), s) * root_of_unity(jf * (k + 1), n);
                table(j, m, k) = scale * std::polar(1.0, phases(m, k)) * dft;
            }
        }
    }
    return table;
}

ProtocolTable synthesize_d2(const SchmidtSpectrum& spectrum, const PhaseMatrix& phases) {
    require_table_feasible(spectrum, 2);
    const std::size_t n = spectrum.size();
    require_phase_shape(phases, 2, n);
    const std::size_t s = 2 * n;
    const double scale = 1.0 / std::sqrt(static_cast<double>(s));
    const ComplexMat e = ComplexMat::roots_of_unity(n);

    ProtocolTable table(2, n, Construction::D2Formula);
    for (std::size_t j = 0; j < s; ++j) {
        // e_{j,k} is periodic in j with period n.
        const std::size_t row = j % n;
        for (std::size_t k = 0; k < n; ++k) {
            const Complex ejk = e(row, k);
            const double theta = phases(1, k) - phases(0, k);
            if (j < n) {
                table(j, 0, k) = scale * ejk;
                table(j, 1, k) = scale * ejk * std::polar(1.0, theta);
            } else {
                table(j, 0, k) = -scale * ejk * std::polar(1.0, -theta);
                table(j, 1, k) = scale * ejk;
            }
        }
    }
    return table;
}

MeasurementBasis measurement_basis(const ProtocolTable& table) {
    const std::size_t d = table.d();
    const std::size_t n = table.n();
    MeasurementBasis basis;
    basis.states.reserve(table.outcomes());
    for (std::size_t j = 0; j < table.outcomes(); ++j) {
        ComplexVec state(d * n);
        for (std::size_t m = 0; m < d; ++m)
            for (std::size_t k = 0; k < n; ++k) state[m * n + k] = table(j, m, k);
        basis.states.push_back(std::move(state));
    }
    return basis;
}

BobUnitarySet bob_unitaries(const ProtocolTable& table, const SchmidtSpectrum& spectrum) {
    const std::size_t d = table.d();
    const std::size_t n = table.n();
    if (spectrum.size() != n) throw DimensionMismatch("spectrum size differs from table n");
    const double root_s = std::sqrt(static_cast<double>(table.outcomes()));

    BobUnitarySet out;
    out.unitaries.reserve(table.outcomes());
    for (std::size_t j = 0; j < table.outcomes(); ++j) {
        std::vector<ComplexVec> columns;
        columns.reserve(n);
        for (std::size_t m = 0; m < d; ++m) {
            ComplexVec col(n);
            for (std::size_t k = 0; k < n; ++k) col[k] = root_s * std::conj(table(j, m, k)) * std::sqrt(spectrum[k]);
            columns.push_back(std::move(col));
        }
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t b = a; b < d; ++b) {
                const Complex g = inner(columns[a], columns[b]);
                const double expected = a == b ? 1.0 : 0.0;
                if (std::abs(g - expected) > kColumnTolerance) {
                    throw DegenerateColumns("outcome " + std::to_string(j) + ": defined columns " + std::to_string(a) +
                                            "," + std::to_string(b) + " have overlap " + std::to_string(std::abs(g)));
                }
            }
        }

        for (std::size_t seed = 0; seed < n && columns.size() < n; ++seed) {
            ComplexVec candidate = ComplexVec::basis(n, seed);
            // Two passes of modified Gram-Schmidt keep the completion orthogonal
            // to working precision.
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& c : columns) candidate -= inner(c, candidate) * c;
            if (candidate.norm() <= kColumnTolerance) continue;
            columns.push_back(candidate.normalized());
        }
        if (columns.size() != n) throw DegenerateColumns("could not complete outcome " + std::to_string(j) + " to a unitary");
        out.unitaries.push_back(ComplexMat::from_columns(columns));
    }
    return out;
}

ConditionReport verify_conditions(const ProtocolTable& table, const SchmidtSpectrum& spectrum) {
    const std::size_t d = table.d();
    const std::size_t n = table.n();
    const std::size_t s = table.outcomes();
    if (spectrum.size() != n) throw DimensionMismatch("spectrum size differs from table n");

    ConditionReport report;
    for (std::size_t j = 0; j < s; ++j) {
        for (std::size_t jp = j; jp < s; ++jp) {
            Complex acc = 0.0;
            for (std::size_t m = 0; m < d; ++m)
                for (std::size_t k = 0; k < n; ++k) acc += std::conj(table(j, m, k)) * table(jp, m, k);
            const double expected = j == jp ? 1.0 : 0.0;
            report.orthonormality = std::max(report.orthonormality, std::abs(acc - expected));
        }
    }
    const double nd = static_cast<double>(s);
    for (std::size_t j = 0; j < s; ++j) {
        for (std::size_t m = 0; m < d; ++m) {
            for (std::size_t mp = 0; mp < d; ++mp) {
                Complex acc = 0.0;
                for (std::size_t k = 0; k < n; ++k) acc += spectrum[k] * std::conj(table(j, mp, k)) * table(j, m, k);
                const double expected = m == mp ? 1.0 : 0.0;
                report.unitarity = std::max(report.unitarity, std::abs(nd * acc - expected));
            }
        }
    }
    return report;
}

Protocol synthesize(const SchmidtSpectrum& spectrum, std::size_t d, SynthesisMethod method,
                    const NumericalOptions& options) {
    if (method == SynthesisMethod::D2 && d != 2) throw InvalidInput("the d2 construction requires d = 2");
    require_table_feasible(spectrum, d);

    PhaseSolution phases = solve_general(spectrum, d, options);
    const bool use_d2 = method == SynthesisMethod::D2 || (method == SynthesisMethod::Auto && d == 2);
    ProtocolTable table = use_d2 ? synthesize_d2(spectrum, phases.phases) : synthesize_general(spectrum, d, phases.phases);
    MeasurementBasis basis = measurement_basis(table);
    BobUnitarySet unitaries = bob_unitaries(table, spectrum);
    const ConditionReport conditions = verify_conditions(table, spectrum);
    return {std::move(phases), std::move(table), std::move(basis), std::move(unitaries), conditions};
}

}  // namespace qtel
