#pragma once

// Protocol coefficients V^(j)_mk for teleporting a d-level state through a
// resource with n Schmidt terms. There are s = n*d outcomes j, and every
// coefficient has modulus 1/sqrt(s). A table is valid when
//
//   orthonormality:  sum_{m,k} conj(V^(j)_mk) V^(j')_mk          = delta_jj'
//   unitarity:       n d sum_k p_k conj(V^(j)_m'k) V^(j)_mk     = delta_mm'
//
// Alice measures in the basis |M^(j)> = sum_{m,k} V^(j)_mk |m>|k>; Bob undoes
// u^(j), whose column m is sqrt(s) sum_k conj(V^(j)_mk) sqrt(p_k) |k>.
//
// Indices are 0-based in storage. Wherever a closed-form expression uses
// j, m, k it uses (index + 1), so tables match the 1-based formulas.

#include <cstddef>
#include <string_view>
#include <vector>

#include "qtel/linalg.hpp"
#include "qtel/phases.hpp"
#include "qtel/spectrum.hpp"

namespace qtel {

inline constexpr double kConditionTolerance = 1e-10;

enum class Construction { GeneralFormula, D2Formula, Explicit };
std::string_view to_string(Construction c);

class ProtocolTable {
public:
    ProtocolTable() = default;
    ProtocolTable(std::size_t d, std::size_t n, Construction construction)
        : d_(d), n_(n), construction_(construction), v_(d * n * d * n) {}

    std::size_t d() const noexcept { return d_; }
    std::size_t n() const noexcept { return n_; }
    std::size_t outcomes() const noexcept { return d_ * n_; }
    Construction construction() const noexcept { return construction_; }

    Complex& operator()(std::size_t j, std::size_t m, std::size_t k) { return v_[(j * d_ + m) * n_ + k]; }
    const Complex& operator()(std::size_t j, std::size_t m, std::size_t k) const { return v_[(j * d_ + m) * n_ + k]; }

    bool operator==(const ProtocolTable&) const = default;

private:
    std::size_t d_ = 0;
    std::size_t n_ = 0;
    Construction construction_ = Construction::Explicit;
    std::vector<Complex> v_;
};

struct MeasurementBasis {
    std::vector<ComplexVec> states;  // s vectors of dimension d*n, |m>_1 |k>_2
};

struct BobUnitarySet {
    std::vector<ComplexMat> unitaries;  // s matrices, n x n
};

struct ConditionReport {
    double orthonormality = 0.0;
    double unitarity = 0.0;

    bool passes(double tol = kConditionTolerance) const { return orthonormality < tol && unitarity < tol; }

    bool operator==(const ConditionReport&) const = default;
};

// V^(j)_mk = exp(i theta_mk) exp(i j (2 pi m / s + 2 pi k / n)) / sqrt(s)
ProtocolTable synthesize_general(const SchmidtSpectrum& spectrum, std::size_t d, const PhaseMatrix& phases);

// Qubit-specific table built from e_{j,k} = exp(2 pi i j k / n) and one
// row of angles theta_k with sum_k p_k exp(i theta_k) = 0:
//   j <= n:  V_1k =  e_jk / sqrt(s),                  V_2k = e_jk exp(i theta_k) / sqrt(s)
//   j >  n:  V_1k = -e_jk exp(-i theta_k) / sqrt(s),  V_2k = e_jk / sqrt(s)
// theta_k is taken as row 1 minus row 0 of `phases`.
ProtocolTable synthesize_d2(const SchmidtSpectrum& spectrum, const PhaseMatrix& phases);

MeasurementBasis measurement_basis(const ProtocolTable& table);

// The first d columns come from the table; the remaining n - d columns are
// completed by Gram-Schmidt over the standard basis in index order.
BobUnitarySet bob_unitaries(const ProtocolTable& table, const SchmidtSpectrum& spectrum);

ConditionReport verify_conditions(const ProtocolTable& table, const SchmidtSpectrum& spectrum);

enum class SynthesisMethod { Auto, D2, General };

// Everything needed to run the protocol.
struct Protocol {
    PhaseSolution phases;
    ProtocolTable table;
    MeasurementBasis basis;
    BobUnitarySet unitaries;
    ConditionReport conditions;
};

// Auto uses the qubit formula for d = 2 and the general formula otherwise.
Protocol synthesize(const SchmidtSpectrum& spectrum, std::size_t d, SynthesisMethod method = SynthesisMethod::Auto,
                    const NumericalOptions& options = {});

}  // namespace qtel
