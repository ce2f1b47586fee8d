#pragma once

// Phase factors theta_mk (d rows, n columns) such that
//
//     sum_k p_k exp(i (theta_mk - theta_m'k)) = delta_mm'
//
// for every pair of rows. They exist only when every p_k <= 1/d. For d = 2
// they always exist under that condition; for larger d existence depends on
// the spectrum, so the general solver may legitimately fail.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "qtel/spectrum.hpp"

namespace qtel {

inline constexpr double kPhaseTolerance = 1e-9;

enum class PhaseMethod { D2Triangle, Partition, Numerical };
std::string_view to_string(PhaseMethod method);

class PhaseMatrix {
public:
    PhaseMatrix() = default;
    PhaseMatrix(std::size_t d, std::size_t n) : d_(d), n_(n), theta_(d * n, 0.0) {}

    std::size_t d() const noexcept { return d_; }
    std::size_t n() const noexcept { return n_; }

    double& operator()(std::size_t m, std::size_t k) { return theta_[m * n_ + k]; }
    double operator()(std::size_t m, std::size_t k) const { return theta_[m * n_ + k]; }

    // Reduce every angle into [0, 2 pi); if the first row is constant,
    // shift it to all zeros.
    void canonicalize();

    bool operator==(const PhaseMatrix&) const = default;

private:
    std::size_t d_ = 0;
    std::size_t n_ = 0;
    std::vector<double> theta_;
};

// max over m != m' of |sum_k p_k exp(i (theta_mk - theta_m'k))|. The
// diagonal terms are identically sum_k p_k and are not included.
double phase_residual(const SchmidtSpectrum& spectrum, const PhaseMatrix& phases);

// Subgroup label in [0, d) for every index k.
struct Partition {
    std::vector<std::size_t> assignment;

    bool operator==(const Partition&) const = default;
};

// Closed-form solution for d = 2: indices are first-fit packed into three
// groups of weight <= 1/2 and the three group phasors are closed into a
// triangle. Row 0 is all zeros.
PhaseMatrix solve_d2(const SchmidtSpectrum& spectrum);

// Backtracking search for d subgroups each summing to 1/d. Exact on the
// rational path, tolerance 1e-9 otherwise. Throws NoPartition.
Partition find_partition(const SchmidtSpectrum& spectrum, std::size_t d);

// theta_mk = (2 pi / d) * m * l(k), with m and l counted from 1.
PhaseMatrix phases_from_partition(const Partition& partition, std::size_t d, std::size_t n);

struct NumericalOptions {
    int restarts = 64;
    long max_evaluations = 100'000;  // per restart
    std::uint64_t seed = 0x7e1e'9047'0001ULL;
};

struct NumericalResult {
    PhaseMatrix phases;
    double residual = 0.0;  // phase_residual of `phases`
    int restart = -1;       // index of the restart that produced `phases`
    bool converged = false;
};

// Multi-start Levenberg-Marquardt on the off-diagonal constraints. Always
// returns the best point found; `converged` is set when its residual is
// below kPhaseTolerance.
NumericalResult solve_numerical(const SchmidtSpectrum& spectrum, std::size_t d, const NumericalOptions& options = {});

struct PhaseSolution {
    PhaseMatrix phases;
    PhaseMethod method = PhaseMethod::Partition;
    double residual = 0.0;

    bool operator==(const PhaseSolution&) const = default;
};

// Tries the d = 2 construction, then a subgroup partition, then the
// numerical search. Throws InfeasibleSpectrum when p_max > 1/d and
// PhaseFactorsNotFound when every strategy fails.
PhaseSolution solve_general(const SchmidtSpectrum& spectrum, std::size_t d, const NumericalOptions& options = {});

}  // namespace qtel
