#include "qtel/phases.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <string>

#include "qtel/error.hpp"

namespace qtel {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double wrap_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

std::vector<std::size_t> descending_order(const SchmidtSpectrum& spectrum) {
    std::vector<std::size_t> order(spectrum.size());
    std::iota(order.begin(), order.end(), 0);
    if (spectrum.exact()) {
        const auto& ex = *spectrum.exact();
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ex[a] > ex[b]; });
    } else {
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return spectrum[a] > spectrum[b]; });
    }
    return order;
}

void require_feasible(const SchmidtSpectrum& spectrum, std::size_t d) {
    if (d < 2) throw InvalidInput("qudit dimension d must be at least 2");
    if (!max_prob_within(spectrum, d)) {
        throw InfeasibleSpectrum("largest Schmidt probability " + std::to_string(spectrum.max()) + " exceeds 1/" +
                                 std::to_string(d));
    }
}

// Generic first-fit bin assignment shared by the exact and floating paths.
template <typename Value, typename Fits>
bool assign_first_fit(const std::vector<std::size_t>& order, const std::vector<Value>& weights,
                      std::vector<Value>& loads, std::vector<std::size_t>& assignment, std::size_t pos, Fits fits) {
    if (pos == order.size()) return true;
    const std::size_t item = order[pos];
    bool tried_empty = false;
    for (std::size_t g = 0; g < loads.size(); ++g) {
        const bool empty = loads[g] == Value(0);
        if (empty && tried_empty) break;  // empty groups are interchangeable
        tried_empty = tried_empty || empty;
        if (!fits(loads[g], weights[item])) continue;
        loads[g] += weights[item];
        assignment[item] = g;
        if (assign_first_fit(order, weights, loads, assignment, pos + 1, fits)) return true;
        loads[g] -= weights[item];
    }
    return false;
}

}  // namespace

std::string_view to_string(PhaseMethod method) {
    switch (method) {
        case PhaseMethod::D2Triangle: return "d2-triangle";
        case PhaseMethod::Partition: return "partition";
        case PhaseMethod::Numerical: return "numerical";
    }
    return "unknown";
}

void PhaseMatrix::canonicalize() {
    for (auto& t : theta_) t = wrap_angle(t);
    if (d_ == 0 || n_ == 0) return;
    const double first = theta_[0];
    bool constant = true;
    for (std::size_t k = 1; k < n_; ++k) {
        const double diff = std::abs(theta_[k] - first);
        if (std::min(diff, kTwoPi - diff) > 1e-12) {
            constant = false;
            break;
        }
    }
    if (constant) std::fill(theta_.begin(), theta_.begin() + static_cast<std::ptrdiff_t>(n_), 0.0);
}

double phase_residual(const SchmidtSpectrum& spectrum, const PhaseMatrix& phases) {
    if (phases.n() != spectrum.size()) {
        throw DimensionMismatch("phase matrix has " + std::to_string(phases.n()) + " columns for a spectrum of size " +
                                std::to_string(spectrum.size()));
    }
    double worst = 0.0;
    for (std::size_t m = 0; m < phases.d(); ++m) {
        for (std::size_t mp = m + 1; mp < phases.d(); ++mp) {
            Complex acc = 0.0;
            for (std::size_t k = 0; k < phases.n(); ++k) acc += spectrum[k] * std::polar(1.0, phases(m, k) - phases(mp, k));
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

PhaseMatrix solve_d2(const SchmidtSpectrum& spectrum) {
    require_feasible(spectrum, 2);
    const std::size_t n = spectrum.size();
    const auto order = descending_order(spectrum);

    // Three bins of capacity 1/2. First-fit in descending order never fails
    // when every weight is <= 1/2.
    std::vector<std::size_t> group(n, 0);
    std::array<double, 3> load{};
    if (spectrum.exact()) {
        const auto& ex = *spectrum.exact();
        std::vector<Rational> exact_load(3, Rational(0));
        std::vector<Rational> weights(ex.begin(), ex.end());
        const bool ok = assign_first_fit(order, weights, exact_load, group, 0,
                                         [](const Rational& l, const Rational& w) { return l + w <= Rational(1, 2); });
        if (!ok) throw InfeasibleSpectrum("no three-group packing with weights <= 1/2");
        for (std::size_t g = 0; g < 3; ++g) load[g] = to_double(exact_load[g]);
    } else {
        std::vector<double> float_load(3, 0.0);
        std::vector<double> weights(spectrum.probs().begin(), spectrum.probs().end());
        const bool ok = assign_first_fit(order, weights, float_load, group, 0,
                                         [](double l, double w) { return l + w <= 0.5 + 1e-12; });
        if (!ok) throw InfeasibleSpectrum("no three-group packing with weights <= 1/2");
        std::copy(float_load.begin(), float_load.end(), load.begin());
    }

    // Close the phasors g0, g1, g2 as a triangle: g0 points along 0, g1 turns
    // by the exterior angle at their shared vertex, g2 closes the loop.
    std::array<double, 3> angle{0.0, M_PI, 0.0};
    if (load[2] > 0.0) {
        const double cos_inner = std::clamp(
            (load[0] * load[0] + load[1] * load[1] - load[2] * load[2]) / (2.0 * load[0] * load[1]), -1.0, 1.0);
        angle[1] = M_PI - std::acos(cos_inner);
        const Complex closing = -(load[0] + std::polar(load[1], angle[1]));
        angle[2] = std::arg(closing);
    }

    PhaseMatrix phases(2, n);
    for (std::size_t k = 0; k < n; ++k) phases(1, k) = angle[group[k]];
    phases.canonicalize();
    return phases;
}

Partition find_partition(const SchmidtSpectrum& spectrum, std::size_t d) {
    if (d < 2) throw InvalidInput("partition needs d >= 2");
    const std::size_t n = spectrum.size();
    if (n < d) throw NoPartition("cannot split " + std::to_string(n) + " probabilities into " + std::to_string(d) + " groups");

    const auto order = descending_order(spectrum);
    Partition out{std::vector<std::size_t>(n, 0)};
    bool found = false;
    if (spectrum.exact()) {
        const Rational target(1, static_cast<long>(d));
        std::vector<Rational> loads(d, Rational(0));
        std::vector<Rational> weights(spectrum.exact()->begin(), spectrum.exact()->end());
        found = assign_first_fit(order, weights, loads, out.assignment, 0,
                                 [&](const Rational& l, const Rational& w) { return l + w <= target; });
    } else {
        const double target = 1.0 / static_cast<double>(d);
        std::vector<double> loads(d, 0.0);
        std::vector<double> weights(spectrum.probs().begin(), spectrum.probs().end());
        found = assign_first_fit(order, weights, loads, out.assignment, 0,
                                 [&](double l, double w) { return l + w <= target + kPhaseTolerance; });
        if (found) {
            found = std::all_of(loads.begin(), loads.end(),
                                [&](double l) { return std::abs(l - target) <= kPhaseTolerance; });
        }
    }
    if (!found) throw NoPartition("no split into " + std::to_string(d) + " subgroups of weight 1/" + std::to_string(d));
    return out;
}

PhaseMatrix phases_from_partition(const Partition& partition, std::size_t d, std::size_t n) {
    if (partition.assignment.size() != n) throw DimensionMismatch("partition length differs from n");
    PhaseMatrix phases(d, n);
    for (std::size_t m = 0; m < d; ++m) {
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t l = partition.assignment[k];
            if (l >= d) throw DimensionMismatch("partition label out of range");
            // (m+1)(l+1) mod d keeps the angle exact for large products.
            const std::size_t steps = ((m + 1) * (l + 1)) % d;
            phases(m, k) = kTwoPi * static_cast<double>(steps) / static_cast<double>(d);
        }
    }
    return phases;
}

namespace {

// Off-diagonal constraints for row pairs m < m', split into real and
// imaginary parts. Row 0 is pinned to zero; the free parameters are rows
// 1..d-1 in row-major order.
class PhaseObjective {
public:
    PhaseObjective(const SchmidtSpectrum& spectrum, std::size_t d) : p_(spectrum.probs().begin(), spectrum.probs().end()), d_(d), n_(spectrum.size()) {
        for (std::size_t m = 0; m < d_; ++m)
            for (std::size_t mp = m + 1; mp < d_; ++mp) pairs_.push_back({m, mp});
    }

    Eigen::Index params() const { return static_cast<Eigen::Index>((d_ - 1) * n_); }
    Eigen::Index residuals() const { return static_cast<Eigen::Index>(2 * pairs_.size()); }

    double angle(const Eigen::VectorXd& x, std::size_t m, std::size_t k) const {
        return m == 0 ? 0.0 : x[static_cast<Eigen::Index>((m - 1) * n_ + k)];
    }

    void evaluate(const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd* jac) const {
        r.resize(residuals());
        if (jac) jac->setZero(residuals(), params());
        for (std::size_t q = 0; q < pairs_.size(); ++q) {
            const auto [m, mp] = pairs_[q];
            Complex acc = 0.0;
            for (std::size_t k = 0; k < n_; ++k) {
                const Complex term = p_[k] * std::polar(1.0, angle(x, m, k) - angle(x, mp, k));
                acc += term;
                if (jac) {
                    // d/dtheta_mk = i * term, d/dtheta_m'k = -i * term
                    const Complex dterm = Complex(0.0, 1.0) * term;
                    const auto row = static_cast<Eigen::Index>(2 * q);
                    if (m > 0) {
                        const auto col = static_cast<Eigen::Index>((m - 1) * n_ + k);
                        (*jac)(row, col) += dterm.real();
                        (*jac)(row + 1, col) += dterm.imag();
                    }
                    const auto col = static_cast<Eigen::Index>((mp - 1) * n_ + k);
                    (*jac)(row, col) -= dterm.real();
                    (*jac)(row + 1, col) -= dterm.imag();
                }
            }
            r[static_cast<Eigen::Index>(2 * q)] = acc.real();
            r[static_cast<Eigen::Index>(2 * q + 1)] = acc.imag();
        }
    }

    PhaseMatrix to_matrix(const Eigen::VectorXd& x) const {
        PhaseMatrix phases(d_, n_);
        for (std::size_t m = 1; m < d_; ++m)
            for (std::size_t k = 0; k < n_; ++k) phases(m, k) = angle(x, m, k);
        phases.canonicalize();
        return phases;
    }

private:
    std::vector<double> p_;
    std::size_t d_;
    std::size_t n_;
    std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

// R(theta) = sum over ordered pairs m != m' of |S_mm'|^2 = 2 |r|^2.
constexpr double kAcceptObjective = 1e-18;

struct LocalResult {
    Eigen::VectorXd x;
    double objective;
};

LocalResult levenberg_marquardt(const PhaseObjective& f, Eigen::VectorXd x, long max_evaluations) {
    Eigen::VectorXd r;
    Eigen::MatrixXd jac;
    f.evaluate(x, r, &jac);
    long evaluations = 1;
    double cost = r.squaredNorm();
    double mu = 1e-3;
    int stalled = 0;

    Eigen::VectorXd trial_r;
    while (evaluations < max_evaluations && 2.0 * cost > 1e-30) {
        Eigen::MatrixXd normal = jac.transpose() * jac;
        normal.diagonal().array() += mu;
        const Eigen::VectorXd step = normal.ldlt().solve(-jac.transpose() * r);
        const Eigen::VectorXd trial = x + step;
        f.evaluate(trial, trial_r, nullptr);
        ++evaluations;
        const double trial_cost = trial_r.squaredNorm();
        if (trial_cost < cost) {
            stalled = (cost - trial_cost <= 1e-14 * cost) ? stalled + 1 : 0;
            x = trial;
            cost = trial_cost;
            f.evaluate(x, r, &jac);
            ++evaluations;
            mu = std::max(mu * 0.3, 1e-15);
        } else {
            mu *= 10.0;
        }
        // A nonzero local minimum: the damping explodes or progress stops.
        if (mu > 1e12 || stalled > 50) break;
    }
    return {std::move(x), 2.0 * cost};
}

}  // namespace

NumericalResult solve_numerical(const SchmidtSpectrum& spectrum, std::size_t d, const NumericalOptions& options) {
    if (d < 2) throw InvalidInput("qudit dimension d must be at least 2");
    const PhaseObjective objective(spectrum, d);
    NumericalResult best;
    best.residual = std::numeric_limits<double>::infinity();

    std::uniform_real_distribution<double> uniform(0.0, kTwoPi);
    for (int restart = 0; restart < options.restarts; ++restart) {
        std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                          static_cast<std::uint32_t>(restart)};
        std::mt19937_64 rng(seq);
        Eigen::VectorXd x(objective.params());
        for (auto& v : x) v = uniform(rng);

        LocalResult local = levenberg_marquardt(objective, std::move(x), options.max_evaluations);
        PhaseMatrix phases = objective.to_matrix(local.x);
        const double residual = phase_residual(spectrum, phases);
        if (residual < best.residual) {
            best.phases = std::move(phases);
            best.residual = residual;
            best.restart = restart;
        }
        // Restarts run in index order, so the first acceptable one wins.
        if (local.objective < kAcceptObjective && residual < kPhaseTolerance) {
            best.converged = true;
            break;
        }
    }
    return best;
}

PhaseSolution solve_general(const SchmidtSpectrum& spectrum, std::size_t d, const NumericalOptions& options) {
    require_feasible(spectrum, d);
    if (d == 2) {
        PhaseMatrix phases = solve_d2(spectrum);
        const double residual = phase_residual(spectrum, phases);
        return {std::move(phases), PhaseMethod::D2Triangle, residual};
    }
    try {
        const Partition partition = find_partition(spectrum, d);
        PhaseMatrix phases = phases_from_partition(partition, d, spectrum.size());
        phases.canonicalize();
        const double residual = phase_residual(spectrum, phases);
        if (residual < kPhaseTolerance) return {std::move(phases), PhaseMethod::Partition, residual};
    } catch (const NoPartition&) {
    }
    NumericalResult numeric = solve_numerical(spectrum, d, options);
    if (!numeric.converged) {
        throw PhaseFactorsNotFound("no phase factors found for d=" + std::to_string(d) + "; best residual " +
                                       std::to_string(numeric.residual),
                                   numeric.residual);
    }
    return {std::move(numeric.phases), PhaseMethod::Numerical, numeric.residual};
}

}  // namespace qtel
