// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qtel/qtel.hpp"
#include "test_support.hpp"

using namespace qtel;

namespace {

constexpr double kPi = std::numbers::pi;

// Collects failed checks with a short description.
class Checks {
public:
    void expect(bool ok, const std::string& what) {
        ++count_;
        if (!ok && failures_.size() < 8) failures_.push_back(what);
        if (!ok) ++failed_;
    }
    bool ok() const { return failed_ == 0; }
    std::string summary() const {
        std::ostringstream s;
        if (ok()) {
            s << count_ << " checks";
        } else {
            s << failed_ << "/" << count_ << " checks failed";
            for (const auto& f : failures_) s << "; " << f;
        }
        return s.str();
    }

private:
    int count_ = 0;
    int failed_ = 0;
    std::vector<std::string> failures_;
};

struct Criterion {
    int id;
    std::string name;
    double time_limit_s;  // <= 0: none
    std::function<std::string(Checks&)> body;
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

PhaseMatrix qubit_row(std::initializer_list<double> row1) {
    PhaseMatrix t(2, row1.size());
    std::size_t k = 0;
    for (double a : row1) t(1, k++) = a;
    return t;
}

Protocol assemble(const ProtocolTable& table, const SchmidtSpectrum& spectrum) {
    Protocol p;
    p.table = table;
    p.basis = measurement_basis(table);
    p.unitaries = bob_unitaries(table, spectrum);
    p.conditions = verify_conditions(table, spectrum);
    return p;
}

std::string golden_example(Checks& c) {
    const auto spectrum = SchmidtSpectrum::from_rationals({Rational(1, 2), Rational(1, 3), Rational(1, 6)});
    const std::vector<double> theta{0.0, kPi, kPi};
    Complex closure = 0.0;
    for (std::size_t k = 0; k < 3; ++k) closure += spectrum[k] * std::polar(1.0, theta[k]);
    c.expect(std::abs(closure) < 1e-12, "phasor sum " + fmt(std::abs(closure)));

    const PhaseMatrix solved = solve_d2(spectrum);
    for (std::size_t k = 0; k < 3; ++k)
        c.expect(std::abs(std::remainder(solved(1, k) - solved(0, k) - theta[k], 2 * kPi)) < 1e-12,
                 "solved angle " + std::to_string(k));

    const Protocol p = assemble(synthesize_d2(spectrum, qubit_row({0.0, kPi, kPi})), spectrum);
    c.expect(p.table.outcomes() == 6, "outcome count");
    c.expect(p.conditions.orthonormality < 1e-10, "orthonormality " + fmt(p.conditions.orthonormality));
    c.expect(p.conditions.unitarity < 1e-10, "unitarity " + fmt(p.conditions.unitarity));

    std::mt19937_64 rng(2024);
    double min_fid = 1.0, max_dev = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const SimulationTrace t = run_protocol(random_qudit(2, rng), spectrum, p);
        for (const auto& o : t.outcomes) {
            min_fid = std::min(min_fid, o.fidelity);
            max_dev = std::max(max_dev, std::abs(o.probability - 1.0 / 6.0));
        }
    }
    c.expect(min_fid >= 1.0 - 1e-10, "min fidelity " + fmt(min_fid));
    c.expect(max_dev < 1e-10, "probability deviation " + fmt(max_dev));
    return "orth " + fmt(p.conditions.orthonormality) + ", unit " + fmt(p.conditions.unitarity) + ", 1-minF " +
           fmt(1.0 - min_fid) + ", |p-1/6| " + fmt(max_dev);
}

std::string standard_recovery(Checks& c) {
    const auto spectrum = SchmidtSpectrum::uniform(2);
    const Protocol p = assemble(synthesize_d2(spectrum, qubit_row({0.0, kPi})), spectrum);
    const std::set<std::array<int, 3>> plus{{2, 1, 1}, {3, 1, 1}, {1, 1, 2}, {2, 1, 2}, {3, 1, 2}, {4, 1, 2},
                                            {2, 2, 1}, {4, 2, 1}, {3, 2, 2}, {4, 2, 2}};
    for (int j = 1; j <= 4; ++j)
        for (int m = 1; m <= 2; ++m)
            for (int k = 1; k <= 2; ++k) {
                const double expect = plus.count({j, m, k}) ? 0.5 : -0.5;
                c.expect(std::abs(p.table(j - 1, m - 1, k - 1) - expect) < 1e-15,
                         "V^(" + std::to_string(j) + ")_" + std::to_string(m) + std::to_string(k));
            }
    for (std::size_t j = 0; j < 4; ++j) {
        const ComplexMat dagger = p.unitaries.unitaries[j].adjoint();
        for (std::size_t m = 0; m < 2; ++m)
            for (std::size_t k = 0; k < 2; ++k)
                c.expect(std::abs(dagger(m, k) - std::sqrt(2.0) * p.table(j, m, k)) < 1e-12, "Bob correction");
    }
    std::mt19937_64 rng(7);
    double min_fid = 1.0;
    for (int trial = 0; trial < 100; ++trial) {
        const SimulationTrace t = run_protocol(random_qudit(2, rng), spectrum, p);
        c.expect(t.outcomes.size() == 4, "outcome count");
        min_fid = std::min(min_fid, t.min_fidelity);
    }
    c.expect(min_fid >= 1.0 - 1e-10, "min fidelity " + fmt(min_fid));
    return "1-minF " + fmt(1.0 - min_fid);
}

std::string feasibility_gate(Checks& c) {
    std::mt19937_64 rng(31337);
    int feasible = 0, infeasible = 0, synthesized = 0, not_found = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t d = 2 + static_cast<std::size_t>(trial % 2);
        const std::size_t n = 2 + static_cast<std::size_t>(rng() % 5);
        // Half the draws are pulled under the cap, half are unconstrained.
        const double cap = (trial / 2) % 2 == 0 ? std::max(1.0 / static_cast<double>(d), 1.0 / static_cast<double>(n))
                                                : 1.0;
        const auto spectrum = qtel::testing::random_spectrum(n, cap, rng);
        const bool within = spectrum.max() <= 1.0 / static_cast<double>(d);
        (within ? feasible : infeasible)++;
        try {
            const Protocol p = synthesize(spectrum, d);
            c.expect(within, "synthesized with p_max " + fmt(spectrum.max()) + " > 1/" + std::to_string(d));
            c.expect(p.conditions.passes(), "conditions for n=" + std::to_string(n));
            ++synthesized;
            for (int input = 0; input < 3; ++input) {
                const SimulationTrace t = run_protocol(random_qudit(d, rng), spectrum, p);
                c.expect(t.min_fidelity >= 1.0 - 1e-10, "fidelity " + fmt(t.min_fidelity));
                c.expect(std::abs(t.total_probability - 1.0) < 1e-10, "total probability");
            }
        } catch (const InfeasibleSpectrum&) {
            c.expect(!within, "InfeasibleSpectrum with p_max " + fmt(spectrum.max()));
        } catch (const PhaseFactorsNotFound&) {
            c.expect(within && d > 2, "phase factors not found for d=" + std::to_string(d));
            ++not_found;
        }
    }
    return std::to_string(feasible) + " within cap (" + std::to_string(synthesized) + " synthesized, " +
           std::to_string(not_found) + " without phase factors), " + std::to_string(infeasible) + " rejected";
}

std::string ccc_accounting(Checks& c) {
    std::mt19937_64 rng(404);
    int protocols = 0;
    for (std::size_t d = 2; d <= 3; ++d)
        for (std::size_t n = d; n <= 6; ++n)
            for (int trial = 0; trial < 4; ++trial) {
                const auto spectrum = trial == 0 ? SchmidtSpectrum::uniform(n)
                                                 : qtel::testing::random_spectrum(n, 1.0 / static_cast<double>(d), rng);
                Protocol p;
                try {
                    p = synthesize(spectrum, d);
                } catch (const PhaseFactorsNotFound&) {
                    continue;
                }
                ++protocols;
                const SimulationTrace t = run_protocol(random_qudit(d, rng), spectrum, p);
                c.expect(p.table.outcomes() == n * d && t.outcomes.size() == n * d, "outcome count");
                c.expect(t.classical_bits == std::log2(static_cast<double>(n * d)), "classicalBits");
                c.expect(t.classical_bits == teleport_ccc_bound(n, d, true).bits.value, "bound agreement");
            }
    const CccBound zero = teleport_ccc_bound(4, 2, true);
    const CccBound relaxed = teleport_ccc_bound(4, 2, false);
    c.expect(zero.bits.value == 3.0 && zero.tight, "zero-residual bound " + fmt(zero.bits.value));
    c.expect(relaxed.bits.value == 2.0 && !relaxed.tight, "residual-allowed bound " + fmt(relaxed.bits.value));
    return std::to_string(protocols) + " protocols; double-Bell " + fmt(zero.bits.value) + " / " +
           fmt(relaxed.bits.value) + " (not tight)";
}

std::string residual_entanglement(Checks& c) {
    std::mt19937_64 rng(505);
    std::size_t outcomes = 0;
    for (std::size_t d = 2; d <= 3; ++d)
        for (std::size_t n = d; n <= 6; ++n)
            for (int trial = 0; trial < 3; ++trial) {
                const auto spectrum = trial == 0 ? SchmidtSpectrum::uniform(n)
                                                 : qtel::testing::random_spectrum(n, 1.0 / static_cast<double>(d), rng);
                Protocol p;
                try {
                    p = synthesize(spectrum, d);
                } catch (const PhaseFactorsNotFound&) {
                    continue;
                }
                const SimulationTrace t = run_protocol(random_qudit(d, rng), spectrum, p);
                for (const auto& o : t.outcomes) {
                    c.expect(o.residual_schmidt == 1, "residual Schmidt " + std::to_string(o.residual_schmidt));
                    ++outcomes;
                }
            }
    const auto bell = SchmidtSpectrum::uniform(2);
    const double r = 1.0 / std::sqrt(2.0);
    const SimulationTrace spect =
        run_with_spectator(random_qudit(2, rng), bell, synthesize(bell, 2), ComplexVec{r, 0.0, 0.0, r}, 2);
    for (const auto& o : spect.outcomes) {
        c.expect(o.residual_schmidt == 2, "one-Bell-pair residual " + std::to_string(o.residual_schmidt));
        c.expect(o.fidelity >= 1.0 - 1e-10, "one-Bell-pair fidelity");
    }
    return std::to_string(outcomes) + " outcomes with n_s = 1; one-Bell-pair n_s = " +
           std::to_string(spect.max_residual_schmidt);
}

std::string concentration(Checks& c) {
    const auto spectrum = SchmidtSpectrum::from_rationals({Rational(1, 2), Rational(1, 3), Rational(1, 6)});
    const Bits esch = schmidt_entanglement(spectrum);
    const Bits et = entanglement_of_teleportation(spectrum);
    c.expect(std::abs(esch.value - std::log2(3.0)) < 1e-12, "E_Sch " + fmt(esch.value));
    c.expect(et.value == 1.0, "E_t " + fmt(et.value));
    double worst = 0.0;
    for (std::size_t n = 1; n <= 8; ++n)
        for (std::size_t m = 0; m <= n + 3; ++m) {
            const auto b = concentration_bounds(spectrum, n, m);
            c.expect(b.feasible == (m <= n), "feasibility n=" + std::to_string(n) + " m=" + std::to_string(m));
            const double expect = static_cast<double>(n) * std::log2(3.0) - static_cast<double>(m);
            worst = std::max(worst, std::abs(b.c1_lower_bound - expect));
        }
    c.expect(worst < 1e-12, "C1LowerBound error " + fmt(worst));
    for (std::size_t size : {2u, 4u, 8u})
        for (std::size_t copies = 1; copies <= 4; ++copies) {
            const auto u = SchmidtSpectrum::uniform(size);
            const auto m = static_cast<std::size_t>(std::llround(copies * entanglement_of_teleportation(u).value));
            const auto b = concentration_bounds(u, copies, m);
            c.expect(b.feasible && std::abs(b.c1_lower_bound) < 1e-12, "uniform edge n=" + std::to_string(size));
        }
    return "max |C1 - (n log2 3 - m)| " + fmt(worst);
}

std::string property_suite(Checks& c) {
    using qtel::testing::random_state;
    using qtel::testing::random_vector;
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<std::size_t> dim(1, 6);
    std::normal_distribution<double> g;
    const int cases = 120;
    double bilinear = 0, recon = 0, complete = 0, unitary = 0, linear = 0;

    for (int i = 0; i < cases; ++i) {
        const ComplexVec a = random_vector(dim(rng), rng), a2 = random_vector(a.dim(), rng);
        const ComplexVec b = random_vector(dim(rng), rng);
        const Complex alpha(g(rng), g(rng));
        bilinear = std::max({bilinear, max_abs_diff(tensor(alpha * a + a2, b), alpha * tensor(a, b) + tensor(a2, b)),
                             max_abs_diff(tensor(a, alpha * b), alpha * tensor(a, b))});
    }
    for (int i = 0; i < cases; ++i) {
        const BipartiteShape shape{dim(rng), dim(rng)};
        const ComplexVec state = random_state(shape.total(), rng);
        recon = std::max(recon, max_abs_diff(schmidt_decompose(state, shape).reconstruct(), state));
    }
    for (int i = 0; i < cases; ++i) {
        const std::size_t d = 2 + static_cast<std::size_t>(i % 2);
        const std::size_t n = d + static_cast<std::size_t>(rng() % (7 - d));
        const auto spectrum = i % 3 == 0 ? SchmidtSpectrum::uniform(n)
                                         : qtel::testing::random_spectrum(n, 1.0 / static_cast<double>(d), rng);
        Protocol p;
        try {
            p = synthesize(spectrum, d);
        } catch (const PhaseFactorsNotFound&) {
            p = synthesize(SchmidtSpectrum::uniform(d), d);
        }
        const std::size_t dn = p.table.d() * p.table.n();
        ComplexMat sum(dn, dn);
        for (const auto& m : p.basis.states) sum += ComplexMat::outer(m, m);
        complete = std::max(complete, max_abs_diff(sum, ComplexMat::identity(dn)));
        for (const auto& u : p.unitaries.unitaries) unitary = std::max(unitary, unitarity_defect(u));

        const auto& spec = p.table.n() == n ? spectrum : SchmidtSpectrum::uniform(d);
        const ComplexVec x = random_vector(d, rng), y = random_vector(d, rng);
        const Complex alpha(g(rng), g(rng)), beta(g(rng), g(rng));
        const std::size_t j = rng() % p.table.outcomes();
        linear = std::max(linear, max_abs_diff(corrected_branch(alpha * x + beta * y, spec, p.basis, p.unitaries, j),
                                               alpha * corrected_branch(x, spec, p.basis, p.unitaries, j) +
                                                   beta * corrected_branch(y, spec, p.basis, p.unitaries, j)));
    }
    c.expect(bilinear < 1e-10, "bilinearity " + fmt(bilinear));
    c.expect(recon < 1e-10, "reconstruction " + fmt(recon));
    c.expect(complete < 1e-10, "completeness " + fmt(complete));
    c.expect(unitary < 1e-10, "unitarity " + fmt(unitary));
    c.expect(linear < 1e-10, "linearity " + fmt(linear));
    return std::to_string(cases) + " cases each; worst: bilinear " + fmt(bilinear) + ", recon " + fmt(recon) +
           ", completeness " + fmt(complete) + ", unitarity " + fmt(unitary) + ", linearity " + fmt(linear);
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "golden example d=2 n=3", 1.0, golden_example},
        {2, "standard protocol recovery d=n=2", 0.0, standard_recovery},
        {3, "feasibility gate both directions", 30.0, feasibility_gate},
        {4, "classical communication accounting", 0.0, ccc_accounting},
        {5, "residual entanglement", 0.0, residual_entanglement},
        {6, "concentration bounds", 0.0, concentration},
        {7, "property suite", 60.0, property_suite},
    };
    int failed = 0;
    for (const auto& crit : criteria) {
        Checks checks;
        std::string detail;
        const auto start = std::chrono::steady_clock::now();
        try {
            detail = crit.body(checks);
        } catch (const std::exception& e) {
            checks.expect(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (crit.time_limit_s > 0) checks.expect(secs < crit.time_limit_s, "runtime over " + fmt(crit.time_limit_s) + " s");
        const bool ok = checks.ok();
        failed += ok ? 0 : 1;
        std::printf("%s criterion %d: %s [%.3f s] %s; %s\n", ok ? "PASS" : "FAIL", crit.id, crit.name.c_str(), secs,
                    detail.c_str(), checks.summary().c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
