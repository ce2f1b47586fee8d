#include "qtel/sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "qtel/error.hpp"

namespace qtel {

InputQudit::InputQudit(ComplexVec amps) : amps_(std::move(amps)) {
    if (amps_.dim() == 0) throw InvalidInput("input qudit has no amplitudes");
    if (!amps_.is_normalized()) {
        throw InvalidInput("input qudit has squared norm " + std::to_string(amps_.norm_squared()) + ", expected 1");
    }
}

InputQudit random_qudit(std::size_t d, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexVec v(d);
    for (std::size_t i = 0; i < d; ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        v[i] = Complex(re, im);
    }
    return InputQudit(v.normalized());
}

ComplexVec apply_local(const ComplexVec& state, std::span<const std::size_t> dims, std::size_t first,
                       std::size_t count, const ComplexMat& op) {
    if (first + count > dims.size()) throw DimensionMismatch("operator block exceeds the subsystem list");
    const auto product = [](auto b, auto e) { return std::accumulate(b, e, std::size_t{1}, std::multiplies<>()); };
    const std::size_t outer = product(dims.begin(), dims.begin() + static_cast<std::ptrdiff_t>(first));
    const std::size_t block =
        product(dims.begin() + static_cast<std::ptrdiff_t>(first), dims.begin() + static_cast<std::ptrdiff_t>(first + count));
    const std::size_t inner_dim = product(dims.begin() + static_cast<std::ptrdiff_t>(first + count), dims.end());
    if (outer * block * inner_dim != state.dim()) throw DimensionMismatch("state dim does not match subsystem dims");
    if (op.rows() != block || op.cols() != block) throw DimensionMismatch("operator size does not match block dim");

    ComplexVec out(state.dim());
    for (std::size_t a = 0; a < outer; ++a) {
        for (std::size_t r = 0; r < block; ++r) {
            for (std::size_t c = 0; c < block; ++c) {
                const Complex w = op(r, c);
                if (w == Complex{}) continue;
                const std::size_t dst = (a * block + r) * inner_dim;
                const std::size_t src = (a * block + c) * inner_dim;
                for (std::size_t z = 0; z < inner_dim; ++z) out[dst + z] += w * state[src + z];
            }
        }
    }
    return out;
}

namespace {

void check_consistent(const InputQudit& psi, const SchmidtSpectrum& spectrum, const ProtocolTable& table,
                      const MeasurementBasis& basis, const BobUnitarySet& unitaries) {
    const std::size_t d = table.d();
    const std::size_t n = table.n();
    if (psi.dim() != d) throw DimensionMismatch("input qudit dim " + std::to_string(psi.dim()) + " != table d " + std::to_string(d));
    if (spectrum.size() != n) throw DimensionMismatch("spectrum size differs from table n");
    if (basis.states.size() != table.outcomes() || unitaries.unitaries.size() != table.outcomes()) {
        throw DimensionMismatch("basis or unitary count differs from the outcome count");
    }
    for (const auto& m : basis.states)
        if (m.dim() != d * n) throw DimensionMismatch("measurement state has the wrong dimension");
    for (const auto& u : unitaries.unitaries)
        if (u.rows() != n || u.cols() != n) throw DimensionMismatch("Bob unitary has the wrong size");
}

ComplexVec embed(const ComplexVec& psi, std::size_t n) {
    ComplexVec out(n);
    for (std::size_t m = 0; m < psi.dim(); ++m) out[m] = psi[m];
    return out;
}

void finish(SimulationTrace& trace) {
    const double uniform = 1.0 / static_cast<double>(trace.outcomes.size());
    trace.classical_bits = std::log2(static_cast<double>(trace.outcomes.size()));
    for (const auto& o : trace.outcomes) {
        trace.total_probability += o.probability;
        trace.min_fidelity = std::min(trace.min_fidelity, o.fidelity);
        trace.max_probability_deviation = std::max(trace.max_probability_deviation, std::abs(o.probability - uniform));
        trace.max_residual_schmidt = std::max(trace.max_residual_schmidt, o.residual_schmidt);
    }
}

// Shared core: `dims` lists the registers, the measured pair occupies
// registers 0 and 1, Bob's corrected register is `bob_register`, and
// `to_cut` reorders the final state so that Alice's registers come first.
struct Layout {
    std::vector<std::size_t> dims;
    std::size_t bob_register;
    std::vector<std::size_t> to_cut;
    std::size_t alice_dim;
    std::size_t bob_dim;
};

SimulationTrace simulate(const ComplexVec& initial, const ComplexVec& psi, const Layout& layout,
                         const MeasurementBasis& basis, const BobUnitarySet& unitaries,
                         const std::function<ComplexVec(const ComplexVec&, const ComplexVec&)>& expected_of) {
    SimulationTrace trace;
    trace.outcomes.reserve(basis.states.size());
    for (std::size_t j = 0; j < basis.states.size(); ++j) {
        const ComplexVec& mj = basis.states[j];
        const ComplexVec projected = apply_local(initial, layout.dims, 0, 2, ComplexMat::outer(mj, mj));

        OutcomeRecord rec;
        rec.j = j;
        rec.probability = projected.norm_squared();
        rec.normalization = rec.probability;
        rec.alice_dim = layout.alice_dim;
        rec.bob_dim = layout.bob_dim;
        if (rec.probability <= 0.0) {
            trace.outcomes.push_back(std::move(rec));
            continue;
        }
        rec.post_measurement = projected.normalized();
        rec.corrected =
            apply_local(rec.post_measurement, layout.dims, layout.bob_register, 1, unitaries.unitaries[j].adjoint());
        const ComplexVec expected = expected_of(mj, psi);
        rec.fidelity = std::norm(inner(expected, rec.corrected));
        rec.corrected = permute_subsystems(rec.corrected, layout.dims, layout.to_cut);
        rec.residual_schmidt = residual_schmidt(rec);
        trace.outcomes.push_back(std::move(rec));
    }
    finish(trace);
    return trace;
}

}  // namespace

SimulationTrace run_protocol(const InputQudit& psi, const SchmidtSpectrum& spectrum, const ProtocolTable& table,
                             const MeasurementBasis& basis, const BobUnitarySet& unitaries) {
    check_consistent(psi, spectrum, table, basis, unitaries);
    const std::size_t d = table.d();
    const std::size_t n = table.n();
    const ComplexVec initial = tensor(psi.amps(), spectrum.resource_state());
    const Layout layout{{d, n, n}, 2, {0, 1, 2}, d * n, n};
    return simulate(initial, psi.amps(), layout, basis, unitaries, [n](const ComplexVec& mj, const ComplexVec& a) {
        return tensor(mj, embed(a, n));
    });
}

SimulationTrace run_protocol(const InputQudit& psi, const SchmidtSpectrum& spectrum, const Protocol& protocol) {
    return run_protocol(psi, spectrum, protocol.table, protocol.basis, protocol.unitaries);
}

ComplexVec corrected_branch(const ComplexVec& psi, const SchmidtSpectrum& spectrum, const MeasurementBasis& basis,
                            const BobUnitarySet& unitaries, std::size_t j) {
    const std::size_t n = spectrum.size();
    const std::size_t d = psi.dim();
    if (j >= basis.states.size()) throw DimensionMismatch("outcome index out of range");
    const std::array<std::size_t, 3> dims{d, n, n};
    const ComplexVec initial = tensor(psi, spectrum.resource_state());
    const ComplexVec& mj = basis.states[j];
    const ComplexVec projected = apply_local(initial, dims, 0, 2, ComplexMat::outer(mj, mj));
    return apply_local(projected, dims, 2, 1, unitaries.unitaries[j].adjoint());
}

SimulationTrace run_with_spectator(const InputQudit& psi, const SchmidtSpectrum& spectrum, const Protocol& protocol,
                                   const ComplexVec& spectator, std::size_t spectator_dim) {
    check_consistent(psi, spectrum, protocol.table, protocol.basis, protocol.unitaries);
    if (spectator.dim() != spectator_dim * spectator_dim) throw DimensionMismatch("spectator state has the wrong dim");
    const std::size_t d = protocol.table.d();
    const std::size_t n = protocol.table.n();
    const std::size_t e = spectator_dim;
    // Registers: 1, 2a, 3a, 2b, 3b. Alice owns 1, 2a, 2b.
    const ComplexVec initial = tensor(tensor(psi.amps(), spectrum.resource_state()), spectator);
    const Layout layout{{d, n, n, e, e}, 2, {0, 1, 3, 2, 4}, d * n * e, n * e};
    return simulate(initial, psi.amps(), layout, protocol.basis, protocol.unitaries,
                    [&](const ComplexVec& mj, const ComplexVec& a) { return tensor(tensor(mj, embed(a, n)), spectator); });
}

std::size_t residual_schmidt(const OutcomeRecord& record) {
    if (record.corrected.dim() == 0) return 0;
    return schmidt_number(record.corrected, BipartiteShape{record.alice_dim, record.bob_dim});
}

SweepReport random_input_sweep(const SchmidtSpectrum& spectrum, const Protocol& protocol, std::size_t trials,
                               std::uint64_t seed) {
    if (trials == 0) throw InvalidInput("sweep needs at least one trial");
    std::mt19937_64 rng(seed);
    SweepReport report;
    report.trials = trials;
    report.outcomes = protocol.table.outcomes();
    for (std::size_t t = 0; t < trials; ++t) {
        const InputQudit psi = random_qudit(protocol.table.d(), rng);
        const SimulationTrace trace = run_protocol(psi, spectrum, protocol);
        report.min_fidelity = std::min(report.min_fidelity, trace.min_fidelity);
        report.max_fidelity_deviation = std::max(report.max_fidelity_deviation, 1.0 - trace.min_fidelity);
        report.max_probability_deviation = std::max(report.max_probability_deviation, trace.max_probability_deviation);
        report.max_total_probability_deviation =
            std::max(report.max_total_probability_deviation, std::abs(trace.total_probability - 1.0));
        report.max_residual_schmidt = std::max(report.max_residual_schmidt, trace.max_residual_schmidt);
        report.classical_bits = trace.classical_bits;
    }
    return report;
}

SweepReport random_input_sweep(const SchmidtSpectrum& spectrum, std::size_t d, std::size_t trials, std::uint64_t seed) {
    return random_input_sweep(spectrum, synthesize(spectrum, d), trials, seed);
}

}  // namespace qtel
