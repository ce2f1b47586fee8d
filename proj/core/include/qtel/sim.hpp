#pragma once

// Statevector simulation of the teleportation protocol.
//
// Registers: system 1 holds the input qudit (dim d), system 2 is Alice's
// half of the resource (dim n), system 3 is Bob's half (dim n). The initial
// state |psi>_1 (x) |chi>_23 is projected onto each |M^(j)>_12, Bob applies
// u^(j)^dagger to system 3, and the result is compared with
// |M^(j)>_12 (x) |psi>_3. Every outcome is simulated; nothing is sampled.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "qtel/linalg.hpp"
#include "qtel/protocol.hpp"
#include "qtel/spectrum.hpp"

namespace qtel {

class InputQudit {
public:
    // Throws InvalidInput unless amps has unit norm within 1e-12.
    explicit InputQudit(ComplexVec amps);

    std::size_t dim() const noexcept { return amps_.dim(); }
    const ComplexVec& amps() const noexcept { return amps_; }

private:
    ComplexVec amps_;
};

// Complex Gaussian amplitudes, normalized: Haar distributed.
InputQudit random_qudit(std::size_t d, std::mt19937_64& rng);

struct OutcomeRecord {
    std::size_t j = 0;
    double probability = 0.0;     // ||P^(j)|I>||^2
    double normalization = 0.0;   // N^j, the squared norm removed on renormalizing
    ComplexVec post_measurement;  // P^(j)|I>, normalized
    ComplexVec corrected;         // after Bob's correction, normalized
    double fidelity = 0.0;        // |<expected|corrected>|^2
    std::size_t residual_schmidt = 0;
    std::size_t alice_dim = 0;    // dimension of Alice's side of `corrected`
    std::size_t bob_dim = 0;
};

struct SimulationTrace {
    std::vector<OutcomeRecord> outcomes;
    double total_probability = 0.0;
    double min_fidelity = 1.0;
    double max_probability_deviation = 0.0;  // max_j |probability - 1/s|
    std::size_t max_residual_schmidt = 0;
    double classical_bits = 0.0;             // log2 of the outcome count
};

// Applies `op` to the contiguous block of subsystems [first, first + count)
// of a composite state with subsystem dimensions `dims`.
ComplexVec apply_local(const ComplexVec& state, std::span<const std::size_t> dims, std::size_t first,
                       std::size_t count, const ComplexMat& op);

SimulationTrace run_protocol(const InputQudit& psi, const SchmidtSpectrum& spectrum, const ProtocolTable& table,
                             const MeasurementBasis& basis, const BobUnitarySet& unitaries);

SimulationTrace run_protocol(const InputQudit& psi, const SchmidtSpectrum& spectrum, const Protocol& protocol);

// Unnormalized (I_12 (x) u^(j)^dagger) P^(j) |psi>|chi>. Linear in psi.
ComplexVec corrected_branch(const ComplexVec& psi, const SchmidtSpectrum& spectrum, const MeasurementBasis& basis,
                            const BobUnitarySet& unitaries, std::size_t j);

// Runs the protocol on one resource pair while a second, untouched pair
// (`spectator`, a state on Alice's and Bob's extra registers, each of dim
// `spectator_dim`) sits alongside. Residual Schmidt numbers are measured
// across Alice's registers | Bob's registers, so any entanglement left in
// the spectator shows up.
SimulationTrace run_with_spectator(const InputQudit& psi, const SchmidtSpectrum& spectrum, const Protocol& protocol,
                                   const ComplexVec& spectator, std::size_t spectator_dim);

std::size_t residual_schmidt(const OutcomeRecord& record);

struct SweepReport {
    std::size_t trials = 0;
    std::size_t outcomes = 0;
    double min_fidelity = 1.0;
    double max_fidelity_deviation = 0.0;       // max 1 - fidelity
    double max_probability_deviation = 0.0;    // max |p_j - 1/s|
    double max_total_probability_deviation = 0.0;
    std::size_t max_residual_schmidt = 0;
    double classical_bits = 0.0;

    bool operator==(const SweepReport&) const = default;
};

SweepReport random_input_sweep(const SchmidtSpectrum& spectrum, const Protocol& protocol, std::size_t trials,
                               std::uint64_t seed);

// Synthesizes a protocol with SynthesisMethod::Auto, then sweeps.
SweepReport random_input_sweep(const SchmidtSpectrum& spectrum, std::size_t d, std::size_t trials, std::uint64_t seed);

}  // namespace qtel
