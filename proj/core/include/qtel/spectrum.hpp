#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qtel/linalg.hpp"

namespace qtel {

using Rational = boost::multiprecision::cpp_rational;

// Parses "num/den", or an integer. Returns nullopt for anything else
// (decimals included).
std::optional<Rational> parse_rational(std::string_view text);
std::string to_string(const Rational& r);
double to_double(const Rational& r);

inline constexpr double kSpectrumSumTolerance = 1e-12;

// Schmidt probabilities p_k of a resource state, in the caller's order.
// Index k labels the shared basis pair |k>|k>, so order is significant.
class SchmidtSpectrum {
public:
    // Every p_k > 0 and |sum - 1| <= kSpectrumSumTolerance, else InvalidInput.
    static SchmidtSpectrum from_probs(std::vector<double> probs);
    // Exact path: every p_k > 0 and the sum is exactly 1.
    static SchmidtSpectrum from_rationals(std::vector<Rational> probs);
    static SchmidtSpectrum uniform(std::size_t n);

    std::size_t size() const noexcept { return probs_.size(); }
    double operator[](std::size_t k) const { return probs_[k]; }
    std::span<const double> probs() const noexcept { return probs_; }

    bool is_exact() const noexcept { return exact_.has_value(); }
    const std::optional<std::vector<Rational>>& exact() const noexcept { return exact_; }

    double max() const;
    std::size_t argmax() const;
    bool is_uniform(double tol = kSpectrumSumTolerance) const;

    // sum_k sqrt(p_k) |k>|k>, an n*n dimensional vector.
    ComplexVec resource_state() const;

    bool operator==(const SchmidtSpectrum&) const = default;

private:
    SchmidtSpectrum(std::vector<double> probs, std::optional<std::vector<Rational>> exact)
        : probs_(std::move(probs)), exact_(std::move(exact)) {}

    std::vector<double> probs_;
    std::optional<std::vector<Rational>> exact_;
};

// True iff p_max <= 1/d, compared exactly on the rational path and with
// an absolute slack of 1e-12 otherwise.
bool max_prob_within(const SchmidtSpectrum& spectrum, std::size_t d);

}  // namespace qtel
