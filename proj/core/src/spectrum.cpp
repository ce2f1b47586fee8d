#include "qtel/spectrum.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "qtel/error.hpp"

namespace qtel {

namespace {

bool is_integer_literal(std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s.front() == '-' || s.front() == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
    using boost::multiprecision::cpp_int;
    text = trim(text);
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        if (!is_integer_literal(text)) return std::nullopt;
        std::string digits(text.front() == '+' ? text.substr(1) : text);
        return Rational(cpp_int(digits));
    }
    const auto num = trim(text.substr(0, slash));
    const auto den = trim(text.substr(slash + 1));
    if (!is_integer_literal(num) || !is_integer_literal(den)) return std::nullopt;
    std::string ns(num.front() == '+' ? num.substr(1) : num);
    std::string ds(den.front() == '+' ? den.substr(1) : den);
    cpp_int d(ds);
    if (d == 0) return std::nullopt;
    return Rational(cpp_int(ns), d);
}

std::string to_string(const Rational& r) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

SchmidtSpectrum SchmidtSpectrum::from_probs(std::vector<double> probs) {
    if (probs.empty()) throw InvalidInput("spectrum is empty");
    double sum = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (!std::isfinite(probs[k]) || probs[k] <= 0.0) {
            throw InvalidInput("spectrum entry " + std::to_string(k) + " is not a positive probability");
        }
        sum += probs[k];
    }
    if (std::abs(sum - 1.0) > kSpectrumSumTolerance) {
        throw InvalidInput("spectrum sums to " + std::to_string(sum) + ", not 1");
    }
    return SchmidtSpectrum(std::move(probs), std::nullopt);
}

SchmidtSpectrum SchmidtSpectrum::from_rationals(std::vector<Rational> probs) {
    if (probs.empty()) throw InvalidInput("spectrum is empty");
    Rational sum = 0;
    std::vector<double> floats;
    floats.reserve(probs.size());
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (probs[k] <= 0) {
            throw InvalidInput("spectrum entry " + std::to_string(k) + " is not a positive probability");
        }
        sum += probs[k];
        floats.push_back(to_double(probs[k]));
    }
    if (sum != 1) throw InvalidInput("rational spectrum sums to " + to_string(sum) + ", not 1");
    return SchmidtSpectrum(std::move(floats), std::move(probs));
}

SchmidtSpectrum SchmidtSpectrum::uniform(std::size_t n) {
    if (n == 0) throw InvalidInput("uniform spectrum needs n >= 1");
    return from_rationals(std::vector<Rational>(n, Rational(1, static_cast<long>(n))));
}

double SchmidtSpectrum::max() const { return probs_[argmax()]; }

std::size_t SchmidtSpectrum::argmax() const {
    return static_cast<std::size_t>(std::max_element(probs_.begin(), probs_.end()) - probs_.begin());
}

bool SchmidtSpectrum::is_uniform(double tol) const {
    if (exact_) {
        return std::all_of(exact_->begin(), exact_->end(), [&](const Rational& p) { return p == exact_->front(); });
    }
    const double target = 1.0 / static_cast<double>(probs_.size());
    return std::all_of(probs_.begin(), probs_.end(), [&](double p) { return std::abs(p - target) <= tol; });
}

ComplexVec SchmidtSpectrum::resource_state() const {
    const std::size_t n = probs_.size();
    ComplexVec chi(n * n);
    for (std::size_t k = 0; k < n; ++k) chi[k * n + k] = std::sqrt(probs_[k]);
    return chi;
}

bool max_prob_within(const SchmidtSpectrum& spectrum, std::size_t d) {
    if (d == 0) return false;
    if (spectrum.exact()) {
        const Rational bound(1, static_cast<long>(d));
        return std::all_of(spectrum.exact()->begin(), spectrum.exact()->end(),
                           [&](const Rational& p) { return p <= bound; });
    }
    return spectrum.max() <= 1.0 / static_cast<double>(d) + 1e-12;
}

}  // namespace qtel
