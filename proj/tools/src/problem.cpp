#include "qtel/cli/problem.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qtel/error.hpp"

namespace qtel::cli {

namespace {

std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

// Strict decimal parse: the whole token must be consumed.
std::optional<double> parse_decimal(const std::string& token) {
    if (token.empty()) return std::nullopt;
    std::size_t used = 0;
    try {
        const double v = std::stod(token, &used);
        if (used != token.size() || !std::isfinite(v)) return std::nullopt;
        return v;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

const Json& require(const Json& doc, const char* field) {
    if (!doc.contains(field)) throw ParseError(std::string("missing field '") + field + "'");
    return doc.at(field);
}

std::uint64_t as_unsigned(const Json& v, const std::string& field) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        throw ParseError("field '" + field + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

}  // namespace

std::vector<std::string> split_spectrum(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto end = comma == std::string_view::npos ? text.size() : comma;
        out.push_back(trim(text.substr(start, end - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

SchmidtSpectrum parse_spectrum(const std::vector<std::string>& tokens) {
    if (tokens.empty()) throw ParseError("field 'spectrum' is empty");
    std::vector<Rational> exact;
    bool all_exact = true;
    std::vector<double> floats;
    for (std::size_t k = 0; k < tokens.size(); ++k) {
        const auto& tok = tokens[k];
        if (auto r = parse_rational(tok)) {
            exact.push_back(*r);
            floats.push_back(to_double(*r));
            continue;
        }
        all_exact = false;
        auto v = parse_decimal(tok);
        if (!v) throw ParseError("spectrum[" + std::to_string(k) + "]: '" + tok + "' is not a number or num/den rational");
        floats.push_back(*v);
    }
    for (std::size_t k = 0; k < floats.size(); ++k) {
        if (!(floats[k] > 0.0) || (all_exact && exact[k] <= 0)) {
            throw InputError("spectrum[" + std::to_string(k) + "] must be a positive probability");
        }
    }
    if (all_exact) {
        Rational sum = 0;
        for (const auto& r : exact) sum += r;
        if (sum != 1) throw InputError("spectrum sums to " + to_string(sum) + ", not exactly 1");
        return SchmidtSpectrum::from_rationals(std::move(exact));
    }
    double sum = 0.0;
    for (double p : floats) sum += p;
    if (std::abs(sum - 1.0) > kDecimalSumTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "spectrum sums to " << sum << ", not 1 within " << kDecimalSumTolerance;
        throw InputError(msg.str());
    }
    for (double& p : floats) p /= sum;
    return SchmidtSpectrum::from_probs(std::move(floats));
}

ProblemSpec problem_from_json(const Json& doc) {
    if (!doc.is_object()) throw ParseError("problem document must be a JSON object");
    ProblemSpec p;

    const Json& d = require(doc, "d");
    p.d = static_cast<std::size_t>(as_unsigned(d, "d"));

    const Json& spec = require(doc, "spectrum");
    if (spec.is_string()) {
        p.spectrum = split_spectrum(spec.get<std::string>());
    } else if (spec.is_array()) {
        for (std::size_t k = 0; k < spec.size(); ++k) {
            const Json& e = spec[k];
            if (e.is_string()) {
                p.spectrum.push_back(trim(e.get<std::string>()));
            } else if (e.is_number()) {
                p.spectrum.push_back(e.dump());
            } else {
                throw ParseError("spectrum[" + std::to_string(k) + "] must be a number or a string");
            }
        }
    } else {
        throw ParseError("field 'spectrum' must be an array or a comma-separated string");
    }

    if (doc.contains("inputState")) {
        const Json& st = doc.at("inputState");
        if (!st.is_array()) throw ParseError("field 'inputState' must be an array of [re, im] pairs");
        std::vector<Complex> amps;
        for (std::size_t i = 0; i < st.size(); ++i) {
            const Json& pair = st[i];
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
                throw ParseError("inputState[" + std::to_string(i) + "] must be a [re, im] pair of numbers");
            }
            amps.emplace_back(pair[0].get<double>(), pair[1].get<double>());
        }
        p.input_state = std::move(amps);
    }
    if (doc.contains("seed")) p.seed = as_unsigned(doc.at("seed"), "seed");
    if (doc.contains("trials")) p.trials = static_cast<std::size_t>(as_unsigned(doc.at("trials"), "trials"));
    return p;
}

Json to_json(const ProblemSpec& problem) {
    Json doc;
    doc["d"] = problem.d;
    doc["spectrum"] = problem.spectrum;
    if (problem.input_state) {
        Json amps = Json::array();
        for (const auto& z : *problem.input_state) amps.push_back({z.real(), z.imag()});
        doc["inputState"] = std::move(amps);
    }
    if (problem.seed) doc["seed"] = *problem.seed;
    if (problem.trials) doc["trials"] = *problem.trials;
    return doc;
}

ProblemSpec parse_problem_text(std::string_view text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("problem file is not valid JSON: ") + e.what());
    }
    return problem_from_json(doc);
}

ProblemSpec load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open problem file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_problem_text(buf.str());
}

ValidatedProblem validate(const ProblemSpec& problem) {
    if (problem.d < 2) throw InputError("field 'd' must be at least 2");
    ValidatedProblem out{problem.d, parse_spectrum(problem.spectrum), std::nullopt};
    if (problem.input_state) {
        ComplexVec amps(*problem.input_state);
        if (amps.dim() != problem.d) {
            throw InputError("inputState has " + std::to_string(amps.dim()) + " amplitudes, expected d = " +
                             std::to_string(problem.d));
        }
        if (std::abs(amps.norm_squared() - 1.0) > kDecimalSumTolerance) throw InputError("inputState is not normalized");
        out.input_state = amps.normalized();
    }
    if (problem.trials && *problem.trials == 0) throw InputError("field 'trials' must be at least 1");
    return out;
}

}  // namespace qtel::cli
