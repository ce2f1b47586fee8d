#include "qtel/cli/report.hpp"

#include <cmath>

namespace qtel::cli {

namespace {

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from(const Json& j) {
    if (!j.is_array() || j.size() != 2) throw ParseError("complex value must be a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

Rational rational_from(const Json& j, const char* what) {
    auto r = parse_rational(j.get<std::string>());
    if (!r) throw ParseError(std::string("malformed rational in ") + what);
    return *r;
}

Json bits_json(const Bits& b) {
    Json j;
    j["value"] = b.value;
    if (b.exact) {
        j["exact"] = {{"coefficient", to_string(b.exact->coefficient)}, {"argument", to_string(b.exact->argument)}};
        j["symbolic"] = b.exact->to_string();
    }
    return j;
}

Bits bits_from(const Json& j) {
    Bits b;
    b.value = j.at("value").get<double>();
    if (j.contains("exact")) {
        const Json& e = j.at("exact");
        b.exact = LogTerm{rational_from(e.at("coefficient"), "exact.coefficient"),
                          rational_from(e.at("argument"), "exact.argument")};
    }
    return b;
}

CccAssumption assumption_from(const std::string& s) {
    for (auto a : {CccAssumption::ZeroResidual, CccAssumption::DAboveHalfN, CccAssumption::ConcentrateAndTeleport,
                   CccAssumption::StandardFloor}) {
        if (to_string(a) == s) return a;
    }
    throw ParseError("unknown CCC assumption '" + s + "'");
}

Construction construction_from(const std::string& s) {
    for (auto c : {Construction::GeneralFormula, Construction::D2Formula, Construction::Explicit}) {
        if (to_string(c) == s) return c;
    }
    throw ParseError("unknown table construction '" + s + "'");
}

Json ccc_json(const std::optional<CccBound>& c) {
    if (!c) return nullptr;
    return {{"bits", bits_json(c->bits)}, {"assumption", std::string(to_string(c->assumption))}, {"tight", c->tight}};
}

std::optional<CccBound> ccc_from(const Json& j) {
    if (j.is_null()) return std::nullopt;
    return CccBound{bits_from(j.at("bits")), assumption_from(j.at("assumption").get<std::string>()),
                    j.at("tight").get<bool>()};
}

Json concentration_json(const ConcentrationBounds& c) {
    return {{"copies", c.copies},         {"bells", c.bells},           {"feasible", c.feasible},
            {"mMax", c.max_bells},        {"C1LowerBound", c.c1_lower_bound}, {"C1Minimum", c.c1_minimum},
            {"C2", c.c2}};
}

ConcentrationBounds concentration_from(const Json& j) {
    ConcentrationBounds c;
    c.copies = j.at("copies").get<std::size_t>();
    c.bells = j.at("bells").get<std::size_t>();
    c.feasible = j.at("feasible").get<bool>();
    c.max_bells = j.at("mMax").get<std::size_t>();
    c.c1_lower_bound = j.at("C1LowerBound").get<double>();
    c.c1_minimum = j.at("C1Minimum").get<double>();
    c.c2 = j.at("C2").get<std::size_t>();
    return c;
}

Json bounds_json(const BoundsReport& b) {
    Json j;
    j["d"] = b.d;
    j["n"] = b.n;
    j["Et"] = bits_json(b.et);
    j["ESch"] = bits_json(b.esch);
    j["teleportFeasible"] = b.teleport_feasible;
    j["cccZeroResidual"] = ccc_json(b.ccc_zero_residual);
    j["cccUnconditional"] = ccc_json(b.ccc_unconditional);
    j["cccConcentrateAndTeleport"] = ccc_json(b.ccc_concentrate_and_teleport);
    if (b.residual) {
        j["residualCap"] = {{"raw", bits_json(b.residual->raw)},
                            {"integerConstrained", bits_json(b.residual->integer_constrained)}};
    } else {
        j["residualCap"] = nullptr;
    }
    j["concentration"] = concentration_json(b.concentration);
    return j;
}

BoundsReport bounds_from(const Json& j) {
    BoundsReport b;
    b.d = j.at("d").get<std::size_t>();
    b.n = j.at("n").get<std::size_t>();
    b.et = bits_from(j.at("Et"));
    b.esch = bits_from(j.at("ESch"));
    b.teleport_feasible = j.at("teleportFeasible").get<bool>();
    b.ccc_zero_residual = ccc_from(j.at("cccZeroResidual"));
    b.ccc_unconditional = ccc_from(j.at("cccUnconditional"));
    b.ccc_concentrate_and_teleport = ccc_from(j.at("cccConcentrateAndTeleport"));
    if (!j.at("residualCap").is_null()) {
        const Json& r = j.at("residualCap");
        b.residual = ResidualCap{bits_from(r.at("raw")), bits_from(r.at("integerConstrained"))};
    }
    b.concentration = concentration_from(j.at("concentration"));
    return b;
}

Json phases_json(const PhaseSection& p) {
    Json theta = Json::array();
    for (std::size_t m = 0; m < p.phases.d(); ++m) {
        Json row = Json::array();
        for (std::size_t k = 0; k < p.phases.n(); ++k) row.push_back(p.phases(m, k));
        theta.push_back(std::move(row));
    }
    return {{"method", p.method}, {"d", p.phases.d()}, {"n", p.phases.n()}, {"theta", std::move(theta)},
            {"residual", p.residual}};
}

PhaseSection phases_from(const Json& j) {
    PhaseSection p;
    p.method = j.at("method").get<std::string>();
    const auto d = j.at("d").get<std::size_t>();
    const auto n = j.at("n").get<std::size_t>();
    const Json& theta = j.at("theta");
    if (!theta.is_array() || theta.size() != d) throw ParseError("phases.theta must have d rows");
    p.phases = PhaseMatrix(d, n);
    for (std::size_t m = 0; m < d; ++m) {
        if (!theta[m].is_array() || theta[m].size() != n) throw ParseError("phases.theta rows must have n entries");
        for (std::size_t k = 0; k < n; ++k) p.phases(m, k) = theta[m][k].get<double>();
    }
    p.residual = j.at("residual").get<double>();
    return p;
}

Json table_json(const ProtocolTable& t) {
    Json outcomes = Json::array();
    for (std::size_t j = 0; j < t.outcomes(); ++j) {
        Json rows = Json::array();
        for (std::size_t m = 0; m < t.d(); ++m) {
            Json row = Json::array();
            for (std::size_t k = 0; k < t.n(); ++k) row.push_back(complex_json(t(j, m, k)));
            rows.push_back(std::move(row));
        }
        outcomes.push_back(std::move(rows));
    }
    return outcomes;
}

ProtocolTable table_from(const Json& j, std::size_t d, std::size_t n, Construction construction) {
    ProtocolTable t(d, n, construction);
    if (!j.is_array() || j.size() != t.outcomes()) throw ParseError("protocol.table must have n*d outcomes");
    for (std::size_t o = 0; o < t.outcomes(); ++o) {
        if (!j[o].is_array() || j[o].size() != d) throw ParseError("protocol.table entries must have d rows");
        for (std::size_t m = 0; m < d; ++m) {
            if (!j[o][m].is_array() || j[o][m].size() != n) throw ParseError("protocol.table rows must have n entries");
            for (std::size_t k = 0; k < n; ++k) t(o, m, k) = complex_from(j[o][m][k]);
        }
    }
    return t;
}

Json protocol_json(const ProtocolSection& p) {
    Json j;
    j["construction"] = p.construction;
    j["d"] = p.d;
    j["n"] = p.n;
    j["outcomes"] = p.outcomes;
    j["tableElided"] = !p.table.has_value();
    if (p.table) j["table"] = table_json(*p.table);
    j["conditions"] = {{"orthonormalityResidual", p.conditions.orthonormality},
                       {"unitarityResidual", p.conditions.unitarity}};
    return j;
}

ProtocolSection protocol_from(const Json& j) {
    ProtocolSection p;
    p.construction = j.at("construction").get<std::string>();
    p.d = j.at("d").get<std::size_t>();
    p.n = j.at("n").get<std::size_t>();
    p.outcomes = j.at("outcomes").get<std::size_t>();
    if (j.contains("table")) p.table = table_from(j.at("table"), p.d, p.n, construction_from(p.construction));
    const Json& c = j.at("conditions");
    p.conditions.orthonormality = c.at("orthonormalityResidual").get<double>();
    p.conditions.unitarity = c.at("unitarityResidual").get<double>();
    return p;
}

Json simulation_json(const SimulationSection& s) {
    Json j;
    j["trials"] = s.trials;
    j["seed"] = s.seed;
    j["sweep"] = {{"trials", s.sweep.trials},
                  {"outcomes", s.sweep.outcomes},
                  {"minFidelity", s.sweep.min_fidelity},
                  {"maxFidelityDeviation", s.sweep.max_fidelity_deviation},
                  {"maxProbabilityDeviation", s.sweep.max_probability_deviation},
                  {"maxTotalProbabilityDeviation", s.sweep.max_total_probability_deviation},
                  {"maxResidualSchmidt", s.sweep.max_residual_schmidt},
                  {"classicalBits", s.sweep.classical_bits}};
    j["probabilities"] = s.probabilities;
    j["fidelities"] = s.fidelities;
    j["residualSchmidt"] = s.residual_schmidt;
    // log2 n_s, derived; not read back.
    Json bits = Json::array();
    for (std::size_t ns : s.residual_schmidt) bits.push_back(std::log2(static_cast<double>(ns)));
    j["residualEntanglementBits"] = std::move(bits);
    j["minFidelity"] = s.min_fidelity;
    j["classicalBits"] = s.classical_bits;
    return j;
}

SimulationSection simulation_from(const Json& j) {
    SimulationSection s;
    s.trials = j.at("trials").get<std::size_t>();
    s.seed = j.at("seed").get<std::uint64_t>();
    const Json& w = j.at("sweep");
    s.sweep.trials = w.at("trials").get<std::size_t>();
    s.sweep.outcomes = w.at("outcomes").get<std::size_t>();
    s.sweep.min_fidelity = w.at("minFidelity").get<double>();
    s.sweep.max_fidelity_deviation = w.at("maxFidelityDeviation").get<double>();
    s.sweep.max_probability_deviation = w.at("maxProbabilityDeviation").get<double>();
    s.sweep.max_total_probability_deviation = w.at("maxTotalProbabilityDeviation").get<double>();
    s.sweep.max_residual_schmidt = w.at("maxResidualSchmidt").get<std::size_t>();
    s.sweep.classical_bits = w.at("classicalBits").get<double>();
    s.probabilities = j.at("probabilities").get<std::vector<double>>();
    s.fidelities = j.at("fidelities").get<std::vector<double>>();
    s.residual_schmidt = j.at("residualSchmidt").get<std::vector<std::size_t>>();
    s.min_fidelity = j.at("minFidelity").get<double>();
    s.classical_bits = j.at("classicalBits").get<double>();
    return s;
}

}  // namespace

Json to_json(const ReportDoc& doc) {
    Json j;
    j["toolVersion"] = doc.tool_version;
    j["command"] = doc.command;
    if (doc.problem) j["problem"] = to_json(*doc.problem);
    if (doc.phases) j["phases"] = phases_json(*doc.phases);
    if (doc.protocol) j["protocol"] = protocol_json(*doc.protocol);
    if (doc.simulation) j["simulation"] = simulation_json(*doc.simulation);
    if (doc.bounds) j["bounds"] = bounds_json(*doc.bounds);
    if (doc.concentration) {
        j["concentration"] = {{"spectrum", doc.concentration->spectrum},
                              {"Et", bits_json(doc.concentration->et)},
                              {"ESch", bits_json(doc.concentration->esch)},
                              {"bounds", concentration_json(doc.concentration->bounds)}};
    }
    j["tolerances"] = {{"orthonormality", doc.tolerances.orthonormality},
                       {"unitarity", doc.tolerances.unitarity},
                       {"fidelity", doc.tolerances.fidelity},
                       {"probability", doc.tolerances.probability},
                       {"phase", doc.tolerances.phase}};
    return j;
}

ReportDoc report_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("report must be a JSON object");
    try {
        ReportDoc doc;
        doc.tool_version = j.at("toolVersion").get<std::string>();
        doc.command = j.at("command").get<std::string>();
        if (j.contains("problem")) doc.problem = problem_from_json(j.at("problem"));
        if (j.contains("phases")) doc.phases = phases_from(j.at("phases"));
        if (j.contains("protocol")) doc.protocol = protocol_from(j.at("protocol"));
        if (j.contains("simulation")) doc.simulation = simulation_from(j.at("simulation"));
        if (j.contains("bounds")) doc.bounds = bounds_from(j.at("bounds"));
        if (j.contains("concentration")) {
            const Json& c = j.at("concentration");
            doc.concentration = ConcentrationSection{c.at("spectrum").get<std::vector<std::string>>(),
                                                     bits_from(c.at("Et")), bits_from(c.at("ESch")),
                                                     concentration_from(c.at("bounds"))};
        }
        const Json& t = j.at("tolerances");
        doc.tolerances.orthonormality = t.at("orthonormality").get<double>();
        doc.tolerances.unitarity = t.at("unitarity").get<double>();
        doc.tolerances.fidelity = t.at("fidelity").get<double>();
        doc.tolerances.probability = t.at("probability").get<double>();
        doc.tolerances.phase = t.at("phase").get<double>();
        return doc;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("malformed report: ") + e.what());
    }
}

std::string serialize(const ReportDoc& doc) { return to_json(doc).dump(2) + "\n"; }

ReportDoc parse_report(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("report is not valid JSON: ") + e.what());
    }
    return report_from_json(j);
}

}  // namespace qtel::cli
