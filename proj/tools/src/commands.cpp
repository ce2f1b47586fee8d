#include "qtel/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "qtel/error.hpp"
#include "qtel/version.hpp"

namespace qtel::cli {

namespace {

std::string join(const std::vector<std::string>& lines, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i) out += sep;
        out += lines[i];
    }
    return out;
}

std::string sci(double v) {
    std::ostringstream s;
    s.precision(3);
    s << std::scientific << v;
    return s.str();
}

ReportDoc new_report(const char* command) {
    ReportDoc doc;
    doc.tool_version = kVersion;
    doc.command = command;
    return doc;
}

void add_protocol(ReportDoc& doc, const Protocol& protocol, bool emit_table) {
    doc.phases = PhaseSection{std::string(to_string(protocol.phases.method)), protocol.phases.phases,
                              protocol.phases.residual};
    ProtocolSection section;
    section.construction = std::string(to_string(protocol.table.construction()));
    section.d = protocol.table.d();
    section.n = protocol.table.n();
    section.outcomes = protocol.table.outcomes();
    if (emit_table || section.outcomes <= kTableElisionThreshold) section.table = protocol.table;
    section.conditions = protocol.conditions;
    doc.protocol = std::move(section);
}

SynthesisMethod method_for(const std::string& construction) {
    if (construction == to_string(Construction::D2Formula)) return SynthesisMethod::D2;
    if (construction == to_string(Construction::GeneralFormula)) return SynthesisMethod::General;
    throw ParseError("cannot re-synthesize a '" + construction + "' table");
}

void check_simulation(const SweepReport& sweep, const Tolerances& tol, std::vector<std::string>& violations) {
    if (sweep.max_fidelity_deviation > tol.fidelity) {
        violations.push_back("teleportation fidelity " + sci(sweep.min_fidelity) + " is below 1 - " + sci(tol.fidelity));
    }
    if (sweep.max_probability_deviation > tol.probability) {
        violations.push_back("outcome probabilities deviate from 1/s by " + sci(sweep.max_probability_deviation));
    }
    if (sweep.max_total_probability_deviation > tol.probability) {
        violations.push_back("outcome probabilities sum to 1 only within " + sci(sweep.max_total_probability_deviation));
    }
    if (sweep.max_residual_schmidt != 1) {
        violations.push_back("residual Schmidt number " + std::to_string(sweep.max_residual_schmidt) +
                             " across Alice|Bob, expected 1");
    }
}

}  // namespace

VerificationFailed::VerificationFailed(std::vector<std::string> violations)
    : std::runtime_error("verification failed: " + join(violations, "; ")), violations_(std::move(violations)) {}

ReportDoc cmd_bounds(const ProblemSpec& problem) {
    const ValidatedProblem v = validate(problem);
    ReportDoc doc = new_report("bounds");
    doc.problem = problem;
    doc.bounds = compute_bounds(v.spectrum, v.d);
    return doc;
}

ReportDoc cmd_synthesize(const ProblemSpec& problem, const SynthesizeOptions& options) {
    const ValidatedProblem v = validate(problem);
    if (options.method == SynthesisMethod::D2 && v.d != 2) throw InputError("--method d2 requires d = 2");
    const Protocol protocol = synthesize(v.spectrum, v.d, options.method);
    ReportDoc doc = new_report("synthesize");
    doc.problem = problem;
    add_protocol(doc, protocol, options.emit_table);
    return doc;
}

ReportDoc cmd_simulate(const ProblemSpec& problem, const SimulateOptions& options) {
    const ValidatedProblem v = validate(problem);
    if (options.method == SynthesisMethod::D2 && v.d != 2) throw InputError("--method d2 requires d = 2");
    const std::size_t trials = options.trials.value_or(problem.trials.value_or(kDefaultTrials));
    const std::uint64_t seed = options.seed.value_or(problem.seed.value_or(kDefaultSeed));
    if (trials == 0) throw InputError("--trials must be at least 1");

    const Protocol protocol = synthesize(v.spectrum, v.d, options.method);
    ReportDoc doc = new_report("simulate");
    doc.problem = problem;
    add_protocol(doc, protocol, options.emit_table);

    SimulationSection sim;
    sim.trials = trials;
    sim.seed = seed;
    sim.sweep = random_input_sweep(v.spectrum, protocol, trials, seed);

    std::mt19937_64 rng(seed);
    const InputQudit reference = v.input_state ? InputQudit(*v.input_state) : random_qudit(v.d, rng);
    const SimulationTrace trace = run_protocol(reference, v.spectrum, protocol);
    for (const auto& o : trace.outcomes) {
        sim.probabilities.push_back(o.probability);
        sim.fidelities.push_back(o.fidelity);
        sim.residual_schmidt.push_back(o.residual_schmidt);
    }
    sim.min_fidelity = std::min(sim.sweep.min_fidelity, trace.min_fidelity);
    sim.classical_bits = trace.classical_bits;
    doc.simulation = std::move(sim);
    return doc;
}

std::string cmd_verify(const ReportDoc& report) {
    if (!report.problem) throw ParseError("report has no 'problem' section to verify against");
    const ValidatedProblem v = validate(*report.problem);
    const Tolerances& tol = report.tolerances;
    std::vector<std::string> violations;

    Protocol protocol;
    if (report.protocol && report.protocol->table) {
        protocol.table = *report.protocol->table;
        if (protocol.table.d() != v.d || protocol.table.n() != v.spectrum.size()) {
            throw VerificationFailed({"table is " + std::to_string(protocol.table.d()) + "x" +
                                      std::to_string(protocol.table.n()) + " but the problem has d=" +
                                      std::to_string(v.d) + ", n=" + std::to_string(v.spectrum.size())});
        }
    } else if (report.protocol) {
        protocol = synthesize(v.spectrum, v.d, method_for(report.protocol->construction));
    } else {
        throw ParseError("report has no 'protocol' section to verify");
    }

    if (report.phases) {
        if (report.phases->phases.d() != v.d || report.phases->phases.n() != v.spectrum.size()) {
            violations.push_back("phase matrix shape does not match the problem");
        } else {
            const double r = phase_residual(v.spectrum, report.phases->phases);
            if (!(r < tol.phase)) violations.push_back("phase-factor residual " + sci(r) + " exceeds " + sci(tol.phase));
        }
    }

    const ConditionReport c = verify_conditions(protocol.table, v.spectrum);
    if (!(c.orthonormality < tol.orthonormality)) {
        violations.push_back("orthonormality residual " + sci(c.orthonormality) + " exceeds " + sci(tol.orthonormality));
    }
    if (!(c.unitarity < tol.unitarity)) {
        violations.push_back("unitarity residual " + sci(c.unitarity) + " exceeds " + sci(tol.unitarity));
    }

    double min_fidelity = 1.0;
    try {
        protocol.basis = measurement_basis(protocol.table);
        protocol.unitaries = bob_unitaries(protocol.table, v.spectrum);
        const std::size_t trials = report.simulation ? report.simulation->trials : kVerifyTrials;
        const std::uint64_t seed = report.simulation ? report.simulation->seed : kDefaultSeed;
        const SweepReport sweep = random_input_sweep(v.spectrum, protocol, trials, seed);
        check_simulation(sweep, tol, violations);
        min_fidelity = sweep.min_fidelity;
        if (v.input_state) {
            const SimulationTrace t = run_protocol(InputQudit(*v.input_state), v.spectrum, protocol);
            if (1.0 - t.min_fidelity > tol.fidelity) {
                violations.push_back("fidelity " + sci(t.min_fidelity) + " for the problem's inputState");
            }
            min_fidelity = std::min(min_fidelity, t.min_fidelity);
        }
    } catch (const DegenerateColumns& e) {
        violations.push_back(std::string("Bob's correction is not unitary: ") + e.what());
    }

    if (!violations.empty()) throw VerificationFailed(std::move(violations));
    std::ostringstream s;
    s.precision(17);
    s << "verified: " << protocol.table.outcomes() << " outcomes, orthonormality residual " << sci(c.orthonormality)
      << ", unitarity residual " << sci(c.unitarity) << ", min fidelity " << min_fidelity;
    return s.str();
}

ReportDoc cmd_concentrate(const std::string& spectrum, std::size_t copies, std::size_t bells) {
    if (copies == 0) throw InputError("--copies must be at least 1");
    const auto tokens = split_spectrum(spectrum);
    const SchmidtSpectrum s = parse_spectrum(tokens);
    ReportDoc doc = new_report("concentrate");
    doc.concentration =
        ConcentrationSection{tokens, entanglement_of_teleportation(s), schmidt_entanglement(s), concentration_bounds(s, copies, bells)};
    return doc;
}

namespace {

SynthesisMethod parse_method(const std::string& m) {
    if (m == "d2") return SynthesisMethod::D2;
    if (m == "general") return SynthesisMethod::General;
    return SynthesisMethod::Auto;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Synthesize, simulate and certify faithful qudit teleportation through partially entangled resources",
                 "qtel"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(kVersion));
    std::string out_path;
    app.add_option("--out", out_path, "Write the report here instead of stdout");

    std::string problem_path;
    std::string method = "auto";
    bool emit_table = false;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    std::string spectrum;
    std::size_t copies = 0;
    std::size_t bells = 0;
    const std::vector<std::string> methods{"auto", "d2", "general"};

    auto* bounds = app.add_subcommand("bounds", "Entanglement measures and CCC bounds for a problem");
    bounds->add_option("problem", problem_path, "Problem file (JSON)")->required();

    auto* synth = app.add_subcommand("synthesize", "Solve phase factors and build the protocol table");
    synth->add_option("problem", problem_path, "Problem file (JSON)")->required();
    synth->add_option("--method", method, "Table construction")->check(CLI::IsMember(methods));
    synth->add_flag("--emit-table", emit_table, "Always include the full table");

    auto* sim = app.add_subcommand("simulate", "Synthesize, then simulate every outcome over random inputs");
    sim->add_option("problem", problem_path, "Problem file (JSON)")->required();
    sim->add_option("--trials", trials, "Random input states (overrides the problem file)");
    sim->add_option("--seed", seed, "PRNG seed (overrides the problem file)");
    sim->add_option("--method", method, "Table construction")->check(CLI::IsMember(methods));
    sim->add_flag("--emit-table", emit_table, "Always include the full table");

    auto* verify = app.add_subcommand("verify", "Re-check a previously emitted report");
    verify->add_option("report", problem_path, "Report file (JSON)")->required();

    auto* conc = app.add_subcommand("concentrate", "Deterministic concentration feasibility and CCC bounds");
    conc->add_option("--spectrum", spectrum, "Comma-separated probabilities, decimals or num/den")->required();
    conc->add_option("--copies", copies, "Copies of the resource state")->required();
    conc->add_option("--bells", bells, "Bell pairs to produce")->required();

    std::vector<const char*> argv{"qtel"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitParse;
    }

    const auto emit = [&](const std::string& text) {
        if (out_path.empty()) {
            out << text;
            return;
        }
        std::ofstream file(out_path);
        if (!file) throw std::runtime_error("cannot write '" + out_path + "'");
        file << text;
    };

    try {
        if (bounds->parsed()) {
            emit(serialize(cmd_bounds(load_problem(problem_path))));
        } else if (synth->parsed()) {
            emit(serialize(cmd_synthesize(load_problem(problem_path), {parse_method(method), emit_table})));
        } else if (sim->parsed()) {
            emit(serialize(cmd_simulate(load_problem(problem_path), {parse_method(method), emit_table, trials, seed})));
        } else if (verify->parsed()) {
            emit(cmd_verify(parse_report(read_file(problem_path))) + "\n");
        } else if (conc->parsed()) {
            emit(serialize(cmd_concentrate(spectrum, copies, bells)));
        }
        return kExitOk;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const InputError& e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitInput;
    } catch (const InvalidInput& e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitInput;
    } catch (const InfeasibleSpectrum& e) {
        err << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const PhaseFactorsNotFound& e) {
        err << "phase factors not found: " << e.what() << "\n";
        err << "best residual: " << e.best_residual() << "\n";
        return kExitPhasesNotFound;
    } catch (const VerificationFailed& e) {
        err << "verification failed:\n";
        for (const auto& v : e.violations()) err << "  - " << v << "\n";
        return kExitVerification;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInternal;
    }
}

}  // namespace qtel::cli
