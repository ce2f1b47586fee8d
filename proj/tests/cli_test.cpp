#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qtel/cli/commands.hpp"
#include "qtel/cli/problem.hpp"
#include "qtel/cli/report.hpp"

using namespace qtel;
using namespace qtel::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("qtel_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& text) {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }

    static std::string read(const std::string& path) {
        std::ifstream in(path);
        std::stringstream s;
        s << in.rdbuf();
        return s.str();
    }

    static Result call(std::vector<std::string> args) {
        std::ostringstream out, err;
        const int code = run(args, out, err);
        return {code, out.str(), err.str()};
    }

    fs::path dir_;
};

const char* kWorked = R"({"d": 2, "spectrum": ["1/2", "1/3", "1/6"], "seed": 3, "trials": 25})";
const char* kBellPair = R"({"d": 2, "spectrum": "1/2,1/2", "trials": 100})";

}  // namespace

TEST_F(Cli, BoundsWorkedExample) {
    const auto r = call({"bounds", write("p.json", kWorked)});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const Json doc = Json::parse(r.out);
    EXPECT_EQ(doc["command"], "bounds");
    EXPECT_EQ(doc["bounds"]["Et"]["value"].get<double>(), 1.0);
    EXPECT_EQ(doc["bounds"]["teleportFeasible"], true);
    EXPECT_EQ(doc["bounds"]["cccUnconditional"]["bits"]["value"].get<double>(), std::log2(6.0));
}

TEST_F(Cli, BoundsInfeasibleIsNotAnError) {
    const auto r = call({"bounds", write("p.json", R"({"d": 2, "spectrum": [0.6, 0.4]})")});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(Json::parse(r.out)["bounds"]["teleportFeasible"], false);
}

TEST_F(Cli, SynthesizeWorkedExample) {
    const auto r = call({"synthesize", write("p.json", kWorked)});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const ReportDoc doc = parse_report(r.out);
    ASSERT_TRUE(doc.protocol && doc.protocol->table);
    EXPECT_EQ(doc.protocol->outcomes, 6u);
    EXPECT_LT(doc.protocol->conditions.orthonormality, 1e-10);
    EXPECT_LT(doc.protocol->conditions.unitarity, 1e-10);
    EXPECT_EQ(doc.phases->method, "d2-triangle");
}

TEST_F(Cli, SimulateBellPair) {
    const auto r = call({"simulate", write("p.json", kBellPair), "--seed", "9"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const ReportDoc doc = parse_report(r.out);
    ASSERT_TRUE(doc.simulation);
    EXPECT_EQ(doc.simulation->trials, 100u);
    EXPECT_GE(doc.simulation->min_fidelity, 1.0 - 1e-10);
    EXPECT_GE(doc.simulation->sweep.min_fidelity, 1.0 - 1e-10);
    for (double p : doc.simulation->probabilities) EXPECT_NEAR(p, 0.25, 1e-10);
    EXPECT_EQ(doc.simulation->classical_bits, 2.0);
    for (const auto& bits : Json::parse(r.out)["simulation"]["residualEntanglementBits"])
        EXPECT_EQ(bits.get<double>(), 0.0);
}

TEST_F(Cli, SimulateIsByteIdentical) {
    const std::string p = write("p.json", kWorked);
    const auto a = call({"simulate", p});
    const auto b = call({"simulate", p});
    ASSERT_EQ(a.code, kExitOk);
    EXPECT_EQ(a.out, b.out);
    const auto c = call({"simulate", p, "--seed", "4"});
    EXPECT_NE(a.out, c.out);
    EXPECT_EQ(parse_report(a.out).simulation->classical_bits, std::log2(6.0));
}

TEST_F(Cli, OutFlagWritesFile) {
    const std::string out = (dir_ / "r.json").string();
    const auto r = call({"synthesize", write("p.json", kWorked), "--out", out});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_TRUE(r.out.empty());
    EXPECT_NO_THROW(parse_report(read(out)));
}

TEST_F(Cli, ExitCodes) {
    EXPECT_EQ(call({"bounds", write("a.json", "{\"d\": 2, \"spectrum\": [")}).code, kExitParse);
    EXPECT_EQ(call({"bounds", (dir_ / "missing.json").string()}).code, kExitParse);
    EXPECT_EQ(call({"frobnicate"}).code, kExitParse);
    EXPECT_EQ(call({"bounds", write("b.json", R"({"d": 2, "spectrum": [0.5, 0.4]})")}).code, kExitInput);
    EXPECT_EQ(call({"bounds", write("c.json", R"({"d": 1, "spectrum": [0.5, 0.5]})")}).code, kExitInput);
    EXPECT_EQ(call({"synthesize", write("d.json", R"({"d": 3, "spectrum": "1/2,1/3,1/6"})")}).code, kExitInfeasible);
    const auto nf = call({"synthesize", write("e.json", R"({"d": 3, "spectrum": [0.28, 0.22, 0.25, 0.25]})")});
    EXPECT_EQ(nf.code, kExitPhasesNotFound);
    EXPECT_NE(nf.err.find("best residual"), std::string::npos);
    EXPECT_EQ(call({"synthesize", write("f.json", R"({"d": 3, "spectrum": "1/3,1/3,1/3"})"), "--method", "d2"}).code,
              kExitInput);
}

TEST_F(Cli, MalformedFieldIsNamed) {
    const auto r = call({"bounds", write("p.json", R"({"d": 2, "spectrum": ["1/2", "half"]})")});
    EXPECT_EQ(r.code, kExitParse);
    EXPECT_NE(r.err.find("half"), std::string::npos) << r.err;
    const auto d = call({"bounds", write("q.json", R"({"d": "two", "spectrum": "1/2,1/2"})")});
    EXPECT_EQ(d.code, kExitParse);
    EXPECT_NE(d.err.find("'d'"), std::string::npos) << d.err;
    const auto s = call({"bounds", write("r.json", R"({"d": 2})")});
    EXPECT_EQ(s.code, kExitParse);
    EXPECT_NE(s.err.find("spectrum"), std::string::npos) << s.err;
}

TEST_F(Cli, InputStateChecks) {
    EXPECT_EQ(call({"simulate", write("a.json", R"({"d": 2, "spectrum": "1/2,1/2", "inputState": [[1, 0]]})")}).code,
              kExitInput);
    EXPECT_EQ(
        call({"simulate", write("b.json", R"({"d": 2, "spectrum": "1/2,1/2", "inputState": [[1, 0], [1, 0]]})")}).code,
        kExitInput);
    const auto ok = call(
        {"simulate", write("c.json", R"({"d": 2, "spectrum": "1/2,1/2", "inputState": [[0.6, 0], [0, 0.8]], "trials": 3})")});
    EXPECT_EQ(ok.code, kExitOk) << ok.err;
}

TEST_F(Cli, VerifyFreshReport) {
    const std::string out = (dir_ / "r.json").string();
    ASSERT_EQ(call({"simulate", write("p.json", kWorked), "--out", out}).code, kExitOk);
    const auto v = call({"verify", out});
    EXPECT_EQ(v.code, kExitOk) << v.err;
    EXPECT_NE(v.out.find("verified"), std::string::npos);
}

TEST_F(Cli, VerifyCatchesPerturbedEntry) {
    Json doc = Json::parse(call({"synthesize", write("p.json", kWorked)}).out);
    auto& entry = doc["protocol"]["table"][1][0][2][0];
    entry = entry.get<double>() + 1e-3;
    const auto v = call({"verify", write("r.json", doc.dump(2))});
    EXPECT_EQ(v.code, kExitVerification);
    EXPECT_NE(v.err.find("orthonormality"), std::string::npos) << v.err;
}

TEST_F(Cli, VerifyCatchesEditedSpectrum) {
    Json doc = Json::parse(call({"synthesize", write("p.json", kWorked)}).out);
    doc["problem"]["spectrum"] = Json::array({"1/3", "1/3", "1/3"});
    const auto v = call({"verify", write("r.json", doc.dump(2))});
    EXPECT_EQ(v.code, kExitVerification);
    EXPECT_NE(v.err.find("unitarity"), std::string::npos) << v.err;
}

TEST_F(Cli, ElidedTableIsResynthesized) {
    // s = 80 outcomes exceeds the elision threshold.
    const std::string p = write("p.json", R"({"d": 4, "spectrum": [)" + [] {
        std::string s;
        for (int k = 0; k < 20; ++k) s += std::string(k ? "," : "") + "\"1/20\"";
        return s;
    }() + "]}");
    const std::string out = (dir_ / "r.json").string();
    ASSERT_EQ(call({"synthesize", p, "--out", out}).code, kExitOk);
    const ReportDoc doc = parse_report(read(out));
    ASSERT_TRUE(doc.protocol);
    EXPECT_FALSE(doc.protocol->table.has_value());
    EXPECT_EQ(doc.protocol->outcomes, 80u);
    EXPECT_EQ(Json::parse(read(out))["protocol"]["tableElided"], true);
    const auto v = call({"verify", out});
    EXPECT_EQ(v.code, kExitOk) << v.err;
}

TEST_F(Cli, Concentrate) {
    const auto ok = call({"concentrate", "--spectrum", "1/2,1/3,1/6", "--copies", "4", "--bells", "4"});
    ASSERT_EQ(ok.code, kExitOk) << ok.err;
    const Json doc = Json::parse(ok.out);
    EXPECT_EQ(doc["concentration"]["bounds"]["feasible"], true);
    EXPECT_NEAR(doc["concentration"]["bounds"]["C1LowerBound"].get<double>(), 4.0 * std::log2(3.0) - 4.0, 1e-12);
    EXPECT_EQ(doc["concentration"]["bounds"]["C2"], 8);
    const auto no = call({"concentrate", "--spectrum", "1/2,1/3,1/6", "--copies", "4", "--bells", "5"});
    ASSERT_EQ(no.code, kExitOk);
    EXPECT_EQ(Json::parse(no.out)["concentration"]["bounds"]["feasible"], false);
    EXPECT_EQ(call({"concentrate", "--spectrum", "0.5,0.6", "--copies", "1", "--bells", "1"}).code, kExitInput);
}

TEST_F(Cli, ReportRoundTrip) {
    const std::string p = write("p.json", kWorked);
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"bounds", p},
             {"synthesize", p},
             {"synthesize", p, "--method", "general"},
             {"simulate", p},
             {"concentrate", "--spectrum", "0.7,0.3", "--copies", "4", "--bells", "2"}}) {
        const auto r = call(args);
        ASSERT_EQ(r.code, kExitOk) << args[0] << ": " << r.err;
        const ReportDoc doc = parse_report(r.out);
        EXPECT_EQ(parse_report(serialize(doc)), doc) << args[0];
        EXPECT_EQ(serialize(doc), r.out) << args[0];
    }
}

TEST(Problem, SpectrumParsing) {
    EXPECT_EQ(split_spectrum(" 1/2, 1/3 ,1/6"), (std::vector<std::string>{"1/2", "1/3", "1/6"}));
    EXPECT_TRUE(parse_spectrum({"1/2", "1/3", "1/6"}).is_exact());
    EXPECT_FALSE(parse_spectrum({"0.5", "1/2"}).is_exact());
    EXPECT_THROW(parse_spectrum({"1/2", "1/3"}), InputError);
    EXPECT_THROW(parse_spectrum({"0.5", "x"}), ParseError);
    EXPECT_THROW(parse_spectrum({"0.5", "-0.1", "0.6"}), InputError);
    EXPECT_NO_THROW(parse_spectrum({"0.3333333333", "0.3333333333", "0.3333333334"}));
}

TEST(Problem, JsonRoundTrip) {
    ProblemSpec spec;
    spec.d = 2;
    spec.spectrum = {"1/2", "1/3", "1/6"};
    spec.input_state = std::vector<Complex>{Complex(0.6, 0.0), Complex(0.0, 0.8)};
    spec.seed = 11;
    spec.trials = 5;
    EXPECT_EQ(problem_from_json(to_json(spec)), spec);
    EXPECT_EQ(parse_problem_text(to_json(spec).dump()), spec);
}
