#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "ptb/errors.hpp"
#include "ptb/report.hpp"

using namespace ptb;
using nlohmann::json;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
};

// Runs the installed command-line binary through the shell; stderr is
// dropped, stdout captured byte for byte.
CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    std::string cmd = env_prefix;
    if (!cmd.empty()) cmd += " ";
    cmd += std::string(PTB_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult r;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const std::filesystem::path p = std::filesystem::temp_directory_path() / name;
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << content;
    return p;
}

std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == '\n') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

}  // namespace

TEST_CASE("monodromy input parsing") {
    CHECK(parse_matrix(" 2 , 1 ,1,1") == MatSL2(2, 1, 1, 1));
    CHECK(parse_matrix("-2,-1,-1,-1").trace() == -3);
    CHECK(parse_matrix("+3,+2,+1,+1").a == 3);
    // twenty-one digit entries survive exactly
    const MatSL2 big =
        parse_matrix("100000000000000000001,1,100000000000000000000,1");
    CHECK(big.a == Int("100000000000000000001"));
    CHECK(big.a * big.d - big.b * big.c == 1);

    CHECK_THROWS_AS(parse_matrix("2,1,1"), ParseError);
    CHECK_THROWS_AS(parse_matrix("2,1,1,1,1"), ParseError);
    CHECK_THROWS_AS(parse_matrix("2,1,x,1"), ParseError);
    CHECK_THROWS_AS(parse_matrix("2.5,1,1,1"), ParseError);
    CHECK_THROWS_AS(parse_matrix(""), ParseError);
    CHECK_THROWS_AS(parse_matrix("2,1,,1"), ParseError);
    CHECK_THROWS_AS(parse_matrix("1,0,0,2"), DeterminantError);
    CHECK_THROWS_AS(parse_matrix("1,0,0,-1"), DeterminantError);

    const TwistWord w = parse_word("1,2; 3 ,1");
    REQUIRE(w.syllables.size() == 2);
    CHECK(w.syllables[0] == std::pair<Int, Int>(1, 2));
    CHECK(w.syllables[1] == std::pair<Int, Int>(3, 1));
    CHECK(w.sign == 1);

    CHECK_THROWS_AS(parse_word(""), ParseError);
    CHECK_THROWS_AS(parse_word("1"), ParseError);
    CHECK_THROWS_AS(parse_word("1,2;"), ParseError);
    CHECK_THROWS_AS(parse_word("1,2,3"), ParseError);
    CHECK_THROWS_AS(parse_word("a,2"), ParseError);
    CHECK_THROWS_AS(parse_word("0,2"), NonPositiveSyllable);
    CHECK_THROWS_AS(parse_word("1,-2"), NonPositiveSyllable);
}

TEST_CASE("full analysis of the simplest monodromy") {
    const ToleranceSettings tol;
    const AnalysisReport r = analyze_matrix(MatSL2(2, 1, 1, 1), "2,1,1,1", tol);
    CHECK(r.input_kind == "matrix");
    CHECK(r.sign == 1);
    CHECK(r.factored);
    CHECK(r.conjugator_found);
    CHECK(r.word.str() == "R L");
    CHECK(r.triangle_count == 2);
    CHECK(r.quotient_edge_count == 4);
    CHECK(r.orbit_representatives.size() == 2);
    REQUIRE(r.paths.size() == 2);
    for (const PathReport& p : r.paths) {
        CHECK(p.period == 1);
        CHECK(p.parity == Parity::Odd);
        CHECK(p.chi == -1);
        CHECK(p.sided == Sidedness::OneSided);
        CHECK(p.guts.k == 1);
        CHECK(p.guts.chi_surface == -2);
        CHECK(p.guts.guts_empty);
        CHECK(p.guts.handlebody_ibundle == 1);
        CHECK(p.guts.agol_lower_bound == 0.0);
    }
    CHECK(r.tetrahedra == 2);
    CHECK(r.edge_class_count == 2);
    CHECK(std::fabs(r.vol.volume - 2 * regular_ideal_volume()) < 1e-9);
    CHECK(r.vol.bound_satisfied);
    CHECK(r.shapes.residual < 1e-12);
}

TEST_CASE("word analysis keeps the spelling and reports handlebody pieces") {
    const ToleranceSettings tol;
    const AnalysisReport r = analyze_word(parse_word("2,1"), "2,1", tol);
    CHECK(r.input_kind == "word");
    CHECK(!r.factored);
    CHECK(r.sign == 1);
    CHECK(r.tetrahedra == 3);
    CHECK(r.edge_class_count == 3);
    CHECK(!r.paths.empty());
    CHECK(std::any_of(r.paths.begin(), r.paths.end(), [](const PathReport& p) {
        return p.parity == Parity::Odd && p.guts.handlebody_ibundle == 1;
    }));
    for (const PathReport& p : r.paths) CHECK(p.guts.guts_empty);
    CHECK(r.vol.bound_satisfied);
    CHECK(r.vol.equality_gap > 0.01);
}

TEST_CASE("negated monodromy differs only in its sign") {
    const ToleranceSettings tol;
    const AnalysisReport rp = analyze_matrix(MatSL2(2, 1, 1, 1), "p", tol);
    const AnalysisReport rn = analyze_matrix(MatSL2(-2, -1, -1, -1), "n", tol);
    CHECK(rp.sign == 1);
    CHECK(rn.sign == -1);
    const json dp = analysis_document(rp), dn = analysis_document(rn);
    CHECK(dn.at("twist_word") == dp.at("twist_word"));
    CHECK(dn.at("strip") == dp.at("strip"));
    CHECK(dn.at("paths") == dp.at("paths"));
    CHECK(dn.at("solver") == dp.at("solver"));
    CHECK(dn.at("volume") == dp.at("volume"));
    CHECK(dn.at("sign_caveat") == dp.at("sign_caveat"));
}

TEST_CASE("conjugated matrices produce one report") {
    const ToleranceSettings tol;
    const MatSL2 a(5, 3, 3, 2);  // R L R L of trace 7, conjugated below
    const std::vector<MatSL2> conjugators = {
        MatSL2::twist_r_pow(3) * MatSL2::twist_l_pow(-2),
        MatSL2::twist_l_pow(5) * MatSL2::twist_r_pow(-1) * MatSL2::twist_l_pow(2),
    };
    json da = analysis_document(analyze_matrix(a, "a", tol));
    for (const MatSL2& g : conjugators) {
        const MatSL2 b = g * a * g.inverse();
        json db = analysis_document(analyze_matrix(b, "b", tol));
        for (const char* key : {"input", "matrix", "conjugacy"}) {
            da.erase(key);
            db.erase(key);
        }
        CHECK(da == db);
    }
}

TEST_CASE("json slices agree with the full document") {
    const ToleranceSettings tol;
    const AnalysisReport r = analyze_word(parse_word("1,2;2,1"), "1,2;2,1", tol);
    const json doc = analysis_document(r);
    for (const json& section :
         {factor_section(r), strip_section(r), paths_section(r), volume_section(r)})
        for (const auto& [key, value] : section.items()) CHECK(doc.at(key) == value);
    const json guts = guts_section(r).at("guts");
    REQUIRE(guts.size() == doc.at("paths").size());
    for (size_t i = 0; i < guts.size(); ++i)
        CHECK(guts[i] == doc.at("paths")[i].at("guts"));
    // every section of the declared schema is present
    for (const char* key : {"input", "matrix", "sign", "sign_caveat", "twist_word",
                            "strip", "paths", "triangulation", "solver", "volume",
                            "tolerances", "tool_version"})
        CHECK(doc.contains(key));
}

TEST_CASE("tolerance settings flow into the report") {
    ToleranceSettings t;
    t.solver_tolerance = 1e-11;
    t.source = "environment";
    t.max_paths = 7;
    const AnalysisReport r = analyze_word(parse_word("1,1"), "1,1", t);
    const json v = volume_section(r).at("tolerances");
    CHECK(v.at("solver_tolerance") == 1e-11);
    CHECK(v.at("source") == "environment");
    CHECK(v.at("max_paths") == 7);
    CHECK(v.at("bound_tolerance") == 1e-9);
}

TEST_CASE("command line golden output and determinism") {
    const CliResult r1 = run_cli("analyze --matrix 2,1,1,1 --json");
    CHECK(r1.exit_code == 0);
    const std::string golden =
        read_file(std::filesystem::path(PTB_GOLDEN_DIR) / "analyze_cat.json");
    CHECK(r1.out == golden);
    const CliResult r2 = run_cli("analyze --matrix 2,1,1,1 --json");
    CHECK(r2.out == r1.out);
}

TEST_CASE("command line exit codes") {
    CHECK(run_cli("analyze --matrix 2,1,1,1").exit_code == 0);
    CHECK(run_cli("--version").exit_code == 0);
    CHECK(run_cli("analyze --matrix x,1,1,1").exit_code == 1);
    CHECK(run_cli("analyze").exit_code == 1);
    CHECK(run_cli("analyze --matrix 2,1,1,1 --word 1,1").exit_code == 1);
    CHECK(run_cli("bogus").exit_code == 1);
    CHECK(run_cli("analyze --matrix 2,1,1,1 --frobnicate").exit_code == 1);
    CHECK(run_cli("analyze --matrix 1,1,0,1").exit_code == 2);  // parabolic
    CHECK(run_cli("analyze --matrix 1,0,0,2").exit_code == 2);  // determinant 2
    CHECK(run_cli("analyze --word 0,1").exit_code == 2);
    CHECK(run_cli("batch /nonexistent/batch.txt").exit_code == 3);

    const CliResult err = run_cli("analyze --matrix 1,1,0,1 --json");
    CHECK(err.exit_code == 2);
    const json doc = json::parse(err.out);
    CHECK(doc.at("error").at("type") == "NonHyperbolic");
    CHECK(doc.at("input").at("text") == "1,1,0,1");
}

TEST_CASE("command line subcommands emit their slice of the analysis") {
    const std::string input = "--word 2,1 --json";
    const json full = json::parse(run_cli("analyze " + input).out);
    for (const char* sub : {"factor", "strip", "surfaces", "guts", "volume"}) {
        CAPTURE(sub);
        const CliResult part_run = run_cli(std::string(sub) + " " + input);
        CHECK(part_run.exit_code == 0);
        const json part = json::parse(part_run.out);
        for (const auto& [key, value] : part.items()) {
            if (key == "guts") {
                for (size_t i = 0; i < value.size(); ++i)
                    CHECK(value[i] == full.at("paths")[i].at("guts"));
            } else {
                CHECK(full.at(key) == value);
            }
        }
    }
}

TEST_CASE("batch processing") {
    const std::string lines =
        "--matrix 2,1,1,1\n"
        "--word 1,1\n"
        "\n"
        "--word \"2,1\"\n"
        "--matrix 1,1,0,1\n"
        "--frobnicate x\n";
    const auto file = temp_file("ptb_batch_test.txt", lines);
    const CliResult r = run_cli("batch " + file.string());
    CHECK(r.exit_code == 0);
    const std::vector<std::string> out = split_lines(r.out);
    REQUIRE(out.size() == 5);  // the blank line produces nothing

    std::vector<json> docs;
    for (const std::string& line : out) docs.push_back(json::parse(line));
    const std::vector<long> expected_lines = {1, 2, 4, 5, 6};
    for (size_t i = 0; i < docs.size(); ++i)
        CHECK(docs[i].at("line") == expected_lines[i]);
    for (size_t i = 0; i < 3; ++i) {
        CHECK(docs[i].contains("volume"));
        CHECK(!docs[i].contains("error"));
    }
    CHECK(docs[0].at("input").at("kind") == "matrix");
    CHECK(docs[1].at("input").at("kind") == "word");
    CHECK(docs[2].at("input").at("text") == "2,1");  // quotes stripped
    CHECK(docs[3].at("error").at("type") == "NonHyperbolic");
    CHECK(docs[4].at("error").at("type") == "ParseError");

    // same input, same bytes
    CHECK(run_cli("batch " + file.string()).out == r.out);

    const auto empty = temp_file("ptb_batch_empty.txt", "");
    const CliResult re = run_cli("batch " + empty.string());
    CHECK(re.exit_code == 0);
    CHECK(re.out.empty());

    const CliResult rt = run_cli("batch " + file.string() + " --no-json");
    CHECK(rt.exit_code == 0);
    CHECK(rt.out.find("--- line 1 ---") != std::string::npos);
    CHECK(rt.out.find("volume:") != std::string::npos);

    std::filesystem::remove(file);
    std::filesystem::remove(empty);
}

TEST_CASE("environment tolerance override") {
    const json env_doc = json::parse(
        run_cli("volume --word 1,1 --json", "PTB_TOLERANCE=1e-11").out);
    CHECK(env_doc.at("tolerances").at("solver_tolerance") == 1e-11);
    CHECK(env_doc.at("tolerances").at("source") == "environment");

    const json flag_doc = json::parse(
        run_cli("volume --word 1,1 --json --tolerance 1e-12", "PTB_TOLERANCE=1e-11").out);
    CHECK(flag_doc.at("tolerances").at("solver_tolerance") == 1e-12);
    CHECK(flag_doc.at("tolerances").at("source") == "flag");

    CHECK(run_cli("volume --word 1,1", "PTB_TOLERANCE=banana").exit_code == 1);
    CHECK(run_cli("volume --word 1,1 --tolerance -1").exit_code == 1);

    const json plain = json::parse(run_cli("volume --word 1,1 --json").out);
    CHECK(plain.at("tolerances").at("source") == "default");
}

TEST_CASE("path enumeration cap is an explicit error") {
    // 127 words of size at most 8 exist, so a small cap must trip on a word
    // with several minimal paths rather than silently truncating.
    const CliResult r = run_cli("analyze --word 1,1 --max-paths 1 --json");
    CHECK(r.exit_code == 2);
    const json doc = json::parse(r.out);
    CHECK(doc.at("error").at("type") == "TooManyPaths");
    CHECK(run_cli("analyze --word 1,1 --max-paths 0").exit_code == 1);
}
