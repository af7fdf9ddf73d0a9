#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ptb/errors.hpp"
#include "ptb/report.hpp"

namespace {

using nlohmann::json;
using namespace ptb;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;   // bad flags or malformed input text
constexpr int kExitDomain = 2;  // well-formed input outside the domain
constexpr int kExitIo = 3;

struct Options {
    std::string matrix_text;
    std::string word_text;
    std::optional<double> tolerance;
    long max_paths = 64;
    bool json_output = false;
};

struct Failure {
    std::string type;
    std::string message;
    int code = kExitDomain;
};

// Runs the callable and maps the toolkit's exception hierarchy onto exit
// codes: only malformed input text counts as usage, the rest is domain.
template <typename Fn>
std::optional<Failure> guarded(Fn&& fn) {
    try {
        fn();
    } catch (const ParseError& e) {
        return Failure{"ParseError", e.what(), kExitUsage};
    } catch (const DeterminantError& e) {
        return Failure{"DeterminantError", e.what(), kExitDomain};
    } catch (const NonHyperbolic& e) {
        return Failure{"NonHyperbolic", e.what(), kExitDomain};
    } catch (const NonPositiveSyllable& e) {
        return Failure{"NonPositiveSyllable", e.what(), kExitDomain};
    } catch (const InvalidPath& e) {
        return Failure{"InvalidPath", e.what(), kExitDomain};
    } catch (const TooManyPaths& e) {
        return Failure{"TooManyPaths", e.what(), kExitDomain};
    } catch (const NoInteriorPoint& e) {
        return Failure{"NoInteriorPoint", e.what(), kExitDomain};
    } catch (const NonConvergence& e) {
        return Failure{"NonConvergence", e.what(), kExitDomain};
    } catch (const Error& e) {
        return Failure{"Error", e.what(), kExitDomain};
    }
    return std::nullopt;
}

std::string trimmed(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Flag value wins over the environment; the chosen source is echoed in the
// report so a run can always be reproduced from its own output.
std::optional<ToleranceSettings> resolve_tolerances(const Options& opt,
                                                    std::string& usage_error) {
    ToleranceSettings t;
    t.max_paths = opt.max_paths;
    if (t.max_paths < 1) {
        usage_error = "--max-paths must be at least 1";
        return std::nullopt;
    }
    if (opt.tolerance) {
        t.solver_tolerance = *opt.tolerance;
        t.source = "flag";
    } else if (const char* env = std::getenv("PTB_TOLERANCE")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end == env || *end != '\0' || !(v > 0.0)) {
            usage_error = std::string("PTB_TOLERANCE must be a positive real, got '") +
                          env + "'";
            return std::nullopt;
        }
        t.solver_tolerance = v;
        t.source = "environment";
    }
    if (!(t.solver_tolerance > 0.0)) {
        usage_error = "--tolerance must be positive";
        return std::nullopt;
    }
    return t;
}

json subcommand_document(const std::string& sub, const AnalysisReport& r) {
    if (sub == "analyze") return analysis_document(r);
    json out{{"input", json{{"kind", r.input_kind}, {"text", r.input_text}}},
             {"tool_version", kToolVersion}};
    json section;
    if (sub == "factor") section = factor_section(r);
    else if (sub == "strip") section = strip_section(r);
    else if (sub == "surfaces") section = paths_section(r);
    else if (sub == "guts") section = guts_section(r);
    else section = volume_section(r);
    for (const auto& [key, value] : section.items()) out[key] = value;
    return out;
}

std::string subcommand_text(const std::string& sub, const AnalysisReport& r) {
    if (sub == "factor") return factor_text(r);
    if (sub == "strip") return strip_text(r);
    if (sub == "surfaces") return paths_text(r);
    if (sub == "guts") return guts_text(r);
    if (sub == "volume") return volume_text(r);
    return render_text(r);
}

int run_single(const std::string& sub, const Options& opt) {
    if (opt.matrix_text.empty() == opt.word_text.empty()) {
        std::cerr << "error: exactly one of --matrix or --word is required\n";
        return kExitUsage;
    }
    std::string usage_error;
    const auto tol = resolve_tolerances(opt, usage_error);
    if (!tol) {
        std::cerr << "error: " << usage_error << "\n";
        return kExitUsage;
    }

    const bool is_matrix = !opt.matrix_text.empty();
    const std::string& input_text = is_matrix ? opt.matrix_text : opt.word_text;
    AnalysisReport r;
    const auto fail = guarded([&] {
        r = is_matrix ? analyze_matrix(parse_matrix(input_text), input_text, *tol)
                      : analyze_word(parse_word(input_text), input_text, *tol);
    });
    if (fail) {
        if (opt.json_output)
            std::cout << error_document(fail->type, fail->message, input_text).dump(2)
                      << "\n";
        std::cerr << "error (" << fail->type << "): " << fail->message << "\n";
        return fail->code;
    }
    if (opt.json_output)
        std::cout << subcommand_document(sub, r).dump(2) << "\n";
    else
        std::cout << subcommand_text(sub, r);
    return kExitOk;
}

// One analysis per non-blank line, grammar "--matrix VALUE" / "--word VALUE"
// (optionally quoted, '=' accepted).  Failures become inline documents and
// never abort the remaining lines; only file-level IO problems do.
int run_batch(const std::string& path, const Options& opt) {
    std::string usage_error;
    const auto tol = resolve_tolerances(opt, usage_error);
    if (!tol) {
        std::cerr << "error: " << usage_error << "\n";
        return kExitUsage;
    }
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open batch file '" << path << "'\n";
        return kExitIo;
    }

    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string text = trimmed(line);
        if (text.empty()) continue;

        std::string kind, value;
        const auto line_fail = guarded([&] {
            size_t sp = text.find_first_of(" \t=");
            const std::string flag = text.substr(0, sp);
            if (flag == "--matrix") kind = "matrix";
            else if (flag == "--word") kind = "word";
            else
                throw ParseError("batch line must start with --matrix or --word, got '" +
                                 flag + "'");
            value = sp == std::string::npos ? "" : trimmed(text.substr(sp + 1));
            if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
                value.back() == value.front())
                value = value.substr(1, value.size() - 2);
            if (value.empty()) throw ParseError("batch line is missing a value");
        });

        AnalysisReport r;
        const auto fail = line_fail ? line_fail : guarded([&] {
            r = kind == "matrix" ? analyze_matrix(parse_matrix(value), value, *tol)
                                 : analyze_word(parse_word(value), value, *tol);
        });
        json doc = fail ? error_document(fail->type, fail->message, text)
                        : analysis_document(r);
        doc["line"] = lineno;
        if (opt.json_output) {
            std::cout << doc.dump() << "\n";
        } else {
            std::cout << "--- line " << lineno << " ---\n";
            if (fail)
                std::cout << "error (" << fail->type << "): " << fail->message << "\n";
            else
                std::cout << render_text(r);
        }
    }
    if (in.bad()) {
        std::cerr << "error: failed reading batch file '" << path << "'\n";
        return kExitIo;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyperbolic once-punctured-torus bundle toolkit"};
    app.set_version_flag("--version", std::string("ptb ") + kToolVersion);
    app.require_subcommand(1);

    Options opt;
    std::string batch_file;
    double tolerance_value = 0.0;
    bool json_on = false, json_off = false;
    std::vector<CLI::Option*> tolerance_opts;

    const auto add_common = [&](CLI::App* sub, bool with_inputs) {
        if (with_inputs) {
            sub->add_option("--matrix", opt.matrix_text,
                            "monodromy matrix \"a,b,c,d\", row-major, determinant 1");
            sub->add_option("--word", opt.word_text,
                            "twist word \"l1,m1;l2,m2;...\", positive exponents");
        }
        tolerance_opts.push_back(
            sub->add_option("--tolerance", tolerance_value,
                            "solver tolerance (projected-gradient target)"));
        sub->add_option("--max-paths", opt.max_paths,
                        "cap on enumerated minimal paths (exceeding it is an error)");
        sub->add_flag("--json", json_on, "emit JSON");
        sub->add_flag("--no-json", json_off, "emit text (batch defaults to JSON)");
    };

    for (const char* name : {"factor", "strip", "surfaces", "guts", "volume", "analyze"})
        add_common(app.add_subcommand(name), true);
    CLI::App* batch = app.add_subcommand("batch");
    batch->add_option("file", batch_file, "file with one --matrix/--word line per run")
        ->required();
    add_common(batch, false);

    app.get_subcommand("factor")->description("twist-word normal form of the monodromy");
    app.get_subcommand("strip")->description("invariant strip and its quotient");
    app.get_subcommand("surfaces")->description("minimal paths and their surfaces");
    app.get_subcommand("guts")->description("characteristic-submanifold reports");
    app.get_subcommand("volume")->description("triangulation, angles, and volume");
    app.get_subcommand("analyze")->description("full report");
    batch->description("one analysis per input line");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    for (CLI::Option* o : tolerance_opts)
        if (o->count()) opt.tolerance = tolerance_value;

    const bool is_batch = app.got_subcommand("batch");
    opt.json_output = is_batch ? !json_off : (json_on && !json_off);

    if (is_batch) return run_batch(batch_file, opt);
    for (const char* name : {"factor", "strip", "surfaces", "guts", "volume", "analyze"})
        if (app.got_subcommand(name)) return run_single(name, opt);
    return kExitUsage;  // unreachable: a subcommand is required
}
