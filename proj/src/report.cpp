#include "ptb/report.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <utility>

#include "ptb/errors.hpp"

namespace ptb {

namespace {

using nlohmann::json;

// Every report carries this notice: the positive word pins the monodromy
// only up to sign, and nothing here separates the two bundles.
constexpr const char* kSignCaveat =
    "the twist word determines the monodromy up to sign only; the bundles of "
    "A and -A may differ, and this report analyzes the positive word with the "
    "sign recorded alongside";

// Doubles are published with 15 significant digits; re-parsing the fixed
// format keeps the JSON emitter's shortest form within those digits.
double round15(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return std::strtod(buf, nullptr);
}

std::string dbl15(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trimmed(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

Int parse_int(const std::string& tok, const std::string& where) {
    const std::string t = trimmed(tok);
    const size_t digits = (!t.empty() && (t[0] == '+' || t[0] == '-')) ? 1 : 0;
    if (t.size() == digits)
        throw ParseError(where + " is not an integer: '" + tok + "'");
    for (size_t i = digits; i < t.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(t[i])))
            throw ParseError(where + " is not an integer: '" + tok + "'");
    Int v(t.substr(digits));
    return t[0] == '-' ? Int(-v) : v;
}

std::string syllables_str(const TwistWord& w) {
    std::string s = "(";
    for (size_t i = 0; i < w.syllables.size(); ++i) {
        if (i) s += ", ";
        s += "(" + w.syllables[i].first.str() + "," + w.syllables[i].second.str() + ")";
    }
    return s + ")";
}

json matrix_json(const MatSL2& m) {
    return json{{"a", m.a.str()}, {"b", m.b.str()}, {"c", m.c.str()}, {"d", m.d.str()}};
}

json guts_json(const GutsReport& g) {
    return json{{"agol_lower_bound", round15(g.agol_lower_bound)},
                {"chi_surface", g.chi_surface},
                {"guts_empty", g.guts_empty},
                {"handlebody_ibundle", g.handlebody_ibundle},
                {"k", g.k},
                {"parity", g.parity == Parity::Even ? "even" : "odd"},
                {"seifert_solid_tori", g.seifert_solid_tori},
                {"square_neighborhoods", g.square_neighborhoods}};
}

const char* sided_str(Sidedness s) {
    return s == Sidedness::TwoSided ? "two-sided" : "one-sided";
}

// Shared tail of the two analyze entry points: everything computed from the
// positive twist word.
AnalysisReport analyze_core(const TwistWord& positive, AnalysisReport r,
                            const ToleranceSettings& tol) {
    r.tolerances = tol;
    r.word = positive;

    const Strip strip = build_strip(positive);
    r.triangle_count = strip.n;
    r.orbit_representatives = strip.orbit_reps;
    r.quotient_edge_count = static_cast<long>(quotient_graph(strip).edges.size());

    for (const EdgePath& p : minimal_paths(strip, static_cast<size_t>(tol.max_paths))) {
        PathReport pr;
        pr.vertices = p.vertices;
        pr.guts = guts_report(p);
        pr.period = pr.guts.k;
        pr.parity = pr.guts.parity;
        const SurfaceComplex c = build_surface(p, strip.monodromy);
        pr.chi = c.chi;  // of the surface itself; guts carries the doubled value
        pr.sided = c.sided;
        r.paths.push_back(std::move(pr));
    }

    const LayeredTriangulation t = build_layered_triangulation(positive);
    r.tetrahedra = t.n;
    r.edge_class_count = static_cast<long>(t.edge_classes.size());
    auto [angles, shapes] = solve_geometric(t, tol.solver_tolerance);
    r.angles = std::move(angles);
    r.shapes = std::move(shapes);
    r.vol = volume(r.angles, tol.bound_tolerance);
    return r;
}

}  // namespace

MatSL2 parse_matrix(const std::string& text) {
    const std::vector<std::string> parts = split(text, ',');
    if (parts.size() != 4)
        throw ParseError("matrix needs 4 comma-separated entries, got " +
                         std::to_string(parts.size()));
    const Int a = parse_int(parts[0], "matrix entry 1");
    const Int b = parse_int(parts[1], "matrix entry 2");
    const Int c = parse_int(parts[2], "matrix entry 3");
    const Int d = parse_int(parts[3], "matrix entry 4");
    return MatSL2(a, b, c, d);  // the constructor enforces determinant 1
}

TwistWord parse_word(const std::string& text) {
    TwistWord w;
    const std::vector<std::string> syls = split(text, ';');
    for (size_t k = 0; k < syls.size(); ++k) {
        const std::string where = "syllable " + std::to_string(k + 1);
        const std::vector<std::string> pair = split(syls[k], ',');
        if (pair.size() != 2)
            throw ParseError(where + " needs the form 'l,m', got '" + syls[k] + "'");
        w.syllables.emplace_back(parse_int(pair[0], where + " entry 1"),
                                 parse_int(pair[1], where + " entry 2"));
    }
    w.validate();  // positivity of every exponent
    return w;
}

AnalysisReport analyze_matrix(const MatSL2& a, const std::string& input_text,
                              const ToleranceSettings& tol) {
    AnalysisReport r;
    r.input_kind = "matrix";
    r.input_text = input_text;
    r.matrix = a;
    const Factorization f = rl_factorize(a);  // throws NonHyperbolic
    r.sign = f.word.sign;
    r.factored = true;
    r.conjugator = f.conjugator;
    r.conjugator_found = f.conjugator_found;
    TwistWord positive = f.word;
    positive.sign = 1;
    return analyze_core(positive, std::move(r), tol);
}

AnalysisReport analyze_word(const TwistWord& w, const std::string& input_text,
                            const ToleranceSettings& tol) {
    w.validate();
    AnalysisReport r;
    r.input_kind = "word";
    r.input_text = input_text;
    r.sign = w.sign;
    TwistWord positive = w;
    positive.sign = 1;
    r.matrix = word_to_matrix(positive);
    return analyze_core(positive, std::move(r), tol);
}

json factor_section(const AnalysisReport& r) {
    json syl = json::array();
    for (const auto& [l, m] : r.word.syllables)
        syl.push_back(json::array({l.str(), m.str()}));
    json out{{"matrix", matrix_json(r.matrix)},
             {"sign", r.sign},
             {"sign_caveat", kSignCaveat},
             {"twist_word", json{{"n", r.triangle_count},
                                 {"syllables", syl},
                                 {"word", r.word.str()}}}};
    if (r.factored)
        out["conjugacy"] = json{{"conjugator", matrix_json(r.conjugator)},
                                {"verified", r.conjugator_found}};
    return out;
}

json strip_section(const AnalysisReport& r) {
    json reps = json::array();
    for (const Slope& s : r.orbit_representatives) reps.push_back(s.str());
    return json{{"strip", json{{"orbit_representatives", reps},
                               {"quotient_edge_count", r.quotient_edge_count},
                               {"triangle_count", r.triangle_count}}}};
}

json paths_section(const AnalysisReport& r) {
    json paths = json::array();
    for (const PathReport& p : r.paths) {
        json verts = json::array();
        for (const Slope& s : p.vertices) verts.push_back(s.str());
        paths.push_back(json{{"chi", p.chi},
                             {"guts", guts_json(p.guts)},
                             {"parity", p.parity == Parity::Even ? "even" : "odd"},
                             {"period", p.period},
                             {"sidedness", sided_str(p.sided)},
                             {"vertices", verts}});
    }
    return json{{"paths", paths}};
}

json guts_section(const AnalysisReport& r) {
    json guts = json::array();
    for (const PathReport& p : r.paths) guts.push_back(guts_json(p.guts));
    return json{{"guts", guts}};
}

json volume_section(const AnalysisReport& r) {
    json angles = json::array();
    for (const auto& [al, be, ga] : r.angles.angles)
        angles.push_back(json::array({round15(al), round15(be), round15(ga)}));
    json shapes = json::array();
    for (const std::complex<double>& z : r.shapes.shapes)
        shapes.push_back(json::array({round15(z.real()), round15(z.imag())}));
    return json{
        {"solver", json{{"angles", angles},
                        {"residual", round15(r.shapes.residual)},
                        {"shapes", shapes}}},
        {"tolerances", json{{"bound_tolerance", round15(r.tolerances.bound_tolerance)},
                            {"max_paths", r.tolerances.max_paths},
                            {"solver_tolerance", round15(r.tolerances.solver_tolerance)},
                            {"source", r.tolerances.source}}},
        {"triangulation", json{{"edge_classes", r.edge_class_count},
                               {"tetrahedra", r.tetrahedra}}},
        {"volume", json{{"bound", round15(r.vol.bound)},
                        {"bound_satisfied", r.vol.bound_satisfied},
                        {"equality_gap", round15(r.vol.equality_gap)},
                        {"volume", round15(r.vol.volume)}}}};
}

json analysis_document(const AnalysisReport& r) {
    json out{{"input", json{{"kind", r.input_kind}, {"text", r.input_text}}},
             {"tool_version", kToolVersion}};
    for (const json& section : {factor_section(r), strip_section(r), paths_section(r),
                                volume_section(r)})
        for (const auto& [key, value] : section.items()) out[key] = value;
    return out;
}

json error_document(const std::string& type, const std::string& message,
                    const std::string& input_text) {
    return json{{"error", json{{"message", message}, {"type", type}}},
                {"input", json{{"text", input_text}}},
                {"tool_version", kToolVersion}};
}

std::string factor_text(const AnalysisReport& r) {
    std::ostringstream os;
    os << "matrix: " << r.matrix.str() << "\n";
    os << "sign: " << (r.sign < 0 ? "-1" : "+1") << "\n";
    os << "twist word: " << r.word.str() << "   (n = " << r.triangle_count
       << ", syllables " << syllables_str(r.word) << ")\n";
    if (r.factored)
        os << "conjugacy: " << (r.conjugator_found ? "verified" : "unverified")
           << ", conjugator " << r.conjugator.str() << "\n";
    os << "note: " << kSignCaveat << "\n";
    return os.str();
}

std::string strip_text(const AnalysisReport& r) {
    std::ostringstream os;
    os << "strip: " << r.triangle_count << " triangles per period, "
       << r.quotient_edge_count << " quotient edges, orbit representatives";
    for (const Slope& s : r.orbit_representatives) os << " " << s.str();
    os << "\n";
    return os.str();
}

std::string paths_text(const AnalysisReport& r) {
    std::ostringstream os;
    os << "minimal paths: " << r.paths.size() << "\n";
    for (size_t i = 0; i < r.paths.size(); ++i) {
        const PathReport& p = r.paths[i];
        os << "  path " << i << ":";
        for (const Slope& s : p.vertices) os << " " << s.str();
        os << "   (period " << p.period << ", "
           << (p.parity == Parity::Even ? "even" : "odd") << ", chi " << p.chi << ", "
           << sided_str(p.sided) << ")\n";
    }
    return os.str();
}

std::string guts_text(const AnalysisReport& r) {
    std::ostringstream os;
    os << "guts reports: " << r.paths.size() << "\n";
    for (size_t i = 0; i < r.paths.size(); ++i) {
        const GutsReport& g = r.paths[i].guts;
        os << "  path " << i << ": square neighborhoods " << g.square_neighborhoods
           << ", Seifert solid tori " << g.seifert_solid_tori << ", handlebody pieces "
           << g.handlebody_ibundle << ", guts "
           << (g.guts_empty ? "empty" : "nonempty") << ", Agol bound "
           << dbl15(g.agol_lower_bound) << "\n";
    }
    return os.str();
}

std::string volume_text(const AnalysisReport& r) {
    std::ostringstream os;
    os << "triangulation: " << r.tetrahedra << " tetrahedra, " << r.edge_class_count
       << " edge classes\n";
    os << "solver: residual " << dbl15(r.shapes.residual) << "\n";
    os << "volume: " << dbl15(r.vol.volume) << "   bound: " << dbl15(r.vol.bound)
       << "   bound satisfied: " << (r.vol.bound_satisfied ? "yes" : "no")
       << "   gap: " << dbl15(r.vol.equality_gap) << "\n";
    os << "tolerances: solver " << dbl15(r.tolerances.solver_tolerance) << " ("
       << r.tolerances.source << "), bound " << dbl15(r.tolerances.bound_tolerance)
       << ", max paths " << r.tolerances.max_paths << "\n";
    return os.str();
}

std::string render_text(const AnalysisReport& r) {
    std::ostringstream os;
    os << "input (" << r.input_kind << "): " << r.input_text << "\n";
    os << factor_text(r) << strip_text(r) << paths_text(r) << guts_text(r)
       << volume_text(r);
    os << "version: " << kToolVersion << "\n";
    return os.str();
}

}  // namespace ptb
