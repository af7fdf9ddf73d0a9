#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "ptb/farey.hpp"
#include "ptb/sl2z.hpp"
#include "ptb/surfaces.hpp"
#include "ptb/triangulation.hpp"

namespace ptb {

inline constexpr const char* kToolVersion = "1.0.0";

// Knobs threaded through an analysis and echoed verbatim in every report.
struct ToleranceSettings {
    double solver_tolerance = 1e-13;  // projected-gradient target
    double bound_tolerance = 1e-9;    // slack for the volume-bound verdict
    long max_paths = 64;              // enumeration safety cap
    std::string source = "default";   // default | flag | environment
};

// One enumerated minimal path with its surface invariants.
struct PathReport {
    std::vector<Slope> vertices;
    long period = 0;
    Parity parity = Parity::Even;
    long chi = 0;
    Sidedness sided = Sidedness::TwoSided;
    GutsReport guts{};
};

// Full result bundle for one monodromy; the JSON sections below each
// serialize a slice of it.
struct AnalysisReport {
    std::string input_kind;  // "matrix" or "word"
    std::string input_text;  // raw command-line value

    MatSL2 matrix = MatSL2::identity();  // analyzed matrix (input echo)
    int sign = 1;
    TwistWord word;
    bool factored = false;  // word obtained via rl_factorize
    MatSL2 conjugator = MatSL2::identity();
    bool conjugator_found = false;

    long triangle_count = 0;  // strip triangles per period
    std::vector<Slope> orbit_representatives;
    long quotient_edge_count = 0;

    std::vector<PathReport> paths;

    long tetrahedra = 0;
    long edge_class_count = 0;
    AngleStructure angles;
    ShapeSolution shapes;
    VolumeResult vol;

    ToleranceSettings tolerances;
};

// Parsers for the two input grammars.  Throws ParseError naming the entry
// that failed, DeterminantError, or NonPositiveSyllable.
MatSL2 parse_matrix(const std::string& text);
TwistWord parse_word(const std::string& text);

// Runs the whole pipeline.  Matrix input is first put into twist-word normal
// form (throws NonHyperbolic); word input is analyzed as given, so rotated
// spellings of one conjugacy class exercise genuinely different strips.
AnalysisReport analyze_matrix(const MatSL2& a, const std::string& input_text,
                              const ToleranceSettings& tol);
AnalysisReport analyze_word(const TwistWord& w, const std::string& input_text,
                            const ToleranceSettings& tol);

// JSON slices; keys are sorted and doubles carry 15 significant digits.
// `analysis_document` is the union of all of them plus the input echo.
nlohmann::json factor_section(const AnalysisReport& r);
nlohmann::json strip_section(const AnalysisReport& r);
nlohmann::json paths_section(const AnalysisReport& r);
nlohmann::json guts_section(const AnalysisReport& r);
nlohmann::json volume_section(const AnalysisReport& r);
nlohmann::json analysis_document(const AnalysisReport& r);

// Structured failure document (same shape for single runs and batch lines).
nlohmann::json error_document(const std::string& type, const std::string& message,
                              const std::string& input_text);

// Human-readable renderings of the same slices.
std::string factor_text(const AnalysisReport& r);
std::string strip_text(const AnalysisReport& r);
std::string paths_text(const AnalysisReport& r);
std::string guts_text(const AnalysisReport& r);
std::string volume_text(const AnalysisReport& r);
std::string render_text(const AnalysisReport& r);

}  // namespace ptb
