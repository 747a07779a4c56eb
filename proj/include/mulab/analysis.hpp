#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mulab/curve.hpp"
#include "mulab/errors.hpp"
#include "mulab/polyz.hpp"

namespace mulab {

struct CurveRecord {
    EllipticCurve curve;
    std::optional<i64> p;              // prime to analyze at; falls back to the run default
    std::map<i64, i64> a_table;        // supplied a_l values
    std::optional<std::vector<QPoly>> kernels;
    std::string source;
};

// Reads a JSON list of curves (bare array or {"curves": [...]}) and
// validates each record. Throws ParseError, InvalidModel, InconsistentAp.
std::vector<CurveRecord> ingest(const std::string& path);
std::vector<CurveRecord> ingest_text(const std::string& json_text, const std::string& source = "inline");

// Supplied a_l merged with point counts for every prime up to bound.
std::map<i64, i64> complete_a_table(const CurveRecord& rec, i64 bound);

struct RunConfig {
    i64 p = 5;
    int precision = 6;
    int layers = 3;
    i64 ell_bound = 200;
    std::string format = "json";
    std::string cache_dir;  // empty: no cache
    bool verify_cache = false;
};

// key = value lines with # comments and optional quotes (a TOML subset).
// Only keys present in the file are changed.
void apply_config_file(const std::string& path, RunConfig& cfg);

struct CurveReport {
    std::string label, isogeny_class;
    std::array<i64, 5> ainvs{};
    i64 conductor = 0;
    i64 p = 0;
    int precision = 0;
    int layers = 0;
    i64 ell_bound = 0;
    i64 a_p = 0;
    bool reducible = false;
    std::string ss_pair;  // "{phi1, phi2}" or empty
    bool split = false;
    std::string classification;
    std::vector<std::string> line_characters;
    std::vector<std::string> kernel_polynomials;
    int alignment_degree = 0;
    std::string alignment_degree_kind;
    std::vector<std::string> alignment_evidence;
    int mu = 0, lambda = 0, stabilized_at = 0;
    std::vector<std::string> per_layer;
    std::string normalization_id;
    std::string symbol_at_zero;
    int working_precision = 0;
    bool alignment_bound_holds = true;  // alignment degree <= mu
    std::vector<std::string> cache_events;
    std::vector<std::string> violations;
};

CurveReport analyze(const CurveRecord& rec, const RunConfig& cfg);

struct AnalysisReport {
    std::vector<CurveReport> curves;
    std::vector<std::string> class_checks;
    std::vector<std::string> violations;  // any entry makes the run exit 2
};

// Analyzes every record in parallel, then checks that curves sharing an
// isogeny class and prime agree on lambda and on the semisimplification.
AnalysisReport analyze_all(const std::vector<CurveRecord>& recs, const RunConfig& cfg);

// Deterministic serialization; format is "json" or "table".
std::string report(const AnalysisReport& r, const std::string& format);

// 3 for input errors (unreadable or invalid data and parameters), 2 otherwise.
int exit_code_for(const Error& e);

inline constexpr const char* kMainConjectureFlag = "analytic μ reported as Selmer μ (main conjecture)";

}  // namespace mulab
