#include "mulab/analysis.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mulab/errors.hpp"
#include "mulab/mazur_tate.hpp"
#include "mulab/modsym.hpp"
#include "mulab/padic.hpp"
#include "mulab/residual.hpp"

namespace mulab {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// Primes used to cut out the eigen-symbol; the Hecke eigenspace is already
// one-dimensional well below this for the levels in scope.
constexpr i64 kSymbolEllBound = 60;
constexpr i64 kSpotCheckBound = 20;

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("InputError", "cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

CurveRecord parse_record(const json& j, const std::string& source) {
    CurveRecord r;
    r.source = source;
    try {
        r.curve.label = j.at("label").get<std::string>();
        auto a = j.at("ainvs").get<std::vector<i64>>();
        if (a.size() != 5) throw Error("ParseError", r.curve.label + ": ainvs must have 5 entries");
        std::copy(a.begin(), a.end(), r.curve.ainvs.begin());
        r.curve.conductor = j.at("conductor").get<i64>();
        if (j.contains("p")) r.p = j["p"].get<i64>();
        if (j.contains("aplist"))
            for (auto& [k, v] : j["aplist"].items()) r.a_table[std::stoll(k)] = v.get<i64>();
        if (j.contains("kernels")) {
            std::vector<QPoly> ks;
            for (const auto& poly : j["kernels"]) {
                QPoly q;
                for (const auto& c : poly) {
                    mpq_class x(c.is_string() ? c.get<std::string>() : std::to_string(c.get<i64>()));
                    x.canonicalize();
                    q.push_back(x);
                }
                ks.push_back(q);
            }
            r.kernels = ks;
        }
    } catch (const json::exception& e) {
        throw Error("ParseError", std::string("curve record: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw Error("ParseError", std::string("curve record: ") + e.what());
    }
    const auto& E = r.curve;
    if (E.conductor < 1) throw Error("InvalidModel", E.label + ": conductor must be positive");
    mpz_class disc = E.discriminant();
    if (disc == 0) throw Error("InvalidModel", E.label + ": singular Weierstrass model");
    for (auto [ell, e] : factor_small(E.conductor))
        if (mpz_mod(disc, ell) != 0)
            throw Error("InvalidModel", E.label + ": conductor prime " + std::to_string(ell) + " is a prime of good reduction");
    for (auto [ell, ap] : r.a_table) {
        if (!is_prime(ell)) throw Error("ParseError", E.label + ": a_l key " + std::to_string(ell) + " is not prime");
        if (ell <= kSpotCheckBound && E.a_ell(ell) != ap)
            throw Error("InconsistentAp", E.label + ": supplied a_" + std::to_string(ell) + " = " + std::to_string(ap) +
                                              " but point count gives " + std::to_string(E.a_ell(ell)));
    }
    return r;
}

std::string qpoly_string(const QPoly& q) {
    std::string s = "[";
    for (size_t i = 0; i < q.size(); ++i) s += (i ? ", " : "") + q[i].get_str();
    return s + "]";
}

void write_atomically(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    std::ostringstream tag;
    tag << std::this_thread::get_id();
    fs::path tmp = path;
    tmp += ".tmp." + tag.str();
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw Error("CacheError", "cannot write " + tmp.string());
        f << text;
    }
    fs::rename(tmp, path);
}

}  // namespace

int exit_code_for(const Error& e) {
    static const std::set<std::string> input{"InputError",      "ParseError",   "InvalidModel",     "InconsistentAp",
                                             "BadReductionAtP", "NotOrdinary",  "InvalidParameter", "InvalidConfig",
                                             "InvalidScenario", "InvalidPresentation"};
    return input.count(e.kind()) ? 3 : 2;
}

std::vector<CurveRecord> ingest_text(const std::string& text, const std::string& source) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error("ParseError", source + ": " + e.what());
    }
    const json* list = &j;
    if (j.is_object()) {
        if (!j.contains("curves")) throw Error("ParseError", source + ": expected a list or an object with \"curves\"");
        list = &j["curves"];
    }
    if (!list->is_array()) throw Error("ParseError", source + ": curve list is not an array");
    std::vector<CurveRecord> out;
    for (const auto& rec : *list) out.push_back(parse_record(rec, source));
    return out;
}

std::vector<CurveRecord> ingest(const std::string& path) { return ingest_text(read_file(path), path); }

std::map<i64, i64> complete_a_table(const CurveRecord& rec, i64 bound) {
    std::map<i64, i64> at;
    for (i64 ell : primes_up_to(bound)) {
        auto it = rec.a_table.find(ell);
        at[ell] = it != rec.a_table.end() ? it->second : rec.curve.a_ell(ell);
    }
    return at;
}

void apply_config_file(const std::string& path, RunConfig& cfg) {
    std::istringstream in(read_file(path));
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        size_t a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        bool quoted = false;
        for (size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') quoted = !quoted;
            if (line[i] == '#' && !quoted) {
                line.resize(i);
                break;
            }
        }
        line = trim(line);
        if (line.empty() || line.front() == '[') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw Error("InvalidConfig", path + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        if (val.size() >= 2 && val.front() == '"' && val.back() == '"') val = val.substr(1, val.size() - 2);
        std::replace(key.begin(), key.end(), '-', '_');
        try {
            if (key == "p") cfg.p = std::stoll(val);
            else if (key == "precision") cfg.precision = std::stoi(val);
            else if (key == "layers") cfg.layers = std::stoi(val);
            else if (key == "ell_bound") cfg.ell_bound = std::stoll(val);
            else if (key == "format") cfg.format = val;
            else if (key == "cache") cfg.cache_dir = val;
            else if (key == "verify_cache") cfg.verify_cache = (val == "true");
            else throw Error("InvalidConfig", path + ": unknown key '" + key + "'");
        } catch (const std::logic_error&) {
            throw Error("InvalidConfig", path + ": bad value for '" + key + "'");
        }
    }
}

namespace {

MazurTateElement cached_theta(const ManinSymbolSpace& S, const EigenSymbol& es, i64 p, int n, int N,
                              const std::string& label, const RunConfig& cfg, CurveReport& rep) {
    auto compute = [&] { return theta_element(S, es, p, n, N, label); };
    if (cfg.cache_dir.empty()) return compute();
    fs::path path = fs::path(cfg.cache_dir) / label / std::to_string(p) / ("theta_" + std::to_string(n) + ".json");
    std::string tag = label + "/" + std::to_string(p) + "/theta_" + std::to_string(n);
    if (fs::exists(path)) {
        std::string text = read_file(path.string());
        if (cfg.verify_cache) {
            auto fresh = compute();
            if (theta_to_json(fresh) != text) {
                rep.violations.push_back("cache mismatch for " + tag);
                rep.cache_events.push_back("mismatch " + tag);
                return fresh;
            }
            rep.cache_events.push_back("verified " + tag);
            return fresh;
        }
        try {
            auto t = theta_from_json(text);
            if (t.p == p && t.n == n && t.N == N && t.normalization_id == es.normalization_id) {
                rep.cache_events.push_back("hit " + tag);
                return t;
            }
        } catch (const std::exception&) {
            // unreadable entries are recomputed and replaced below
        }
        rep.cache_events.push_back("stale " + tag);
    } else {
        rep.cache_events.push_back("stored " + tag);
    }
    auto t = compute();
    write_atomically(path, theta_to_json(t));
    return t;
}

}  // namespace

CurveReport analyze(const CurveRecord& rec, const RunConfig& cfg) {
    const EllipticCurve& E = rec.curve;
    CurveReport rep;
    rep.label = E.label;
    rep.isogeny_class = E.isogeny_class();
    rep.ainvs = E.ainvs;
    rep.conductor = E.conductor;
    rep.p = rec.p.value_or(cfg.p);
    rep.precision = cfg.precision;
    rep.layers = cfg.layers;
    rep.ell_bound = cfg.ell_bound;
    i64 p = rep.p;
    if (p < 3 || !is_prime(p)) throw Error("InvalidParameter", E.label + ": p must be an odd prime");
    if (cfg.precision < 1 || cfg.layers < 1 || cfg.ell_bound < 2)
        throw Error("InvalidParameter", "precision, layers and ell-bound must be positive");
    if (E.conductor % p == 0)
        throw Error("BadReductionAtP", E.label + ": bad reduction at p = " + std::to_string(p) + " is not supported");
    rep.a_p = E.a_ell(p);
    if (mod_norm(rep.a_p, p) == 0) throw Error("NotOrdinary", E.label + ": a_p = 0 mod p");

    auto d = residual_descriptor(E, p, cfg.precision, cfg.ell_bound, rec.kernels);
    rep.reducible = d.reducible;
    rep.split = d.split;
    rep.classification = to_string(d.classification);
    if (d.reducible) {
        rep.ss_pair = "{" + character_name(*d.phi1) + ", " + character_name(*d.phi2) + "}";
        for (const auto& l : d.lines) rep.line_characters.push_back(character_name(l.chi));
        for (const auto& k : d.kernels) rep.kernel_polynomials.push_back(qpoly_string(k));
    }
    rep.alignment_degree = d.degree.n_max;
    rep.alignment_degree_kind = d.degree.kind;
    rep.alignment_evidence = d.degree.evidence;

    ManinSymbolSpace S(E.conductor);
    std::map<i64, i64> at = complete_a_table(rec, kSymbolEllBound);
    at.erase(p);
    auto es = eigen_symbol(S, E, at);
    rep.normalization_id = es.normalization_id;
    rep.symbol_at_zero = es.scale.get_str();
    int shift = denominator_shift(es, p);
    int Nw = working_precision(cfg.precision, cfg.layers, shift);
    rep.working_precision = Nw;
    auto alpha = hensel_unit_root(rep.a_p, p, Nw);
    std::vector<RegularizedL> Ls;
    auto prev = cached_theta(S, es, p, -1, Nw, E.label, cfg, rep);
    for (int n = 0; n <= cfg.layers; ++n) {
        auto th = cached_theta(S, es, p, n, Nw, E.label, cfg, rep);
        Ls.push_back(regularized_Lp(th, prev, alpha));
        prev = th;
    }
    try {
        auto inv = analytic_iwasawa_invariants(Ls);
        rep.mu = inv.mu;
        rep.lambda = inv.lambda;
        rep.stabilized_at = inv.stabilized_at;
        for (const auto& r : inv.per_layer)
            rep.per_layer.push_back(r.exhausted ? "n=" + std::to_string(r.layer) + ": vanishes at working precision"
                                                : "n=" + std::to_string(r.layer) + ": mu=" + std::to_string(r.ml.mu) +
                                                      " lambda=" + std::to_string(r.ml.lambda));
    } catch (const Error& e) {
        rep.violations.push_back(E.label + ": " + e.what());
        rep.mu = rep.lambda = rep.stabilized_at = -1;
    }
    rep.alignment_bound_holds = rep.mu < 0 || rep.alignment_degree <= rep.mu;
    if (!rep.alignment_bound_holds)
        rep.violations.push_back(E.label + ": alignment degree " + std::to_string(rep.alignment_degree) +
                                 " exceeds mu = " + std::to_string(rep.mu));
    return rep;
}

AnalysisReport analyze_all(const std::vector<CurveRecord>& recs, const RunConfig& cfg) {
    AnalysisReport out;
    std::vector<std::future<CurveReport>> jobs;
    for (const auto& r : recs) jobs.push_back(std::async(std::launch::async, [&r, &cfg] { return analyze(r, cfg); }));
    std::exception_ptr first;
    for (auto& j : jobs) {
        try {
            out.curves.push_back(j.get());
        } catch (...) {
            if (!first) first = std::current_exception();
        }
    }
    if (first) std::rethrow_exception(first);
    std::map<std::pair<std::string, i64>, std::vector<const CurveReport*>> classes;
    for (const auto& c : out.curves) {
        classes[{c.isogeny_class, c.p}].push_back(&c);
        out.violations.insert(out.violations.end(), c.violations.begin(), c.violations.end());
    }
    for (const auto& [key, members] : classes) {
        if (members.size() < 2) continue;
        std::string name = key.first + " at p=" + std::to_string(key.second);
        bool lam = std::all_of(members.begin(), members.end(),
                               [&](const CurveReport* c) { return c->lambda == members[0]->lambda; });
        bool ss = std::all_of(members.begin(), members.end(), [&](const CurveReport* c) {
            return c->reducible == members[0]->reducible && c->ss_pair == members[0]->ss_pair;
        });
        out.class_checks.push_back(name + ": lambda " + (lam ? "equal" : "DIFFERS") + ", semisimplification " +
                                   (ss ? "equal" : "DIFFERS") + " across " + std::to_string(members.size()) + " curves");
        if (!lam) out.violations.push_back(name + ": lambda differs within the isogeny class");
        if (!ss) out.violations.push_back(name + ": semisimplification differs within the isogeny class");
    }
    return out;
}

namespace {

json curve_json(const CurveReport& c) {
    json j;
    j["label"] = c.label;
    j["isogeny_class"] = c.isogeny_class;
    j["ainvs"] = c.ainvs;
    j["conductor"] = c.conductor;
    j["p"] = c.p;
    j["precision"] = {{"p", c.p},
                      {"N", c.precision},
                      {"n_max", c.layers},
                      {"ell_bound", c.ell_bound},
                      {"working_N", c.working_precision}};
    j["a_p"] = c.a_p;
    json res;
    res["reducible"] = c.reducible;
    if (c.reducible) {
        res["semisimplification"] = c.ss_pair;
        res["split"] = c.split;
        res["line_characters"] = c.line_characters;
        res["kernel_polynomials"] = c.kernel_polynomials;
    }
    res["classification"] = c.classification;
    res["alignment_degree"] = {{"n", c.alignment_degree},
                               {"kind", c.alignment_degree_kind},
                               {"evidence", c.alignment_evidence}};
    j["residual"] = res;
    j["iwasawa"] = {{"mu", c.mu},
                    {"lambda", c.lambda},
                    {"stabilized_at", c.stabilized_at},
                    {"layers", c.per_layer},
                    {"normalization_id", c.normalization_id},
                    {"symbol_at_zero", c.symbol_at_zero},
                    {"assumption", kMainConjectureFlag}};
    j["checks"] = {{"alignment_degree_le_mu", c.alignment_bound_holds}};
    return j;
}

}  // namespace

std::string report(const AnalysisReport& r, const std::string& format) {
    if (format == "json") {
        json j;
        j["tool"] = "mu-lab";
        j["assumptions"] = json::array({kMainConjectureFlag});
        j["curves"] = json::array();
        for (const auto& c : r.curves) j["curves"].push_back(curve_json(c));
        j["class_checks"] = r.class_checks;
        j["violations"] = r.violations;
        return j.dump(2) + "\n";
    }
    if (format != "table") throw Error("InvalidParameter", "format must be json or table");
    std::ostringstream o;
    auto row = [&](const std::vector<std::string>& cells) {
        static const int widths[] = {8, 3, 10, 14, 12, 7, 4, 4, 7, 6};
        for (size_t i = 0; i < cells.size(); ++i) o << std::left << std::setw(widths[i]) << cells[i] << " ";
        o << "\n";
    };
    row({"curve", "p", "reducible", "ss", "class", "align", "mu", "lam", "stable", "N"});
    for (const auto& c : r.curves) {
        row({c.label, std::to_string(c.p), c.reducible ? "yes" : "no", c.reducible ? c.ss_pair : "-", c.classification,
             std::to_string(c.alignment_degree), std::to_string(c.mu), std::to_string(c.lambda),
             "n=" + std::to_string(c.stabilized_at), std::to_string(c.precision)});
    }
    o << "assumption: " << kMainConjectureFlag << "\n";
    for (const auto& s : r.class_checks) o << "class check: " << s << "\n";
    if (r.violations.empty()) o << "violations: none\n";
    for (const auto& v : r.violations) o << "violation: " << v << "\n";
    return o.str();
}

}  // namespace mulab
