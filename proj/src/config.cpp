#include "ucw/config.hpp"

#include "ucw/errors.hpp"
#include "ucw/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace ucw::config {

const char* to_string(Command c) {
    switch (c) {
        case Command::dispersion_check: return "dispersion-check";
        case Command::solve: return "solve";
        case Command::lattice_count: return "lattice-count";
        case Command::frame_bounds: return "frame-bounds";
        case Command::certificate: return "certificate";
        case Command::dn: return "dn";
        case Command::zcs_dispersion: return "zcs-dispersion";
        case Command::rest_probe: return "rest-probe";
    }
    return "?";
}

std::optional<Command> command_from_string(const std::string& s) {
    static const std::map<std::string, Command> table = {
        {"dispersion-check", Command::dispersion_check},
        {"solve", Command::solve},
        {"lattice-count", Command::lattice_count},
        {"frame-bounds", Command::frame_bounds},
        {"certificate", Command::certificate},
        {"dn", Command::dn},
        {"zcs-dispersion", Command::zcs_dispersion},
        {"rest-probe", Command::rest_probe},
    };
    auto it = table.find(s);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

dispersion::Relation RelationSpec::build() const {
    if (family == "power") return dispersion::Relation::power(p.value());
    if (family == "transport") return dispersion::Relation::transport(c.value());
    if (family == "schrodinger") return dispersion::Relation::schrodinger();
    if (family == "kdv_linear") return dispersion::Relation::kdv_linear();
    if (family == "gravity_capillary")
        return dispersion::Relation::gravity_capillary(g.value(), S.value(), H.value());
    throw ucw::invalid_argument("unknown relation family: " + family);
}

std::string RelationSpec::label() const {
    std::ostringstream os;
    os << family;
    if (p) os << " p=" << *p;
    if (c) os << " c=" << *c;
    if (g) os << " g=" << *g;
    if (S) os << " S=" << *S;
    if (H) os << " H=" << *H;
    return os.str();
}

observability::SpaceTimeDomain DomainSpec::build() const {
    return observability::SpaceTimeDomain(rects, t_max);
}

namespace {

struct KeyValue {
    std::string key;
    std::vector<std::string> values;
    int line;
    bool used = false;
};

struct Section {
    std::string name;
    int line;
    std::vector<KeyValue> entries;
    bool used = false;
};

std::vector<std::string> split_tokens(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<Section> tokenize(const std::string& text, std::vector<ConfigError>& errors) {
    std::vector<Section> sections;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.resize(hash);
        const std::string line = strip(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                errors.push_back({lineno, "malformed section header"});
                continue;
            }
            sections.push_back({strip(line.substr(1, line.size() - 2)), lineno, {}, false});
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back({lineno, "expected 'key = value'"});
            continue;
        }
        if (sections.empty()) {
            errors.push_back({lineno, "key outside any [section]"});
            continue;
        }
        KeyValue kv;
        kv.key = strip(line.substr(0, eq));
        kv.values = split_tokens(line.substr(eq + 1));
        kv.line = lineno;
        if (kv.key.empty()) {
            errors.push_back({lineno, "empty key"});
            continue;
        }
        sections.back().entries.push_back(std::move(kv));
    }
    return sections;
}

// Typed key access over one section; unconsumed keys are reported by finish().
class Reader {
public:
    Reader(Section& sec, std::vector<ConfigError>& errors) : sec_(sec), errors_(errors) {
        sec_.used = true;
    }

    bool has(const std::string& key) const {
        return std::any_of(sec_.entries.begin(), sec_.entries.end(),
                           [&](const KeyValue& kv) { return kv.key == key; });
    }

    KeyValue* find(const std::string& key) {
        KeyValue* found = nullptr;
        for (auto& kv : sec_.entries) {
            if (kv.key != key) continue;
            if (found) {
                errors_.push_back({kv.line, "duplicate key '" + key + "'"});
                kv.used = true;
            } else {
                found = &kv;
            }
        }
        return found;
    }

    std::optional<std::string> opt_string(const std::string& key) {
        KeyValue* kv = find(key);
        if (!kv) return std::nullopt;
        kv->used = true;
        if (kv->values.size() != 1) {
            errors_.push_back({kv->line, "key '" + key + "' expects a single value"});
            return std::nullopt;
        }
        return kv->values[0];
    }

    std::optional<double> opt_double(const std::string& key) {
        KeyValue* kv = find(key);
        if (!kv) return std::nullopt;
        kv->used = true;
        if (kv->values.size() != 1) {
            errors_.push_back({kv->line, "key '" + key + "' expects a single number"});
            return std::nullopt;
        }
        return parse_double(kv->values[0], kv->line, key);
    }

    std::optional<long long> opt_int(const std::string& key) {
        KeyValue* kv = find(key);
        if (!kv) return std::nullopt;
        kv->used = true;
        if (kv->values.size() != 1) {
            errors_.push_back({kv->line, "key '" + key + "' expects a single integer"});
            return std::nullopt;
        }
        return parse_int(kv->values[0], kv->line, key);
    }

    std::optional<bool> opt_bool(const std::string& key) {
        auto s = opt_string(key);
        if (!s) return std::nullopt;
        if (*s == "true") return true;
        if (*s == "false") return false;
        errors_.push_back({sec_.line, "key '" + key + "' expects true or false"});
        return std::nullopt;
    }

    std::vector<double> doubles(const std::string& key) {
        KeyValue* kv = find(key);
        std::vector<double> out;
        if (!kv) return out;
        kv->used = true;
        for (const auto& v : kv->values) {
            auto d = parse_double(v, kv->line, key);
            if (d) out.push_back(*d);
        }
        return out;
    }

    std::vector<long long> ints(const std::string& key) {
        KeyValue* kv = find(key);
        std::vector<long long> out;
        if (!kv) return out;
        kv->used = true;
        for (const auto& v : kv->values) {
            auto d = parse_int(v, kv->line, key);
            if (d) out.push_back(*d);
        }
        return out;
    }

    // All occurrences of a repeatable key, token lists per occurrence.
    std::vector<KeyValue*> repeated(const std::string& key) {
        std::vector<KeyValue*> out;
        for (auto& kv : sec_.entries)
            if (kv.key == key) {
                kv.used = true;
                out.push_back(&kv);
            }
        return out;
    }

    void require(const std::string& key, const char* what) {
        if (!has(key))
            errors_.push_back({sec_.line, std::string("missing key '") + key + "' (" + what +
                                              ") in [" + sec_.name + "]"});
    }

    int line() const { return sec_.line; }
    const std::string& name() const { return sec_.name; }

    void error(const std::string& msg) { errors_.push_back({sec_.line, msg}); }
    void error_at(int line, const std::string& msg) { errors_.push_back({line, msg}); }

    void finish() {
        for (const auto& kv : sec_.entries)
            if (!kv.used)
                errors_.push_back({kv.line, "unknown key '" + kv.key + "' in [" + sec_.name + "]"});
    }

private:
    std::optional<double> parse_double(const std::string& tok, int line, const std::string& key) {
        try {
            size_t pos = 0;
            const double v = std::stod(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            errors_.push_back({line, "key '" + key + "': '" + tok + "' is not a number"});
            return std::nullopt;
        }
    }

    std::optional<long long> parse_int(const std::string& tok, int line, const std::string& key) {
        long long v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size()) {
            errors_.push_back({line, "key '" + key + "': '" + tok + "' is not an integer"});
            return std::nullopt;
        }
        return v;
    }

    Section& sec_;
    std::vector<ConfigError>& errors_;
};

RelationSpec read_relation(Reader& r, std::vector<ConfigError>& errors) {
    RelationSpec spec;
    spec.line = r.line();
    auto fam = r.opt_string("family");
    if (!fam) {
        errors.push_back({r.line(), "missing key 'family' in [" + r.name() + "]"});
        spec.family = "invalid";
        return spec;
    }
    spec.family = *fam;
    if (spec.family == "power") {
        spec.p = r.opt_double("p");
        if (!spec.p) errors.push_back({r.line(), "power relation: missing key 'p'"});
        else if (!(*spec.p > 0.0)) errors.push_back({r.line(), "power relation: p must be > 0"});
    } else if (spec.family == "transport") {
        spec.c = r.opt_double("c");
        if (!spec.c) errors.push_back({r.line(), "transport relation: missing key 'c'"});
    } else if (spec.family == "schrodinger" || spec.family == "kdv_linear") {
        // no parameters
    } else if (spec.family == "gravity_capillary") {
        spec.g = r.opt_double("g");
        spec.S = r.opt_double("S");
        spec.H = r.opt_double("H");
        if (!spec.g) errors.push_back({r.line(), "gravity_capillary: missing key 'g'"});
        if (!spec.S) errors.push_back({r.line(), "gravity_capillary: missing key 'S'"});
        if (!spec.H) errors.push_back({r.line(), "gravity_capillary: missing key 'H'"});
        if (spec.g && *spec.g < 0.0)
            errors.push_back({r.line(), "gravity_capillary: g must be >= 0"});
        if (spec.S && *spec.S < 0.0)
            errors.push_back({r.line(), "gravity_capillary: S must be >= 0"});
        if (spec.H && !(*spec.H > 0.0))
            errors.push_back({r.line(), "gravity_capillary: H must be > 0"});
        if (spec.g && spec.S && !(*spec.g + *spec.S > 0.0))
            errors.push_back({r.line(), "gravity_capillary: g + S must be > 0"});
    } else {
        errors.push_back({r.line(), "unknown relation family '" + spec.family + "'"});
    }
    return spec;
}

DomainSpec read_domain(Reader& r, std::vector<ConfigError>& errors) {
    DomainSpec dom;
    auto tmax = r.opt_double("t_max");
    if (!tmax) {
        errors.push_back({r.line(), "missing key 't_max' in [domain]"});
    } else if (!(*tmax > 0.0)) {
        errors.push_back({r.line(), "[domain] t_max must be > 0"});
    } else {
        dom.t_max = *tmax;
    }
    auto rect_kvs = r.repeated("rect");
    for (KeyValue* kv : rect_kvs) {
        if (kv->values.size() != 4) {
            errors.push_back({kv->line, "rect expects 4 numbers: x0 x1 t0 t1"});
            continue;
        }
        double v[4];
        bool ok = true;
        for (int i = 0; i < 4; ++i) {
            try {
                size_t pos = 0;
                v[i] = std::stod(kv->values[static_cast<size_t>(i)], &pos);
                if (pos != kv->values[static_cast<size_t>(i)].size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                errors.push_back({kv->line, "rect: '" + kv->values[static_cast<size_t>(i)] +
                                                "' is not a number"});
                ok = false;
            }
        }
        if (!ok) continue;
        observability::Rect rect{v[0], v[1], v[2], v[3]};
        const size_t index = dom.rects.size();
        if (!(rect.x0 < rect.x1))
            errors.push_back({kv->line, "rect " + std::to_string(index) + ": x1 must exceed x0"});
        if (!(rect.t0 < rect.t1))
            errors.push_back({kv->line, "rect " + std::to_string(index) + ": t1 must exceed t0"});
        dom.rects.push_back(rect);
    }
    if (dom.rects.empty())
        errors.push_back({r.line(), "[domain] needs at least one 'rect = x0 x1 t0 t1'"});
    return dom;
}

using SectionMap = std::map<std::string, std::vector<Section*>>;

SectionMap index_sections(std::vector<Section>& sections) {
    SectionMap map;
    for (auto& s : sections) map[s.name].push_back(&s);
    return map;
}

Section* unique_section(SectionMap& map, const std::string& name,
                        std::vector<ConfigError>& errors, bool required) {
    auto it = map.find(name);
    if (it == map.end() || it->second.empty()) {
        if (required) errors.push_back({0, "missing required section [" + name + "]"});
        return nullptr;
    }
    if (it->second.size() > 1)
        errors.push_back({it->second[1]->line, "section [" + name + "] given more than once"});
    return it->second.front();
}

void check_superfluous(const std::vector<Section>& sections, std::vector<ConfigError>& errors) {
    for (const auto& s : sections) {
        if (!s.used) {
            errors.push_back({s.line, "unknown section [" + s.name + "] for this command"});
            continue;
        }
        for (const auto& kv : s.entries)
            if (!kv.used)
                errors.push_back({kv.line, "unknown key '" + kv.key + "' in [" + s.name + "]"});
    }
}

DispersionCheckCfg read_dispersion_check(SectionMap& map, std::vector<ConfigError>& errors) {
    DispersionCheckCfg cfg;
    if (Section* s = unique_section(map, "relation", errors, true)) {
        Reader r(*s, errors);
        cfg.relation = read_relation(r, errors);
        r.finish();
    }
    if (Section* s = unique_section(map, "superlinearity", errors, true)) {
        Reader r(*s, errors);
        auto kmax = r.opt_double("k_max");
        if (!kmax)
            errors.push_back({r.line(), "missing key 'k_max' in [superlinearity]"});
        else if (!(*kmax >= 64.0))
            errors.push_back({r.line(), "k_max must be >= 64"});
        else
            cfg.k_max = *kmax;
        cfg.expect_verdict = r.opt_string("expect");
        if (cfg.expect_verdict && *cfg.expect_verdict != "SUPERLINEAR" &&
            *cfg.expect_verdict != "NOT_SUPERLINEAR" && *cfg.expect_verdict != "INCONCLUSIVE")
            errors.push_back({r.line(), "expect must be SUPERLINEAR, NOT_SUPERLINEAR or "
                                        "INCONCLUSIVE"});
        r.finish();
    }
    if (Section* s = unique_section(map, "symbol-bound", errors, false)) {
        Reader r(*s, errors);
        cfg.bound_m = r.opt_double("m");
        cfg.bound_C = r.opt_double("C");
        cfg.bound_samples = r.doubles("samples");
        cfg.bound_expect = r.opt_bool("expect");
        if (cfg.bound_samples.empty())
            errors.push_back({r.line(), "[symbol-bound] needs 'samples = k1 k2 ...'"});
        if (cfg.bound_expect && !cfg.bound_C)
            errors.push_back({r.line(), "[symbol-bound] 'expect' requires 'C'"});
        r.finish();
    }
    return cfg;
}

SolveCfg read_solve(SectionMap& map, std::vector<ConfigError>& errors) {
    SolveCfg cfg;
    auto it = map.find("case");
    if (it == map.end()) {
        errors.push_back({0, "solve requires at least one [case] section"});
        return cfg;
    }
    for (Section* s : it->second) {
        Reader r(*s, errors);
        SolveCase sc;
        sc.relation = read_relation(r, errors);
        auto n = r.opt_int("truncation_n");
        if (!n)
            r.require("truncation_n", "mode truncation");
        else if (*n < 0)
            r.error("truncation_n must be >= 0");
        else
            sc.truncation_n = static_cast<int>(*n);
        auto t = r.opt_double("t");
        if (!t)
            r.require("t", "evolution time");
        else
            sc.t = *t;
        auto init = r.opt_string("init");
        sc.init = init.value_or("");
        if (sc.init != "random" && sc.init != "coeffs" && sc.init != "file")
            r.error("init must be one of random, coeffs, file");
        if (auto seed = r.opt_int("seed")) sc.seed = static_cast<uint64_t>(*seed);
        for (KeyValue* kv : r.repeated("coeff")) {
            if (kv->values.size() != 3) {
                r.error_at(kv->line, "coeff expects 3 numbers: k re im");
                continue;
            }
            try {
                sc.coeffs.push_back({std::stod(kv->values[0]), std::stod(kv->values[1]),
                                     std::stod(kv->values[2])});
            } catch (const std::exception&) {
                r.error_at(kv->line, "coeff: values must be numeric");
            }
        }
        if (auto f = r.opt_string("file")) sc.file = *f;
        if (sc.init == "coeffs" && sc.coeffs.empty())
            r.error("init = coeffs requires at least one 'coeff = k re im'");
        if (sc.init == "file" && sc.file.empty()) r.error("init = file requires 'file = path'");
        sc.unitarity_tol = r.opt_double("unitarity_tol");
        r.finish();
        cfg.cases.push_back(std::move(sc));
    }
    if (Section* s = unique_section(map, "grid", errors, false)) {
        Reader r(*s, errors);
        if (auto nx = r.opt_int("nx")) cfg.grid_nx = static_cast<int>(*nx);
        if (auto nt = r.opt_int("nt")) cfg.grid_nt = static_cast<int>(*nt);
        if (auto t0 = r.opt_double("t0")) cfg.grid_t0 = *t0;
        if (auto t1 = r.opt_double("t1")) cfg.grid_t1 = *t1;
        if (cfg.grid_nt < 1) r.error("[grid] nt must be >= 1");
        r.finish();
    }
    for (size_t i = 0; i < cfg.cases.size(); ++i) {
        const SolveCase& sc = cfg.cases[i];
        for (const auto& coeff : sc.coeffs) {
            if (coeff[0] != std::floor(coeff[0]) || std::abs(coeff[0]) > sc.truncation_n)
                errors.push_back({0, "case " + std::to_string(i + 1) +
                                         ": coeff mode k must be an integer with |k| <= "
                                         "truncation_n"});
        }
        if (cfg.grid_nx && *cfg.grid_nx < 2 * sc.truncation_n + 1)
            errors.push_back({0, "case " + std::to_string(i + 1) +
                                     ": [grid] nx must be >= 2*truncation_n + 1"});
    }
    return cfg;
}

LatticeCountCfg read_lattice_count(SectionMap& map, std::vector<ConfigError>& errors) {
    LatticeCountCfg cfg;
    const bool has_lattice = map.count("lattice") > 0;
    if (Section* s = unique_section(map, "lattice", errors, false)) {
        Reader r(*s, errors);
        auto n = r.opt_int("truncation_n");
        if (!n)
            r.require("truncation_n", "lattice truncation");
        else if (*n < 1)
            r.error("truncation_n must be >= 1");
        else
            cfg.truncation_n = static_cast<int>(*n);
        cfg.radii = r.doubles("radii");
        if (cfg.radii.empty()) r.error("[lattice] needs 'radii = r1 r2 ...'");
        for (size_t i = 0; i + 1 < cfg.radii.size(); ++i)
            if (!(cfg.radii[i] < cfg.radii[i + 1])) r.error("radii must be strictly increasing");
        if (!cfg.radii.empty() && cfg.truncation_n > 0 &&
            !(cfg.radii.back() <= cfg.truncation_n / 4.0))
            r.error("max radius must be <= truncation_n / 4");
        r.finish();
    }
    if (auto it = map.find("case"); it != map.end()) {
        if (!has_lattice)
            errors.push_back({it->second.front()->line,
                              "[case] sections require a [lattice] section"});
        for (Section* s : it->second) {
            Reader r(*s, errors);
            LatticeCountCase lc;
            lc.relation = read_relation(r, errors);
            lc.expect_verdict = r.opt_string("expect");
            if (lc.expect_verdict && *lc.expect_verdict != "PASS" &&
                *lc.expect_verdict != "FAIL" && *lc.expect_verdict != "INCONCLUSIVE")
                r.error("expect must be PASS, FAIL or INCONCLUSIVE");
            lc.final_ratio_max_frac = r.opt_double("final_ratio_max_frac");
            lc.tail_mean = r.opt_double("tail_mean");
            lc.tail_mean_tol = r.opt_double("tail_mean_tol");
            r.finish();
            cfg.cases.push_back(std::move(lc));
        }
    }
    if (Section* s = unique_section(map, "annulus", errors, false)) {
        Reader r(*s, errors);
        AnnulusCfg an;
        auto rr = r.opt_double("r");
        if (!rr)
            r.require("r", "annulus half-width");
        else if (!(*rr > 0.0))
            r.error("[annulus] r must be > 0");
        else
            an.r = *rr;
        an.x_abs = r.doubles("x_abs");
        if (an.x_abs.empty()) r.error("[annulus] needs 'x_abs = v1 v2 ...'");
        for (size_t i = 0; i + 1 < an.x_abs.size(); ++i)
            if (!(an.x_abs[i] < an.x_abs[i + 1])) r.error("x_abs must be strictly increasing");
        for (double x : an.x_abs)
            if (!(x > an.r)) r.error("each x_abs must exceed r");
        an.limit_tol = r.opt_double("limit_tol");
        if (auto m = r.opt_bool("check_monotone")) an.check_monotone = *m;
        r.finish();
        cfg.annulus = std::move(an);
    }
    if (cfg.cases.empty() && !cfg.annulus)
        errors.push_back({0, "lattice-count needs [case] sections and/or an [annulus] section"});
    if (!cfg.cases.empty() && !has_lattice)
        errors.push_back({0, "missing required section [lattice]"});
    return cfg;
}

FrameBoundsCfg read_frame_bounds(SectionMap& map, std::vector<ConfigError>& errors) {
    FrameBoundsCfg cfg;
    if (Section* s = unique_section(map, "relation", errors, true)) {
        Reader r(*s, errors);
        cfg.relation = read_relation(r, errors);
        r.finish();
    }
    if (Section* s = unique_section(map, "lattice", errors, true)) {
        Reader r(*s, errors);
        auto n = r.opt_int("truncation_n");
        if (!n)
            r.require("truncation_n", "lattice truncation");
        else if (*n < 0 || 2 * *n + 1 > 4097)
            r.error("truncation_n must be in [0, 2048]");
        else
            cfg.truncation_n = static_cast<int>(*n);
        r.finish();
    }
    if (Section* s = unique_section(map, "domain", errors, true)) {
        Reader r(*s, errors);
        cfg.domain = read_domain(r, errors);
        r.finish();
    }
    if (Section* s = unique_section(map, "check", errors, false)) {
        Reader r(*s, errors);
        cfg.expect_d_minus = r.opt_double("expect_d_minus");
        cfg.expect_d_plus = r.opt_double("expect_d_plus");
        cfg.bounds_tol = r.opt_double("bounds_tol");
        cfg.identity_scale = r.opt_double("identity_scale");
        cfg.identity_tol = r.opt_double("identity_tol");
        if (cfg.identity_scale && !cfg.identity_tol)
            r.error("identity_scale requires identity_tol");
        r.finish();
    }
    if (Section* s = unique_section(map, "sandwich", errors, false)) {
        Reader r(*s, errors);
        SandwichCfg sw;
        if (auto v = r.opt_int("vectors")) sw.vectors = static_cast<int>(*v);
        if (auto v = r.opt_int("seed")) sw.seed = static_cast<uint64_t>(*v);
        if (auto v = r.opt_int("quadrature_n")) sw.quadrature_n = static_cast<int>(*v);
        if (sw.vectors < 1) r.error("[sandwich] vectors must be >= 1");
        if (sw.quadrature_n < 8) r.error("[sandwich] quadrature_n must be >= 8");
        r.finish();
        cfg.sandwich = sw;
    }
    return cfg;
}

CertificateCfg read_certificate(SectionMap& map, std::vector<ConfigError>& errors) {
    CertificateCfg cfg;
    if (Section* s = unique_section(map, "relation", errors, true)) {
        Reader r(*s, errors);
        cfg.relation = read_relation(r, errors);
        r.finish();
    }
    if (Section* s = unique_section(map, "lattice", errors, true)) {
        Reader r(*s, errors);
        auto list = r.ints("n_list");
        if (list.empty()) r.require("n_list", "increasing truncation list");
        for (long long n : list) {
            if (n < 0 || 2 * n + 1 > 4097) r.error("n_list entries must be in [0, 2048]");
            cfg.n_list.push_back(static_cast<int>(n));
        }
        for (size_t i = 0; i + 1 < cfg.n_list.size(); ++i)
            if (!(cfg.n_list[i] < cfg.n_list[i + 1])) r.error("n_list must be increasing");
        r.finish();
    }
    if (Section* s = unique_section(map, "domain", errors, true)) {
        Reader r(*s, errors);
        cfg.domain = read_domain(r, errors);
        r.finish();
    }
    if (Section* s = unique_section(map, "check", errors, false)) {
        Reader r(*s, errors);
        if (auto v = r.opt_double("interlace_tol")) cfg.interlace_tol = *v;
        r.finish();
    }
    if (Section* s = unique_section(map, "contrast", errors, false)) {
        Reader r(*s, errors);
        ContrastCfg ct;
        ct.relation = read_relation(r, errors);
        if (auto v = r.opt_double("min_ratio_factor")) ct.min_ratio_factor = *v;
        ct.expect_ratio_base = r.opt_double("expect_ratio_base");
        ct.expect_ratio_contrast = r.opt_double("expect_ratio_contrast");
        if (auto v = r.opt_double("regression_rel_tol")) ct.regression_rel_tol = *v;
        if (auto v = r.opt_bool("contrast_ratio_is_upper_bound"))
            ct.contrast_ratio_is_upper_bound = *v;
        r.finish();
        cfg.contrast = std::move(ct);
    }
    return cfg;
}

DnCfg read_dn(SectionMap& map, std::vector<ConfigError>& errors) {
    DnCfg cfg;
    auto it = map.find("case");
    if (it == map.end()) {
        errors.push_back({0, "dn requires at least one [case] section"});
        return cfg;
    }
    for (Section* s : it->second) {
        Reader r(*s, errors);
        DnCase dc;
        auto H = r.opt_double("H");
        if (!H)
            r.require("H", "flat depth");
        else if (!(*H > 0.0))
            r.error("H must be > 0");
        else
            dc.H = *H;
        auto k = r.opt_int("k");
        if (!k)
            r.require("k", "test mode");
        else
            dc.k = static_cast<int>(*k);
        for (long long gsz : r.ints("grids")) {
            if (gsz < 8) r.error("grids entries must be >= 8");
            dc.grids.push_back(static_cast<int>(gsz));
        }
        if (dc.grids.empty()) r.error("needs 'grids = n1 n2 ...'");
        if (auto v = r.opt_double("eta_amp")) dc.eta_amp = *v;
        if (auto v = r.opt_double("b_amp")) dc.b_amp = *v;
        if (auto v = r.opt_int("eta_mode")) dc.eta_mode = static_cast<int>(*v);
        if (auto v = r.opt_int("b_mode")) dc.b_mode = static_cast<int>(*v);
        dc.expect_final_error_max = r.opt_double("final_error_max");
        dc.ratio_lo = r.opt_double("ratio_lo");
        dc.ratio_hi = r.opt_double("ratio_hi");
        dc.selfadjoint_tol = r.opt_double("selfadjoint_tol");
        dc.kernel_tol = r.opt_double("kernel_tol");
        dc.positivity_floor = r.opt_double("positivity_floor");
        if (auto v = r.opt_int("random_phis")) dc.random_phis = static_cast<int>(*v);
        if (auto v = r.opt_int("seed")) dc.seed = static_cast<uint64_t>(*v);
        if ((dc.ratio_lo && !dc.ratio_hi) || (dc.ratio_hi && !dc.ratio_lo))
            r.error("ratio_lo and ratio_hi must be given together");
        r.finish();
        cfg.cases.push_back(std::move(dc));
    }
    return cfg;
}

ZcsDispersionCfg read_zcs(SectionMap& map, std::vector<ConfigError>& errors) {
    ZcsDispersionCfg cfg;
    auto it = map.find("case");
    if (it == map.end()) {
        errors.push_back({0, "zcs-dispersion requires at least one [case] section"});
        return cfg;
    }
    for (Section* s : it->second) {
        Reader r(*s, errors);
        ZcsCase zc;
        if (auto v = r.opt_int("k")) zc.k = static_cast<int>(*v);
        if (auto v = r.opt_double("H")) zc.H = *v;
        if (auto v = r.opt_double("g")) zc.g = *v;
        if (auto v = r.opt_int("nx")) zc.nx = static_cast<int>(*v);
        if (auto v = r.opt_int("nz")) zc.nz = static_cast<int>(*v);
        if (auto v = r.opt_double("dt")) zc.dt = *v;
        if (auto v = r.opt_int("steps")) zc.steps = static_cast<int>(*v);
        if (auto v = r.opt_double("amplitude")) zc.amplitude = *v;
        zc.expect_omega = r.opt_double("expect_omega");
        zc.rel_tol = r.opt_double("rel_tol");
        if (zc.k < 1) r.error("k must be >= 1");
        if (!(zc.H > 0.0)) r.error("H must be > 0");
        if (!(zc.g > 0.0)) r.error("g must be > 0");
        if (!(zc.dt > 0.0)) r.error("dt must be > 0");
        if (zc.steps < 10) r.error("steps must be >= 10");
        if (!(zc.amplitude > 0.0 && zc.amplitude <= 1e-6))
            r.error("amplitude must be in (0, 1e-6]");
        r.finish();
        cfg.cases.push_back(zc);
    }
    if (Section* s = unique_section(map, "check", errors, false)) {
        Reader r(*s, errors);
        auto pair = r.ints("scaling_cases");
        if (!pair.empty()) {
            if (pair.size() != 2)
                r.error("scaling_cases expects two 1-based case indices");
            else {
                for (long long idx : pair)
                    if (idx < 1 || idx > static_cast<long long>(cfg.cases.size()))
                        r.error("scaling_cases index out of range");
                if (pair.size() == 2)
                    cfg.scaling_cases = {static_cast<int>(pair[0]), static_cast<int>(pair[1])};
            }
        }
        if (auto v = r.opt_double("scaling_factor")) cfg.scaling_factor = *v;
        if (auto v = r.opt_double("scaling_tol")) cfg.scaling_tol = *v;
        r.finish();
    }
    return cfg;
}

RestProbeCfg read_rest_probe(SectionMap& map, std::vector<ConfigError>& errors) {
    RestProbeCfg cfg;
    if (Section* s = unique_section(map, "fluid", errors, true)) {
        Reader r(*s, errors);
        if (auto v = r.opt_double("H0")) cfg.H0 = *v;
        if (auto v = r.opt_int("nx")) cfg.nx = static_cast<int>(*v);
        if (auto v = r.opt_int("nz")) cfg.nz = static_cast<int>(*v);
        if (auto v = r.opt_double("g")) cfg.g = *v;
        if (auto v = r.opt_double("h_min")) cfg.h_min = *v;
        if (!(cfg.H0 > 0.0)) r.error("H0 must be > 0");
        if (cfg.nx < 8) r.error("nx must be >= 8");
        if (cfg.nz < 8) r.error("nz must be >= 8");
        r.finish();
    }
    if (Section* s = unique_section(map, "bump", errors, false)) {
        Reader r(*s, errors);
        if (auto v = r.opt_double("amp")) cfg.bump_amp = *v;
        if (auto v = r.opt_double("center")) cfg.bump_center = *v;
        if (auto v = r.opt_double("width")) cfg.bump_width = *v;
        if (!(cfg.bump_width > 0.0)) r.error("[bump] width must be > 0");
        r.finish();
    }
    if (Section* s = unique_section(map, "probe", errors, true)) {
        Reader r(*s, errors);
        auto window = r.doubles("window");
        if (window.size() != 2 || !(window[0] < window[1]))
            r.error("[probe] window expects 'window = x0 x1' with x0 < x1");
        else {
            cfg.window_x0 = window[0];
            cfg.window_x1 = window[1];
        }
        if (auto v = r.opt_double("tol")) cfg.tol = *v;
        if (auto v = r.opt_double("T")) cfg.T = *v;
        if (auto v = r.opt_double("dt")) cfg.dt = *v;
        if (!(cfg.tol >= 0.0)) r.error("[probe] tol must be >= 0");
        if (!(cfg.T > 0.0 && cfg.dt > 0.0 && cfg.dt <= cfg.T))
            r.error("[probe] requires 0 < dt <= T");
        r.finish();
    }
    if (Section* s = unique_section(map, "check", errors, false)) {
        Reader r(*s, errors);
        cfg.max_activity = r.opt_double("max_activity");
        cfg.expect_activation = r.opt_bool("expect_activation");
        r.finish();
    }
    return cfg;
}

} // namespace

ParseResult parse_config(const std::string& text) {
    ParseResult result;
    std::vector<Section> sections = tokenize(text, result.errors);
    SectionMap map = index_sections(sections);

    ExperimentConfig cfg;
    cfg.source_text = text;

    Command command{};
    bool have_command = false;
    if (Section* s = unique_section(map, "run", result.errors, true)) {
        Reader r(*s, result.errors);
        auto cmd = r.opt_string("command");
        if (!cmd) {
            result.errors.push_back({r.line(), "missing key 'command' in [run]"});
        } else if (auto parsed = command_from_string(*cmd)) {
            command = *parsed;
            have_command = true;
        } else {
            result.errors.push_back({r.line(), "unknown command '" + *cmd + "'"});
        }
        if (auto out = r.opt_string("out")) cfg.out_dir = *out;
        if (auto th = r.opt_int("threads")) {
            if (*th < 1)
                r.error("threads must be >= 1");
            else
                cfg.threads = static_cast<int>(*th);
        }
        r.finish();
    }
    if (!have_command) {
        check_superfluous(sections, result.errors);
        return result;
    }
    cfg.command = command;

    switch (command) {
        case Command::dispersion_check: cfg.payload = read_dispersion_check(map, result.errors); break;
        case Command::solve: cfg.payload = read_solve(map, result.errors); break;
        case Command::lattice_count: cfg.payload = read_lattice_count(map, result.errors); break;
        case Command::frame_bounds: cfg.payload = read_frame_bounds(map, result.errors); break;
        case Command::certificate: cfg.payload = read_certificate(map, result.errors); break;
        case Command::dn: cfg.payload = read_dn(map, result.errors); break;
        case Command::zcs_dispersion: cfg.payload = read_zcs(map, result.errors); break;
        case Command::rest_probe: cfg.payload = read_rest_probe(map, result.errors); break;
    }

    check_superfluous(sections, result.errors);
    if (result.errors.empty()) result.config = std::move(cfg);
    return result;
}

ParseResult parse_config_file(const std::filesystem::path& path) {
    std::string text;
    try {
        text = io::read_text(path);
    } catch (const std::exception& e) {
        ParseResult r;
        r.errors.push_back({0, e.what()});
        return r;
    }
    return parse_config(text);
}

} // namespace ucw::config
