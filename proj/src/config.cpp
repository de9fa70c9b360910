#include "lvharvest/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "lvharvest/errors.hpp"

namespace lvharvest {

using nlohmann::json;

namespace {

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : keys) known = known || it.key() == k;
        if (!known) throw ParseError("unknown key \"" + it.key() + "\" at " + child(path, it.key()));
    }
}

const json& require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ParseError("expected an object at " + path);
    return j;
}

const json& require_array(const json& j, const std::string& path, std::size_t size = 0) {
    if (!j.is_array()) throw ParseError("expected an array at " + path);
    if (size != 0 && j.size() != size)
        throw ParseError("expected " + std::to_string(size) + " elements at " + path);
    return j;
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ParseError("expected a number at " + path);
    return j.get<double>();
}

std::uint64_t unsigned_int(const json& j, const std::string& path) {
    if (!j.is_number_unsigned()) throw ParseError("expected a non-negative integer at " + path);
    return j.get<std::uint64_t>();
}

Vec2 pair(const json& j, const std::string& path) {
    require_array(j, path, 2);
    return {number(j[0], child(path, 0)), number(j[1], child(path, 1))};
}

PeriodicFn parse_fn(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"constant", "harmonics", "table"});
    if (j.contains("table")) {
        if (j.contains("constant") || j.contains("harmonics"))
            throw ParseError("\"table\" excludes \"constant\" and \"harmonics\" at " + path);
        const std::string tpath = child(path, "table");
        const json& t = require_array(j["table"], tpath);
        std::vector<Sample> samples;
        for (std::size_t i = 0; i < t.size(); ++i) {
            const Vec2 p = pair(t[i], child(tpath, i));
            samples.push_back({p[0], p[1]});
        }
        try {
            return PeriodicFn::tabulated(std::move(samples));
        } catch (const std::invalid_argument& e) {
            throw ValidationError(std::string(e.what()) + " at " + tpath);
        }
    }
    const double c = j.contains("constant") ? number(j["constant"], child(path, "constant")) : 0.0;
    std::vector<Harmonic> terms;
    if (j.contains("harmonics")) {
        const std::string hpath = child(path, "harmonics");
        const json& hs = require_array(j["harmonics"], hpath);
        for (std::size_t i = 0; i < hs.size(); ++i) {
            const std::string p = child(hpath, i);
            const json& h = require_object(hs[i], p);
            reject_unknown(h, p, {"amp", "k", "phase", "kind"});
            if (!h.contains("amp")) throw ParseError("missing \"amp\" at " + p);
            Harmonic term;
            term.amplitude = number(h["amp"], child(p, "amp"));
            if (h.contains("k")) {
                if (!h["k"].is_number_integer()) throw ParseError("expected an integer at " + child(p, "k"));
                term.k = h["k"].get<int>();
                if (term.k <= 0) throw ValidationError("k must be a positive integer at " + child(p, "k"));
            }
            if (h.contains("phase")) term.phase = number(h["phase"], child(p, "phase"));
            if (h.contains("kind")) {
                const json& kind = h["kind"];
                const std::string kp = child(p, "kind");
                if (!kind.is_string()) throw ParseError("expected \"sin\" or \"cos\" at " + kp);
                const auto s = kind.get<std::string>();
                if (s == "sin" || s == "sine") term.kind = HarmonicKind::Sine;
                else if (s == "cos" || s == "cosine") term.kind = HarmonicKind::Cosine;
                else throw ParseError("expected \"sin\" or \"cos\" at " + kp);
            }
            terms.push_back(term);
        }
    }
    return PeriodicFn::harmonic(c, std::move(terms));
}

ModelParams parse_model(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"r", "alpha", "c"});
    for (const char* k : {"r", "alpha", "c"})
        if (!j.contains(k)) throw ParseError(std::string("missing \"") + k + "\" at " + path);
    ModelParams m;
    for (const char* name : {"r", "alpha"}) {
        const std::string p = child(path, name);
        const json& arr = require_array(j[name], p, 2);
        auto& dst = std::string(name) == "r" ? m.r : m.alpha;
        dst[0] = parse_fn(arr[0], child(p, 0));
        dst[1] = parse_fn(arr[1], child(p, 1));
    }
    const std::string cp = child(path, "c");
    const json& c = require_array(j["c"], cp, 2);
    m.c[0] = pair(c[0], child(cp, 0));
    m.c[1] = pair(c[1], child(cp, 1));
    validate(m);
    return m;
}

SimConfig parse_sim(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"dt", "t_end", "x0", "seed", "scheme", "record_stride", "floor"});
    SimConfig s;
    if (j.contains("dt")) s.dt = number(j["dt"], child(path, "dt"));
    if (j.contains("t_end")) s.t_end = number(j["t_end"], child(path, "t_end"));
    if (j.contains("x0")) s.x0 = pair(j["x0"], child(path, "x0"));
    if (j.contains("seed")) s.seed = unsigned_int(j["seed"], child(path, "seed"));
    if (j.contains("scheme")) {
        if (!j["scheme"].is_string()) throw ParseError("expected a string at " + child(path, "scheme"));
        try {
            s.scheme = scheme_from_string(j["scheme"].get<std::string>());
        } catch (const InvalidConfig& e) {
            throw ParseError(std::string(e.what()) + " at " + child(path, "scheme"));
        }
    }
    if (j.contains("record_stride"))
        s.record_stride = unsigned_int(j["record_stride"], child(path, "record_stride"));
    if (j.contains("floor")) s.floor = number(j["floor"], child(path, "floor"));
    return s;
}

void parse_ensemble(const json& j, const std::string& path, EnsembleConfig& e) {
    require_object(j, path);
    reject_unknown(j, path, {"n_paths", "master_seed", "burn_in", "threads"});
    if (j.contains("n_paths")) e.n_paths = unsigned_int(j["n_paths"], child(path, "n_paths"));
    if (j.contains("master_seed")) e.master_seed = unsigned_int(j["master_seed"], child(path, "master_seed"));
    if (j.contains("burn_in")) e.burn_in = number(j["burn_in"], child(path, "burn_in"));
    if (j.contains("threads"))
        e.threads = static_cast<unsigned>(unsigned_int(j["threads"], child(path, "threads")));
}

std::size_t line_of(std::string_view text, std::size_t byte, std::size_t& column) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    column = col;
    return line;
}

json fn_to_json(const PeriodicFn& f) {
    if (f.is_table()) {
        json t = json::array();
        for (const auto& s : f.table()) t.push_back({s.t, s.value});
        return {{"table", t}};
    }
    json hs = json::array();
    for (const auto& h : f.harmonics())
        hs.push_back({{"amp", h.amplitude},
                      {"k", h.k},
                      {"phase", h.phase},
                      {"kind", h.kind == HarmonicKind::Sine ? "sin" : "cos"}});
    return {{"constant", f.constant_term()}, {"harmonics", hs}};
}

}  // namespace

RunConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        std::size_t col = 0;
        const std::size_t line = line_of(text, e.byte > 0 ? e.byte - 1 : 0, col);
        throw ParseError("invalid JSON at line " + std::to_string(line) + ", column " +
                         std::to_string(col) + ": " + e.what());
    }
    require_object(doc, "/");
    reject_unknown(doc, "", {"model", "harvest", "sim", "ensemble", "output"});
    if (!doc.contains("model")) throw ParseError("missing \"model\" at /");

    RunConfig cfg;
    cfg.model = parse_model(doc["model"], "/model");
    if (doc.contains("harvest")) {
        const Vec2 h = pair(doc["harvest"], "/harvest");
        cfg.harvest = HarvestEffort(h);  // ValidationError on negative effort
    }
    if (doc.contains("sim")) cfg.sim = parse_sim(doc["sim"], "/sim");
    try {
        validate(cfg.sim);
    } catch (const InvalidConfig& e) {
        throw ValidationError(std::string(e.what()) + " at /sim");
    }
    cfg.ensemble.sim = cfg.sim;
    cfg.ensemble.master_seed = cfg.sim.seed;
    if (doc.contains("ensemble")) parse_ensemble(doc["ensemble"], "/ensemble", cfg.ensemble);
    if (cfg.ensemble.n_paths < 2) throw ValidationError("n_paths must be >= 2 at /ensemble/n_paths");
    if (!(cfg.ensemble.burn_in >= 0.0 && cfg.ensemble.burn_in < 1.0))
        throw ValidationError("burn_in must lie in [0,1) at /ensemble/burn_in");
    if (doc.contains("output")) {
        const json& o = require_object(doc["output"], "/output");
        reject_unknown(o, "/output", {"dir"});
        if (o.contains("dir")) {
            if (!o["dir"].is_string()) throw ParseError("expected a string at /output/dir");
            cfg.output.dir = o["dir"].get<std::string>();
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string to_json(const RunConfig& cfg, int indent) {
    const auto& m = cfg.model;
    json doc;
    doc["model"] = {{"r", {fn_to_json(m.r[0]), fn_to_json(m.r[1])}},
                    {"alpha", {fn_to_json(m.alpha[0]), fn_to_json(m.alpha[1])}},
                    {"c", {{m.c[0][0], m.c[0][1]}, {m.c[1][0], m.c[1][1]}}}};
    doc["harvest"] = {cfg.harvest[0], cfg.harvest[1]};
    doc["sim"] = {{"dt", cfg.sim.dt},
                  {"t_end", cfg.sim.t_end},
                  {"x0", {cfg.sim.x0[0], cfg.sim.x0[1]}},
                  {"seed", cfg.sim.seed},
                  {"scheme", std::string(to_string(cfg.sim.scheme))},
                  {"record_stride", cfg.sim.record_stride},
                  {"floor", cfg.sim.floor}};
    doc["ensemble"] = {{"n_paths", cfg.ensemble.n_paths},
                       {"master_seed", cfg.ensemble.master_seed},
                       {"burn_in", cfg.ensemble.burn_in},
                       {"threads", cfg.ensemble.threads}};
    if (!cfg.output.dir.empty()) doc["output"] = {{"dir", cfg.output.dir}};
    return doc.dump(indent);
}

}  // namespace lvharvest
