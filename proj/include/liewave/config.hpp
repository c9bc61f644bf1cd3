#pragma once

#include <cstdint>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "liewave/evolution.hpp"
#include "liewave/presets.hpp"

namespace liewave {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Experiment {
    PlancherelCheck,
    LinearDecay,
    L1Experiment,
    Semilinear,
    GnCheck,
    MultiplierCheck,
};

inline const char* experiment_name(Experiment e) {
    switch (e) {
        case Experiment::PlancherelCheck: return "plancherel_check";
        case Experiment::LinearDecay: return "linear_decay";
        case Experiment::L1Experiment: return "l1_experiment";
        case Experiment::Semilinear: return "semilinear";
        case Experiment::GnCheck: return "gn_check";
        case Experiment::MultiplierCheck: return "multiplier_check";
    }
    return "?";
}

inline Experiment parse_experiment(const std::string& s) {
    for (Experiment e : {Experiment::PlancherelCheck, Experiment::LinearDecay, Experiment::L1Experiment,
                         Experiment::Semilinear, Experiment::GnCheck, Experiment::MultiplierCheck})
        if (s == experiment_name(e)) return e;
    throw ConfigError("unknown experiment '" + s + "'");
}

/// Named initial-data presets.
struct DataPreset {
    enum class Kind { Constant, SingleMode, Random, Zero, File };
    Kind kind = Kind::Constant;
    double value = 1.0;        // constant
    std::vector<int> index;    // single_mode
    std::uint64_t seed = 1;    // random
    std::string path;          // file

    friend bool operator==(const DataPreset&, const DataPreset&) = default;
};

struct DataBlock {
    DataPreset u0, u1;
    double epsilon = 1.0;

    friend bool operator==(const DataBlock&, const DataBlock&) = default;
};

struct OutputBlock {
    std::string directory = "liewave-report";
    bool csv = true;
    bool json = true;
    bool dump_coefficients = false;

    friend bool operator==(const OutputBlock&, const OutputBlock&) = default;
};

struct RunConfig {
    GroupSpec group;
    Experiment experiment = Experiment::PlancherelCheck;
    DataBlock data;
    SemilinearConfig solver;
    OutputBlock output;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

// Strict schema: every key must be known. Silent typos in experiment knobs
// would invalidate conclusions, so they are hard errors.
inline void check_keys(const nlohmann::json& obj, const std::string& where,
                       std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!ok.count(it.key())) throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

template <typename T>
T get_or(const nlohmann::json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("invalid value for '") + key + "'");
    }
}

inline Rational parse_radius(const nlohmann::json& v) {
    Rational r;
    try {
        if (v.is_string())
            r = Rational::parse(v.get<std::string>());
        else if (v.is_number_integer())
            r = Rational(v.get<std::int64_t>());
        else if (v.is_number_float())
            r = Rational::from_double(v.get<double>());
        else
            throw ConfigError("radius must be a number or a \"p/q\" string");
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid radius: ") + e.what());
    }
    // eigenvalues carry den² * k²; a denominator this large means the decimal
    // had no short exact form (0.3 and friends), which a fraction states better
    if (r.den() > 1000000)
        throw ConfigError("radius " + v.dump() + " has no short exact form; write it as \"p/q\"");
    return r;
}

inline GroupSpec parse_group(const nlohmann::json& j) {
    check_keys(j, "group block", {"group", "dims", "radii", "bandlimit"});
    if (!j.contains("group")) throw ConfigError("group block: missing 'group'");
    const std::string kind = j.at("group").get<std::string>();
    const int bandlimit = get_or<int>(j, "bandlimit", 0);
    if (bandlimit <= 0) throw ConfigError("group block: 'bandlimit' must be a positive integer");
    try {
        if (kind == "torus") {
            if (!j.contains("radii")) throw ConfigError("group block: torus requires 'radii'");
            std::vector<Rational> radii;
            for (const auto& r : j.at("radii")) radii.push_back(parse_radius(r));
            if (j.contains("dims") && j.at("dims").get<int>() != static_cast<int>(radii.size()))
                throw ConfigError("group block: 'dims' disagrees with the number of radii");
            return GroupSpec::torus(std::move(radii), bandlimit);
        }
        if (kind == "su2" || kind == "so3") {
            if (j.contains("radii")) throw ConfigError("group block: 'radii' only applies to tori");
            if (j.contains("dims") && j.at("dims").get<int>() != 3)
                throw ConfigError("group block: 'dims' must be 3 for " + kind);
            return kind == "su2" ? GroupSpec::su2(bandlimit) : GroupSpec::so3(bandlimit);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("group block: ") + e.what());
    }
    throw ConfigError("group block: 'group' must be one of torus, su2, so3");
}

inline DataPreset parse_preset(const nlohmann::json& j, const std::string& where) {
    check_keys(j, where, {"preset", "value", "index", "seed", "path"});
    const std::string name = get_or<std::string>(j, "preset", "constant");
    DataPreset p;
    if (name == "constant") {
        p.kind = DataPreset::Kind::Constant;
        p.value = get_or<double>(j, "value", 1.0);
        if (j.contains("index") || j.contains("seed") || j.contains("path"))
            throw ConfigError(where + ": constant preset accepts only 'value'");
    } else if (name == "single_mode") {
        p.kind = DataPreset::Kind::SingleMode;
        if (!j.contains("index")) throw ConfigError(where + ": single_mode requires 'index'");
        p.index = j.at("index").get<std::vector<int>>();
        if (j.contains("value") || j.contains("seed") || j.contains("path"))
            throw ConfigError(where + ": single_mode accepts only 'index'");
    } else if (name == "random") {
        p.kind = DataPreset::Kind::Random;
        p.seed = get_or<std::uint64_t>(j, "seed", 1);
        if (j.contains("value") || j.contains("index") || j.contains("path"))
            throw ConfigError(where + ": random accepts only 'seed'");
    } else if (name == "zero") {
        p.kind = DataPreset::Kind::Zero;
        if (j.size() > 1) throw ConfigError(where + ": zero preset takes no parameters");
    } else if (name == "file") {
        p.kind = DataPreset::Kind::File;
        if (!j.contains("path")) throw ConfigError(where + ": file preset requires 'path'");
        p.path = j.at("path").get<std::string>();
    } else {
        throw ConfigError(where + ": unknown preset '" + name + "'");
    }
    return p;
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j) {
    detail::check_keys(j, "run config", {"group", "experiment", "data", "solver", "output"});
    if (!j.contains("group")) throw ConfigError("run config: missing 'group' block");
    if (!j.contains("experiment")) throw ConfigError("run config: missing 'experiment'");

    RunConfig cfg;
    cfg.group = detail::parse_group(j.at("group"));
    cfg.experiment = parse_experiment(j.at("experiment").get<std::string>());

    if (j.contains("data")) {
        const auto& d = j.at("data");
        detail::check_keys(d, "data block", {"u0", "u1", "epsilon"});
        if (d.contains("u0")) cfg.data.u0 = detail::parse_preset(d.at("u0"), "data.u0");
        if (d.contains("u1")) cfg.data.u1 = detail::parse_preset(d.at("u1"), "data.u1");
        cfg.data.epsilon = detail::get_or<double>(d, "epsilon", 1.0);
        if (cfg.data.epsilon < 0.0) throw ConfigError("data block: 'epsilon' must be >= 0");
    }

    if (j.contains("solver")) {
        const auto& s = j.at("solver");
        detail::check_keys(s, "solver block",
                           {"p", "T", "n_time_steps", "picard_tol", "picard_max_iters", "oversample",
                            "amplitude_ceiling"});
        cfg.solver.p = detail::get_or<double>(s, "p", cfg.solver.p);
        cfg.solver.T = detail::get_or<double>(s, "T", cfg.solver.T);
        cfg.solver.n_time_steps = detail::get_or<int>(s, "n_time_steps", cfg.solver.n_time_steps);
        cfg.solver.picard_tol = detail::get_or<double>(s, "picard_tol", cfg.solver.picard_tol);
        cfg.solver.picard_max_iters =
            detail::get_or<int>(s, "picard_max_iters", cfg.solver.picard_max_iters);
        cfg.solver.oversample = detail::get_or<double>(s, "oversample", cfg.solver.oversample);
        cfg.solver.amplitude_ceiling =
            detail::get_or<double>(s, "amplitude_ceiling", cfg.solver.amplitude_ceiling);
    }

    if (j.contains("output")) {
        const auto& o = j.at("output");
        detail::check_keys(o, "output block", {"directory", "formats", "dump_coefficients"});
        cfg.output.directory = detail::get_or<std::string>(o, "directory", cfg.output.directory);
        if (o.contains("formats")) {
            cfg.output.csv = false;
            cfg.output.json = false;
            for (const auto& f : o.at("formats")) {
                const std::string name = f.get<std::string>();
                if (name == "csv")
                    cfg.output.csv = true;
                else if (name == "json")
                    cfg.output.json = true;
                else
                    throw ConfigError("output block: unknown format '" + name + "'");
            }
        }
        cfg.output.dump_coefficients = detail::get_or<bool>(o, "dump_coefficients", false);
    }

    // module-level numeric validation happens now, not at run time
    try {
        cfg.solver.validate(cfg.group);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("solver block: ") + e.what());
    }
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

/// Canonical echo of a parsed configuration; parse_config applied to the
/// result reproduces the RunConfig exactly.
inline nlohmann::ordered_json config_to_json(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json g;
    switch (cfg.group.kind) {
        case GroupKind::Torus: g["group"] = "torus"; break;
        case GroupKind::SU2: g["group"] = "su2"; break;
        case GroupKind::SO3: g["group"] = "so3"; break;
    }
    if (cfg.group.kind == GroupKind::Torus) {
        g["dims"] = cfg.group.dims;
        nlohmann::ordered_json radii = nlohmann::ordered_json::array();
        for (const auto& r : cfg.group.radii) radii.push_back(r.to_string());
        g["radii"] = radii;
    }
    g["bandlimit"] = cfg.group.bandlimit;
    j["group"] = g;
    j["experiment"] = experiment_name(cfg.experiment);

    auto preset_json = [](const DataPreset& p) {
        nlohmann::ordered_json o;
        switch (p.kind) {
            case DataPreset::Kind::Constant:
                o["preset"] = "constant";
                o["value"] = p.value;
                break;
            case DataPreset::Kind::SingleMode:
                o["preset"] = "single_mode";
                o["index"] = p.index;
                break;
            case DataPreset::Kind::Random:
                o["preset"] = "random";
                o["seed"] = p.seed;
                break;
            case DataPreset::Kind::Zero:
                o["preset"] = "zero";
                break;
            case DataPreset::Kind::File:
                o["preset"] = "file";
                o["path"] = p.path;
                break;
        }
        return o;
    };
    nlohmann::ordered_json d;
    d["u0"] = preset_json(cfg.data.u0);
    d["u1"] = preset_json(cfg.data.u1);
    d["epsilon"] = cfg.data.epsilon;
    j["data"] = d;

    nlohmann::ordered_json s;
    s["p"] = cfg.solver.p;
    s["T"] = cfg.solver.T;
    s["n_time_steps"] = cfg.solver.n_time_steps;
    s["picard_tol"] = cfg.solver.picard_tol;
    s["picard_max_iters"] = cfg.solver.picard_max_iters;
    s["oversample"] = cfg.solver.oversample;
    s["amplitude_ceiling"] = cfg.solver.amplitude_ceiling;
    j["solver"] = s;

    nlohmann::ordered_json o;
    o["directory"] = cfg.output.directory;
    nlohmann::ordered_json formats = nlohmann::ordered_json::array();
    if (cfg.output.csv) formats.push_back("csv");
    if (cfg.output.json) formats.push_back("json");
    o["formats"] = formats;
    o["dump_coefficients"] = cfg.output.dump_coefficients;
    j["output"] = o;
    return j;
}

/// Builds the spectral field a preset describes. The plan supplies the grid
/// for the random preset's reality projection and validates file data.
inline SpectralField realize_preset(const DataPreset& p, const HarmonicPlan& plan) {
    const GroupSpec& spec = plan.spec();
    switch (p.kind) {
        case DataPreset::Kind::Constant:
            return constant_field(spec, Complex(p.value, 0.0));
        case DataPreset::Kind::SingleMode:
            try {
                return single_mode_field(spec, p.index);
            } catch (const std::exception& e) {
                throw ConfigError(std::string("single_mode preset: ") + e.what());
            }
        case DataPreset::Kind::Random:
            return random_field(plan, p.seed, true);
        case DataPreset::Kind::Zero:
            return zero_spectral_field(spec);
        case DataPreset::Kind::File:
            break;
    }
    // coefficient file: the same CSV layout the reporter writes
    std::ifstream in(p.path);
    if (!in) throw ConfigError("cannot open coefficient file '" + p.path + "'");
    auto dual = enumerate_dual(spec);
    SpectralField F = zero_spectral_field(spec);
    std::map<std::string, std::size_t> slot;
    for (std::size_t i = 0; i < dual.size(); ++i) slot[dual[i].index.label()] = i;
    std::string line;
    std::getline(in, line);  // header
    if (line != "rep,k,l,re,im")
        throw ConfigError("coefficient file '" + p.path + "': expected header rep,k,l,re,im");
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::array<std::string, 5> cell;
        std::size_t start = 0;
        for (int c = 0; c < 5; ++c) {
            std::size_t comma = c < 4 ? line.find(',', start) : line.size();
            if (comma == std::string::npos)
                throw ConfigError("coefficient file '" + p.path + "': malformed line " +
                                  std::to_string(lineno));
            cell[c] = line.substr(start, comma - start);
            start = comma + 1;
        }
        auto it = slot.find(cell[0]);
        if (it == slot.end())
            throw ConfigError("coefficient file '" + p.path + "': representation '" + cell[0] +
                              "' is not in the dual of this group spec");
        const int d = dual[it->second].dim;
        int k, l;
        double re, im;
        try {
            k = std::stoi(cell[1]);
            l = std::stoi(cell[2]);
            re = std::stod(cell[3]);
            im = std::stod(cell[4]);
        } catch (const std::exception&) {
            throw ConfigError("coefficient file '" + p.path + "': malformed line " + std::to_string(lineno));
        }
        if (k < 0 || k >= d || l < 0 || l >= d)
            throw ConfigError("coefficient file '" + p.path + "': entry index out of range on line " +
                              std::to_string(lineno));
        F.coeffs[it->second][static_cast<std::size_t>(k) * d + l] = Complex(re, im);
    }
    return F;
}

}  // namespace liewave
