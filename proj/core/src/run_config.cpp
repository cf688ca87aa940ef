#include "kglab/run_config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace kglab {

std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing junk");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for '" + key + "': " + v);
    }
}

long parse_long(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing junk");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer value for '" + key + "': " + v);
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config: bad boolean value for '" + key + "': " + v);
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError("config: empty list entry for '" + key + "'");
        out.push_back(parse_double(key, item));
    }
    return out;
}

DataRecipe::Profile parse_profile(const std::string& v) {
    if (v == "gaussian_bump") return DataRecipe::Profile::gaussian_bump;
    if (v == "cosine_bump") return DataRecipe::Profile::cosine_bump;
    if (v == "fourier_mode") return DataRecipe::Profile::fourier_mode;
    if (v == "soliton_scaled") return DataRecipe::Profile::soliton_scaled;
    if (v == "multi_bump") return DataRecipe::Profile::multi_bump;
    throw ConfigError("config: unknown profile '" + v + "'");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    // key -> value per section, rejecting unknown keys up front.
    static const std::map<std::string, std::set<std::string>> kKnown = {
        {"equation", {"kind", "a", "T0"}},
        {"model", {"kind", "p", "b", "eps"}},
        {"grid", {"n", "L", "N"}},
        {"data",
         {"profile", "amplitude", "velocity_ratio", "width", "radius", "k", "soliton_p", "count",
          "separation", "base_profile", "target_energy"}},
        {"solver",
         {"t_end", "dt_init", "dt_min", "dt_max", "sample_every", "safety", "amp_threshold",
          "norm_factor", "dealias", "support_radius", "effective_period"}},
        {"output", {"dir"}},
        {"sweep", {"lambda", "sigma", "p", "a", "target_energy"}},
    };

    RunConfig cfg;
    cfg.recipe.amplitude = 1.0;

    std::map<std::string, std::map<std::string, std::string>> sections;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": malformed section");
            section = trim(line.substr(1, line.size() - 2));
            if (!kKnown.count(section))
                throw ConfigError("config: unknown section [" + section + "]");
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        if (section.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": key outside any section");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (!kKnown.at(section).count(key))
            throw ConfigError("config: unknown key '" + key + "' in [" + section + "]");
        if (sections[section].count(key))
            throw ConfigError("config: duplicate key '" + key + "' in [" + section + "]");
        sections[section][key] = val;
    }

    auto has = [&](const char* sec, const char* key) {
        auto s = sections.find(sec);
        return s != sections.end() && s->second.count(key) > 0;
    };
    auto get = [&](const char* sec, const char* key) { return sections[sec][key]; };

    // [equation]
    if (has("equation", "kind")) {
        std::string kind = get("equation", "kind");
        if (kind == "kg") cfg.equation = RunConfig::Equation::kg;
        else if (kind == "damped") cfg.equation = RunConfig::Equation::damped;
        else throw ConfigError("config: equation kind must be kg or damped");
    }
    if (has("equation", "a")) cfg.damped.a = parse_double("a", get("equation", "a"));
    if (has("equation", "T0")) cfg.damped.T0 = parse_double("T0", get("equation", "T0"));

    // [model]
    if (has("model", "kind") && get("model", "kind") != "pure_power")
        throw ConfigError("config: only kind=pure_power is expressible in a config file");
    double p = has("model", "p") ? parse_double("p", get("model", "p")) : 3.0;
    double b = has("model", "b") ? parse_double("b", get("model", "b")) : 1.0;
    double eps = p - 1.0;
    if (has("model", "eps") && get("model", "eps") != "auto")
        eps = parse_double("eps", get("model", "eps"));
    try {
        cfg.model = NonlinearityModel::pure_power(p, eps, b);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: invalid model: ") + e.what());
    }

    // [grid]
    int n = has("grid", "n") ? static_cast<int>(parse_long("n", get("grid", "n"))) : 1;
    double L = has("grid", "L") ? parse_double("L", get("grid", "L")) : 2.0 * 3.14159265358979323846;
    long N = has("grid", "N") ? parse_long("N", get("grid", "N")) : 512;
    try {
        cfg.grid = Grid(n, L, static_cast<std::size_t>(N));
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: invalid grid: ") + e.what());
    }

    // [data]
    if (has("data", "target_energy")) {
        if (has("data", "profile"))
            throw ConfigError("config: [data] takes either a profile or target_energy, not both");
        cfg.synthesize = true;
        cfg.target_energy = parse_double("target_energy", get("data", "target_energy"));
        if (!(cfg.target_energy > 0.0))
            throw ConfigError("config: target_energy must be positive");
    } else {
        if (!has("data", "profile")) throw ConfigError("config: [data] needs profile= or target_energy=");
        cfg.recipe.profile = parse_profile(get("data", "profile"));
        if (has("data", "amplitude"))
            cfg.recipe.amplitude = parse_double("amplitude", get("data", "amplitude"));
        if (has("data", "velocity_ratio"))
            cfg.recipe.velocity_ratio = parse_double("velocity_ratio", get("data", "velocity_ratio"));
        if (has("data", "width")) cfg.recipe.width = parse_double("width", get("data", "width"));
        if (has("data", "radius")) cfg.recipe.radius = parse_double("radius", get("data", "radius"));
        if (has("data", "k")) cfg.recipe.mode_k = parse_long("k", get("data", "k"));
        if (has("data", "soliton_p"))
            cfg.recipe.soliton_p = parse_double("soliton_p", get("data", "soliton_p"));
        else
            cfg.recipe.soliton_p = p;
        if (has("data", "count"))
            cfg.recipe.count = static_cast<int>(parse_long("count", get("data", "count")));
        if (has("data", "separation"))
            cfg.recipe.separation = parse_double("separation", get("data", "separation"));
        if (has("data", "base_profile"))
            cfg.recipe.base_profile = parse_profile(get("data", "base_profile"));
    }

    // [solver]
    if (has("solver", "t_end")) cfg.solver.t_end = parse_double("t_end", get("solver", "t_end"));
    if (has("solver", "dt_init")) cfg.solver.dt_init = parse_double("dt_init", get("solver", "dt_init"));
    if (has("solver", "dt_min")) cfg.solver.dt_min = parse_double("dt_min", get("solver", "dt_min"));
    if (has("solver", "dt_max")) {
        cfg.solver.dt_max = parse_double("dt_max", get("solver", "dt_max"));
        if (!has("solver", "dt_init")) cfg.solver.dt_init = cfg.solver.dt_max;
    }
    if (has("solver", "sample_every"))
        cfg.solver.sample_every = static_cast<std::size_t>(parse_long("sample_every", get("solver", "sample_every")));
    if (has("solver", "safety")) cfg.solver.safety = parse_double("safety", get("solver", "safety"));
    if (has("solver", "amp_threshold"))
        cfg.solver.blowup_amp_threshold = parse_double("amp_threshold", get("solver", "amp_threshold"));
    if (has("solver", "norm_factor"))
        cfg.solver.blowup_norm_factor = parse_double("norm_factor", get("solver", "norm_factor"));
    if (has("solver", "dealias")) cfg.solver.dealias = parse_bool("dealias", get("solver", "dealias"));
    if (has("solver", "support_radius"))
        cfg.solver.support_radius = parse_double("support_radius", get("solver", "support_radius"));
    if (has("solver", "effective_period"))
        cfg.solver.effective_period = parse_double("effective_period", get("solver", "effective_period"));

    // [output]
    if (has("output", "dir")) cfg.out_dir = get("output", "dir");

    // [sweep]
    if (has("sweep", "lambda")) cfg.sweep_lambda = parse_list("lambda", get("sweep", "lambda"));
    if (has("sweep", "sigma")) cfg.sweep_sigma = parse_list("sigma", get("sweep", "sigma"));
    if (has("sweep", "p")) cfg.sweep_p = parse_list("p", get("sweep", "p"));
    if (has("sweep", "a")) cfg.sweep_a = parse_list("a", get("sweep", "a"));
    if (has("sweep", "target_energy"))
        cfg.sweep_target_energy = parse_list("target_energy", get("sweep", "target_energy"));

    // Validate everything the run will touch before any compute.
    try {
        cfg.solver.validate();
        if (cfg.equation == RunConfig::Equation::damped) cfg.damped.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    auto hyp = verify_local_existence_hypotheses(cfg.model, cfg.grid.n);
    if (!hyp && cfg.sweep_p.empty())
        throw ConfigError("config: local-existence hypotheses violated: " + hyp.violated);

    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace kglab
