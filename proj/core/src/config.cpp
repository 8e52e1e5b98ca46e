#include "geoflow/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "geoflow/errors.hpp"

namespace geoflow {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse number from '" + v + "'");
    }
}

long to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const long x = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse integer from '" + v + "'");
    }
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(to_double(key, item));
    }
    return out;
}

}  // namespace

CurvatureProfile ProfileSpec::build() const {
    CurvatureProfile p;
    if (kind == "constant") {
        p = CurvatureProfile::constant(value);
    } else if (kind == "fourier") {
        p = CurvatureProfile::fourier(value, cos_coef, sin_coef, period);
    } else if (kind == "sampled") {
        std::ifstream in(csv_path);
        if (!in) throw ConfigError("profile.csv: cannot open '" + csv_path + "'");
        std::vector<double> ts, ks;
        std::string line;
        while (std::getline(in, line)) {
            line = trim(line);
            if (line.empty() || line[0] == '#' || line.rfind("t,", 0) == 0) continue;
            const auto comma = line.find(',');
            if (comma == std::string::npos)
                throw ConfigError("profile.csv: expected 't,K' lines");
            ts.push_back(to_double("profile.csv t", trim(line.substr(0, comma))));
            ks.push_back(to_double("profile.csv K", trim(line.substr(comma + 1))));
        }
        p = CurvatureProfile::sampled(ts, ks, /*periodic=*/true);
        auto b = p.scan_bounds();
        p = p.with_bounds(b);
    } else if (kind == "matrix-diag") {
        if (diag.empty()) throw ConfigError("profile.diag: empty diagonal");
        p = CurvatureProfile::pinching_diag(diag, period);
    } else {
        throw ConfigError("profile.kind: unknown kind '" + kind +
                          "' (constant | fourier | sampled | matrix-diag)");
    }
    if (bound_b && bound_c) p = p.with_bounds(PinchingBounds{*bound_b, *bound_c});
    return p;
}

std::shared_ptr<const FuchsianGroup> ExperimentConfig::make_group_ptr() const {
    return std::shared_ptr<const FuchsianGroup>(make_group(group_kind, wall_foot));
}

ConformalMetric ExperimentConfig::make_metric() const {
    BumpProfile prof;
    if (bump_profile == "poly")
        prof = BumpProfile::poly;
    else if (bump_profile == "smooth")
        prof = BumpProfile::smooth;
    else
        throw ConfigError("metric.profile: expected poly | smooth, got '" + bump_profile +
                          "'");
    return ConformalMetric(make_group_ptr(), bumps, epsilon, base_curvature, prof);
}

RigidityOptions ExperimentConfig::rigidity_options() const {
    RigidityOptions o;
    o.oracle_periods = oracle_periods;
    o.threads = threads;
    o.shooting.flow.rel_tol = rel_tol;
    o.shooting.flow.abs_tol = abs_tol;
    o.shooting.flow.output_dt = flow_output_dt;
    o.riccati.rel_tol = rel_tol;
    o.riccati.abs_tol = abs_tol;
    o.riccati.samples_per_period = riccati_samples_per_period;
    return o;
}

EntropyOptions ExperimentConfig::entropy_options() const {
    EntropyOptions o;
    o.min_resident = min_resident;
    o.riccati.rel_tol = rel_tol;
    o.riccati.abs_tol = abs_tol;
    o.riccati.samples_per_period = riccati_samples_per_period;
    o.flow.rel_tol = rel_tol;
    o.flow.abs_tol = abs_tol;
    o.flow.output_dt = flow_output_dt;
    return o;
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::map<int, Bump> bump_map;

    std::stringstream ss(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string full = section + "." + key;

        if (section == "group") {
            if (key == "kind") cfg.group_kind = value;
            else if (key == "wall_foot") cfg.wall_foot = to_double(full, value);
            else throw ConfigError("unknown key '" + full + "'");
        } else if (section == "metric") {
            if (key == "base_curvature") cfg.base_curvature = to_double(full, value);
            else if (key == "epsilon") cfg.epsilon = to_double(full, value);
            else if (key == "profile") cfg.bump_profile = value;
            else if (key.rfind("bump.", 0) == 0) {
                // bump.<index>.<field>
                const auto rest = key.substr(5);
                const auto dot = rest.find('.');
                if (dot == std::string::npos)
                    throw ConfigError("unknown key '" + full + "'");
                const int idx = static_cast<int>(to_int(full, rest.substr(0, dot)));
                const std::string field = rest.substr(dot + 1);
                Bump& b = bump_map[idx];
                if (field == "x") b.center = Complex(to_double(full, value), b.center.imag());
                else if (field == "y") b.center = Complex(b.center.real(), to_double(full, value));
                else if (field == "radius") b.radius = to_double(full, value);
                else if (field == "amplitude") b.amplitude = to_double(full, value);
                else throw ConfigError("unknown key '" + full + "'");
            } else throw ConfigError("unknown key '" + full + "'");
        } else if (section == "integrator") {
            if (key == "rel_tol") cfg.rel_tol = to_double(full, value);
            else if (key == "abs_tol") cfg.abs_tol = to_double(full, value);
            else if (key == "flow_output_dt") cfg.flow_output_dt = to_double(full, value);
            else if (key == "riccati_samples_per_period")
                cfg.riccati_samples_per_period = static_cast<int>(to_int(full, value));
            else throw ConfigError("unknown key '" + full + "'");
        } else if (section == "census") {
            if (key == "max_word_length")
                cfg.census_max_word_length = static_cast<int>(to_int(full, value));
            else throw ConfigError("unknown key '" + full + "'");
        } else if (section == "rigidity") {
            if (key == "epsilon_ladder") cfg.epsilon_ladder = to_list(full, value);
            else if (key == "oracle_periods") cfg.oracle_periods = to_double(full, value);
            else throw ConfigError("unknown key '" + full + "'");
        } else if (section == "entropy") {
            if (key == "mc_samples") cfg.mc_samples = static_cast<std::size_t>(to_int(full, value));
            else if (key == "horizon") cfg.horizon = to_double(full, value);
            else if (key == "min_resident") cfg.min_resident = to_double(full, value);
            else if (key == "max_word_length")
                cfg.entropy_max_word_length = static_cast<int>(to_int(full, value));
            else throw ConfigError("unknown key '" + full + "'");
        } else if (section == "output") {
            if (key == "dir") cfg.output_dir = value;
            else throw ConfigError("unknown key '" + full + "'");
        } else if (section == "run") {
            if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_int(full, value));
            else if (key == "threads") cfg.threads = static_cast<int>(to_int(full, value));
            else throw ConfigError("unknown key '" + full + "'");
        } else if (section == "profile") {
            if (key == "kind") cfg.profile.kind = value;
            else if (key == "value") cfg.profile.value = to_double(full, value);
            else if (key == "period") cfg.profile.period = to_double(full, value);
            else if (key == "cos") cfg.profile.cos_coef = to_list(full, value);
            else if (key == "sin") cfg.profile.sin_coef = to_list(full, value);
            else if (key == "csv") cfg.profile.csv_path = value;
            else if (key == "diag") cfg.profile.diag = to_list(full, value);
            else if (key == "b") cfg.profile.bound_b = to_double(full, value);
            else if (key == "c") cfg.profile.bound_c = to_double(full, value);
            else throw ConfigError("unknown key '" + full + "'");
        } else {
            throw ConfigError("unknown section '" + section + "' (key '" + key + "')");
        }
    }

    for (auto& [idx, b] : bump_map) {
        if (!(b.radius > 0.0))
            throw ConfigError("metric.bump." + std::to_string(idx) + ".radius must be > 0");
        cfg.bumps.push_back(b);
    }

    if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0))
        throw ConfigError("integrator tolerances must be positive");
    if (!(cfg.flow_output_dt > 0.0))
        throw ConfigError("integrator.flow_output_dt must be positive");
    if (cfg.census_max_word_length < 0)
        throw ConfigError("census.max_word_length must be >= 0");
    if (cfg.epsilon_ladder.empty()) cfg.epsilon_ladder = {cfg.epsilon};
    if (!std::is_sorted(cfg.epsilon_ladder.begin(), cfg.epsilon_ladder.end()))
        throw ConfigError("rigidity.epsilon_ladder must be sorted ascending");
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace geoflow
