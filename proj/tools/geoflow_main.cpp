// geoflow: rigidity experiments for geodesic flows on negatively curved
// surfaces.  Subcommands: census | rigidity | entropy | riccati.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "geoflow/analysis.hpp"
#include "geoflow/config.hpp"
#include "geoflow/errors.hpp"
#include "geoflow/io.hpp"

namespace fs = std::filesystem;
using namespace geoflow;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonArgs {
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<int> threads;
    std::optional<std::uint64_t> seed;
};

ExperimentConfig load(const CommonArgs& args) {
    ExperimentConfig cfg = parse_config_file(args.config_path);
    if (args.out_dir) cfg.output_dir = *args.out_dir;
    if (args.threads) cfg.threads = *args.threads;
    if (args.seed) cfg.seed = *args.seed;
    return cfg;
}

fs::path prepare_output(const ExperimentConfig& cfg) {
    fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot write '" + path.string() + "'");
    os << content;
}

int cmd_census(const ExperimentConfig& cfg) {
    const auto group = cfg.make_group_ptr();
    const auto census = group->enumerate_classes(cfg.census_max_word_length);
    const fs::path dir = prepare_output(cfg);
    std::ofstream os(dir / "census.csv", std::ios::binary | std::ios::trunc);
    write_census_csv(os, census);
    std::cout << "census: " << census.size() << " classes (word length <= "
              << cfg.census_max_word_length << ") -> " << (dir / "census.csv").string()
              << "\n";
    return kExitOk;
}

int cmd_rigidity(const ExperimentConfig& cfg) {
    const fs::path dir = prepare_output(cfg);
    const ConformalMetric base = cfg.make_metric();
    std::vector<RigidityReport> reports;
    for (double eps : cfg.epsilon_ladder) {
        const ConformalMetric metric = base.with_epsilon(eps);
        RigidityReport rep =
            rigidity_experiment(metric, cfg.census_max_word_length, cfg.rigidity_options());
        std::ostringstream csv;
        write_orbit_csv(csv, rep);
        std::ostringstream name;
        name << "orbits_eps_" << format_number(eps) << ".csv";
        write_file(dir / name.str(), csv.str());
        std::cout << "epsilon " << format_number(eps) << ": " << rep.rows.size()
                  << " orbits refined, " << rep.failures.size()
                  << " failures, exponent spread " << format_number(rep.exponent_spread)
                  << "\n";
        for (const auto& [word, reason] : rep.failures)
            std::cerr << "  [failure] class " << word << ": " << reason << "\n";
        reports.push_back(std::move(rep));
    }
    write_file(dir / "report.json", rigidity_report_json(reports, 1e-8, 1e-6));
    std::cout << "report -> " << (dir / "report.json").string() << "\n";
    return kExitOk;
}

int cmd_entropy(const ExperimentConfig& cfg) {
    const fs::path dir = prepare_output(cfg);
    const ConformalMetric metric = cfg.make_metric();
    const EntropyReport rep =
        entropy_experiment(metric, cfg.mc_samples, cfg.horizon, cfg.entropy_max_word_length,
                           cfg.seed, cfg.entropy_options());
    write_file(dir / "entropy.json", entropy_report_json(rep));
    std::cout << "liouville estimate " << format_number(rep.liouville_entropy) << " +- "
              << format_number(rep.liouville_stderr) << " (" << rep.usable_samples << "/"
              << rep.drawn_samples << " samples), growth exponent "
              << format_number(rep.orbit_growth_exponent) << "\n";
    if (rep.infinite_area_caveat)
        std::cout << "note: infinite-area quotient; growth exponent measures the "
                     "recurrent set and stays below the volume-side estimate\n";
    std::cout << "report -> " << (dir / "entropy.json").string() << "\n";
    return kExitOk;
}

int cmd_riccati(const ExperimentConfig& cfg) {
    const fs::path dir = prepare_output(cfg);
    const CurvatureProfile profile = cfg.profile.build();
    RiccatiOptions ropts;
    ropts.rel_tol = cfg.rel_tol;
    ropts.abs_tol = cfg.abs_tol;
    ropts.samples_per_period = cfg.riccati_samples_per_period;

    const auto unstable = unstable_solution(profile, ropts);
    const auto stable = stable_solution(profile, ropts);
    {
        std::ofstream os(dir / "riccati_unstable.csv", std::ios::binary | std::ios::trunc);
        write_riccati_csv(os, unstable);
        std::ofstream os2(dir / "riccati_stable.csv", std::ios::binary | std::ios::trunc);
        write_riccati_csv(os2, stable);
    }

    const auto rep = lyapunov_exponent_periodic(unstable);
    std::cout << "chi_plus " << format_number(rep.chi_plus) << ", curvature bound "
              << format_number(rep.mean_curvature_bound) << ", gap "
              << format_number(rep.gap) << "\n";
    if (profile.is_periodic()) {
        const double oracle =
            jacobi_growth_oracle(profile, cfg.oracle_periods * profile.period(), ropts);
        std::cout << "growth oracle " << format_number(oracle) << " (|diff| "
                  << format_number(std::abs(oracle - rep.chi_plus)) << ")\n";
    }

    const auto bounds = profile.declared_bounds();
    if (bounds) {
        const auto floor = trace_floor_check(unstable, bounds->b);
        const auto chain = trace_moment_chain(unstable, bounds->c);
        std::cout << "trace floor (b = " << format_number(bounds->b)
                  << "): mean trace " << format_number(floor.mean_trace)
                  << ", pointwise excess " << format_number(floor.pointwise_trace_excess)
                  << (floor.hypothesis_met ? " [on the floor]" : "") << "\n";
        std::cout << "moment chain (c = " << format_number(bounds->c)
                  << "): A " << format_number(chain.A) << " <= B " << format_number(chain.B)
                  << " <= C " << format_number(chain.C) << " = D " << format_number(chain.D)
                  << " <= " << format_number(chain.end_bound) << "\n";
    }
    std::cout << "samples -> " << (dir / "riccati_unstable.csv").string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical rigidity experiments for surface geodesic flows"};
    app.require_subcommand(1);

    CommonArgs args;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", args.config_path, "experiment config file")->required();
        cmd->add_option("--out", args.out_dir, "output directory (overrides config)");
        cmd->add_option("--threads", args.threads, "worker threads (overrides config)");
        cmd->add_option("--seed", args.seed, "random seed (overrides config)");
    };

    auto* census = app.add_subcommand("census", "closed-geodesic class table");
    auto* rigidity =
        app.add_subcommand("rigidity", "refine orbits and test exponent rigidity");
    auto* entropy = app.add_subcommand("entropy", "volume-vs-growth entropy estimates");
    auto* riccati = app.add_subcommand("riccati", "standalone curvature profile analysis");
    for (auto* cmd : {census, rigidity, entropy, riccati}) add_common(cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        const ExperimentConfig cfg = load(args);
        if (census->parsed()) return cmd_census(cfg);
        if (rigidity->parsed()) return cmd_rigidity(cfg);
        if (entropy->parsed()) return cmd_entropy(cfg);
        if (riccati->parsed()) return cmd_riccati(cfg);
        std::cerr << "no subcommand\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
