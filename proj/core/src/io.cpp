#include "geoflow/io.hpp"

#include <cstdio>

#include <json.hpp>

namespace geoflow {

using ordered_json = nlohmann::ordered_json;

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

ordered_json with_tol(double value, double tol) {
    return ordered_json{{"value", value}, {"tol", tol}};
}

ordered_json with_stderr(double value, double se) {
    return ordered_json{{"value", value}, {"stderr", se}};
}

}  // namespace

void write_census_csv(std::ostream& os, const std::vector<GeodesicClass>& census) {
    os << "word,trace,length\n";
    for (const auto& cls : census)
        os << cls.word << ',' << format_number(cls.transform.trace()) << ','
           << format_number(cls.length) << '\n';
}

void write_orbit_csv(std::ostream& os, const RigidityReport& report) {
    os << "word,period,chi_plus,mean_K,gap,closure_defect,oracle_discrepancy\n";
    for (const auto& row : report.rows)
        os << row.word << ',' << format_number(row.period) << ','
           << format_number(row.chi_plus) << ',' << format_number(row.mean_curvature)
           << ',' << format_number(row.gap) << ',' << format_number(row.closure_defect)
           << ',' << format_number(row.oracle_discrepancy) << '\n';
}

void write_riccati_csv(std::ostream& os, const RiccatiSolution& sol) {
    const int d = sol.profile.dimension();
    os << 't';
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) os << ",u_" << (i + 1) << (j + 1);
    os << ",residual\n";
    // per-sample residual by centered differences (endpoints report 0)
    for (std::size_t k = 0; k < sol.times.size(); ++k) {
        os << format_number(sol.times[k]);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) os << ',' << format_number(sol.values[k](i, j));
        double res = 0.0;
        if (k > 0 && k + 1 < sol.times.size()) {
            const double hm = sol.times[k] - sol.times[k - 1];
            const double hp = sol.times[k + 1] - sol.times[k];
            const Eigen::MatrixXd du = (hm / (hp * (hm + hp))) * sol.values[k + 1] +
                                       ((hp - hm) / (hp * hm)) * sol.values[k] -
                                       (hp / (hm * (hm + hp))) * sol.values[k - 1];
            res = (du + sol.values[k] * sol.values[k] + sol.profile.r(sol.times[k])).norm();
        }
        os << ',' << format_number(res) << '\n';
    }
}

void write_trajectory_csv(std::ostream& os, const ConformalMetric& metric,
                          const Trajectory& traj) {
    os << "t,x,y,angle,K,deck_word\n";
    for (const auto& s : traj.samples) {
        os << format_number(s.t) << ',' << format_number(s.z.real()) << ','
           << format_number(s.z.imag()) << ',' << format_number(s.angle) << ','
           << format_number(metric.gaussian_curvature(s.z)) << ','
           << traj.deck_word.substr(0, s.deck_prefix) << '\n';
    }
}

std::string rigidity_report_json(const std::vector<RigidityReport>& reports,
                                 double gap_tol, double spread_tol) {
    ordered_json out;
    out["experiment"] = "rigidity";
    out["sections"] = ordered_json::array();
    for (const auto& rep : reports) {
        ordered_json sec;
        sec["epsilon"] = rep.epsilon;
        sec["curvature_bounds"] = {
            {"b", with_tol(rep.bounds.b, 1e-6)},
            {"c", with_tol(rep.bounds.c, 1e-6)},
        };
        sec["curvature_spread"] = with_tol(rep.curvature_spread, 1e-6);
        sec["exponent_spread"] = with_tol(rep.exponent_spread, spread_tol);
        sec["min_gap"] = with_tol(rep.min_gap, gap_tol);
        sec["max_gap"] = with_tol(rep.max_gap, gap_tol);
        sec["orbits"] = ordered_json::array();
        for (std::size_t i = 0; i < rep.rows.size(); ++i) {
            const auto& row = rep.rows[i];
            const auto& chains = rep.chains[i];
            ordered_json o;
            o["word"] = row.word;
            o["period"] = with_tol(row.period, 1e-8);
            o["chi_plus"] = with_tol(row.chi_plus, 1e-6);
            o["mean_K"] = with_tol(row.mean_curvature, 1e-8);
            o["gap"] = with_tol(row.gap, gap_tol);
            o["closure_defect"] = row.closure_defect;
            o["oracle_discrepancy"] = with_tol(row.oracle_discrepancy, 1e-4);
            o["u_range"] = {row.u_min, row.u_max};
            o["K_range"] = {row.k_min, row.k_max};
            o["touches_bumps"] = row.touches_bumps;
            o["trace_floor"] = {
                {"mean_trace", with_tol(chains.floor.mean_trace, 1e-7)},
                {"pointwise_excess", chains.floor.pointwise_trace_excess},
                {"hypothesis_met", chains.floor.hypothesis_met},
            };
            if (chains.floor.ricci_deviation)
                o["trace_floor"]["ricci_deviation"] = *chains.floor.ricci_deviation;
            o["moment_chain"] = {
                {"A", with_tol(chains.moments.A, 1e-7)},
                {"B", with_tol(chains.moments.B, 1e-7)},
                {"C", with_tol(chains.moments.C, 1e-7)},
                {"D", with_tol(chains.moments.D, 1e-7)},
                {"end_bound", chains.moments.end_bound},
                {"all_links_strict", chains.moments.all_links_strict},
            };
            sec["orbits"].push_back(std::move(o));
        }
        sec["failures"] = ordered_json::array();
        for (const auto& [word, reason] : rep.failures)
            sec["failures"].push_back({{"word", word}, {"reason", reason}});
        out["sections"].push_back(std::move(sec));
    }
    return out.dump(2) + "\n";
}

std::string entropy_report_json(const EntropyReport& report) {
    ordered_json out;
    out["experiment"] = "entropy";
    out["liouville_entropy"] = with_stderr(report.liouville_entropy, report.liouville_stderr);
    out["usable_samples"] = report.usable_samples;
    out["drawn_samples"] = report.drawn_samples;
    out["mean_resident_time"] = report.mean_resident_time;
    out["orbit_growth_exponent"] =
        with_stderr(report.orbit_growth_exponent, report.growth_fit_rms);
    out["census_classes"] = report.census_classes;
    out["fit_cutoff_length"] = report.fit_cutoff_length;
    out["infinite_area_caveat"] = report.infinite_area_caveat;
    if (report.infinite_area_caveat) {
        out["caveat"] =
            "infinite-area quotient: the census growth exponent measures the recurrent "
            "set and is expected to stay below the volume-side estimate; the two agree "
            "only for compact quotients (use the genus2 group).";
    }
    return out.dump(2) + "\n";
}

}  // namespace geoflow
