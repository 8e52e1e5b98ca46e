#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "geoflow/analysis.hpp"
#include "geoflow/flow.hpp"
#include "geoflow/fuchsian.hpp"
#include "geoflow/riccati.hpp"

namespace geoflow {

/// Stable fixed-format float used by every CSV/JSON writer, so identical
/// runs produce byte-identical outputs.
std::string format_number(double v);

void write_census_csv(std::ostream& os, const std::vector<GeodesicClass>& census);
void write_orbit_csv(std::ostream& os, const RigidityReport& report);
void write_riccati_csv(std::ostream& os, const RiccatiSolution& sol);
void write_trajectory_csv(std::ostream& os, const ConformalMetric& metric,
                          const Trajectory& traj);

/// Machine-readable experiment summary; numbers carry tolerance or stderr.
std::string rigidity_report_json(const std::vector<RigidityReport>& reports,
                                 double gap_tol, double spread_tol);
std::string entropy_report_json(const EntropyReport& report);

}  // namespace geoflow
