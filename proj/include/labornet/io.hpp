#pragma once

// File formats used by the command-line tool.

#include <iosfwd>
#include <string>
#include <vector>

#include "labornet/calibrate.hpp"
#include "labornet/csv.hpp"
#include "labornet/meanfield.hpp"
#include "labornet/metrics.hpp"
#include "labornet/network.hpp"
#include "labornet/scenario.hpp"
#include "labornet/trajectory.hpp"

namespace labornet {

/// `source,target,count`. Occupations are ordered by first appearance.
TransitionCounts read_transitions(const CsvTable& table);

/// `# self_loop=r` then `source,target,weight` for every nonzero entry, in row order.
void write_network(std::ostream& out, const Network& network, const Metadata& meta);
Network read_network(const CsvTable& table);

/// `source_label,score[,weight]`
std::vector<RawScore> read_scores(const CsvTable& table);
/// `source_label,target_label`
std::vector<CrosswalkRow> read_crosswalk(const CsvTable& table);

/// `occupation,demand`, aligned to `labels`. Throws UnmappedOccupation for
/// missing labels and InvalidArgument for unknown or repeated ones.
std::vector<double> read_demand(const CsvTable& table, const std::vector<std::string>& labels);

/// `t,U,V,E,U_lt` plus `e_,u_,v_,ult_<label>` columns when the trajectory has them.
void write_series(std::ostream& out, const Trajectory& series,
                  const std::vector<std::string>& labels, const Metadata& meta);

/// `t,u_rate,v_rate`
void write_curve(std::ostream& out, const RateSeries& rates, const Metadata& meta);

/// Reads `u_rate,v_rate` columns, or derives them from `U,V,E`.
BeveridgeCurve read_curve(const CsvTable& table);

/// `occupation,e,u,v,d_star`
void write_steady(std::ostream& out, const SteadyState& steady,
                  const std::vector<std::string>& labels, const Metadata& meta);

/// `t,occupation,target_demand` for t in [0, horizon).
void write_demand(std::ostream& out, const DemandPath& path,
                  const std::vector<std::string>& labels, const Metadata& meta);

/// `a,delta_u,delta_v,dt_weeks,iou`; degenerate cells print `nan`.
void write_score_table(std::ostream& out, const CalibrationResult& result, const Metadata& meta);

}  // namespace labornet
