/// @file io.hpp
/// @brief Text outputs: Riccati time series, sampled fields as CSV and legacy VTK.
///
/// Every floating-point value is written with 17 significant digits so that files parse
/// back to the identical double.

#pragma once

#include "rflow/assembly.hpp"
#include "rflow/riccati.hpp"

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace rflow {

[[nodiscard]] std::string format_double(double v);

struct TimeseriesRow {
    double t = 0.0;
    RiccatiState state;
    PotentialVelocity velocity;
};

[[nodiscard]] std::vector<TimeseriesRow> timeseries_from_trajectory(const Trajectory& traj,
                                                                    double gamma);

[[nodiscard]] std::vector<TimeseriesRow>
timeseries_from_closed_form(const std::function<RiccatiState(double t)>& solution,
                            std::span<const double> times, double gamma);

/// Header `t,a,b,U,V,W`.
void write_timeseries_csv(std::ostream& os, std::span<const TimeseriesRow> rows);

/// Header `x,y,z,u,v,w,p`, one row per grid point in grid index order.
void write_fields_csv(std::ostream& os, const SampledFields& fields);

/// Legacy ASCII STRUCTURED_POINTS with `VECTORS velocity` and `SCALARS pressure`.
void write_fields_vtk(std::ostream& os, const SampledFields& fields, const std::string& title);

struct FieldRecord {
    Vec3 x;
    Vec3 u;
    double p = 0.0;
};

/// Parses the output of write_fields_csv. Throws Error on malformed input.
[[nodiscard]] std::vector<FieldRecord> read_fields_csv(std::istream& is);

/// Parses the output of write_timeseries_csv. Throws Error on malformed input.
[[nodiscard]] std::vector<TimeseriesRow> read_timeseries_csv(std::istream& is);

} // namespace rflow
