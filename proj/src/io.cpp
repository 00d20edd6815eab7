#include "rflow/io.hpp"

#include "rflow/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace rflow {

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

std::vector<TimeseriesRow> timeseries_from_trajectory(const Trajectory& traj, double gamma) {
    std::vector<TimeseriesRow> rows;
    rows.reserve(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        rows.push_back({traj.times[i], traj.states[i],
                        stereographic_velocity(traj.states[i], gamma)});
    }
    return rows;
}

std::vector<TimeseriesRow>
timeseries_from_closed_form(const std::function<RiccatiState(double)>& solution,
                            std::span<const double> times, double gamma) {
    std::vector<TimeseriesRow> rows;
    rows.reserve(times.size());
    for (double t : times) {
        const RiccatiState s = solution(t);
        rows.push_back({t, s, stereographic_velocity(s, gamma)});
    }
    return rows;
}

void write_timeseries_csv(std::ostream& os, std::span<const TimeseriesRow> rows) {
    os << "t,a,b,U,V,W\n";
    for (const auto& r : rows) {
        os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.t, r.state.a,
                          r.state.b, r.velocity.x, r.velocity.y, r.velocity.z);
    }
}

void write_fields_csv(std::ostream& os, const SampledFields& f) {
    os << "x,y,z,u,v,w,p\n";
    for (std::size_t n = 0; n < f.velocity.size(); ++n) {
        const Vec3 x = f.grid.point(n);
        const Vec3& u = f.velocity[n];
        os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", x.x, x.y,
                          x.z, u.x, u.y, u.z, f.pressure[n]);
    }
}

void write_fields_vtk(std::ostream& os, const SampledFields& f, const std::string& title) {
    const Grid& g = f.grid;
    os << "# vtk DataFile Version 3.0\n";
    // The title line is limited to one line of at most 256 characters.
    std::string line = title.substr(0, 255);
    for (char& c : line) {
        if (c == '\n' || c == '\r') {
            c = ' ';
        }
    }
    os << line << "\nASCII\nDATASET STRUCTURED_POINTS\n";
    os << fmt::format("DIMENSIONS {} {} {}\n", g.dims[0], g.dims[1], g.dims[2]);
    os << fmt::format("ORIGIN {:.17g} {:.17g} {:.17g}\n", g.origin.x, g.origin.y, g.origin.z);
    os << fmt::format("SPACING {:.17g} {:.17g} {:.17g}\n", g.h, g.h, g.h);
    os << fmt::format("POINT_DATA {}\n", g.size());
    os << "VECTORS velocity double\n";
    for (const Vec3& u : f.velocity) {
        os << fmt::format("{:.17g} {:.17g} {:.17g}\n", u.x, u.y, u.z);
    }
    os << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
    for (double p : f.pressure) {
        os << format_double(p) << '\n';
    }
}

namespace {

std::vector<double> parse_row(const std::string& line, std::size_t expected, std::size_t lineno) {
    std::vector<double> out;
    out.reserve(expected);
    std::size_t pos = 0;
    while (pos <= line.size()) {
        const std::size_t comma = std::min(line.find(',', pos), line.size());
        const std::string cell = line.substr(pos, comma - pos);
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (cell.empty() || end != cell.c_str() + cell.size()) {
            throw Error("CSV line " + std::to_string(lineno) + ": cannot parse '" + cell + "'");
        }
        out.push_back(v);
        pos = comma + 1;
    }
    if (out.size() != expected) {
        throw Error("CSV line " + std::to_string(lineno) + ": expected " +
                    std::to_string(expected) + " columns");
    }
    return out;
}

template <class Row>
std::vector<Row> read_csv(std::istream& is, const std::string& header, std::size_t columns,
                          Row (*make)(const std::vector<double>&)) {
    std::string line;
    if (!std::getline(is, line) || line != header) {
        throw Error("CSV: expected header '" + header + "'");
    }
    std::vector<Row> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        rows.push_back(make(parse_row(line, columns, lineno)));
    }
    return rows;
}

} // namespace

std::vector<FieldRecord> read_fields_csv(std::istream& is) {
    return read_csv<FieldRecord>(is, "x,y,z,u,v,w,p", 7, [](const std::vector<double>& v) {
        return FieldRecord{{v[0], v[1], v[2]}, {v[3], v[4], v[5]}, v[6]};
    });
}

std::vector<TimeseriesRow> read_timeseries_csv(std::istream& is) {
    return read_csv<TimeseriesRow>(is, "t,a,b,U,V,W", 6, [](const std::vector<double>& v) {
        return TimeseriesRow{v[0], {v[1], v[2]}, {v[3], v[4], v[5]}};
    });
}

} // namespace rflow
