#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "elastopoint/assembly.hpp"
#include "elastopoint/convergence.hpp"
#include "elastopoint/mesh.hpp"

namespace elastopoint::io {

/// Point-load text format, one record per line:
///   point <x> <y> [<z>] <fx> <fy> [<fz>]
/// '#' starts a comment; blank lines are ignored. Throws ParseError (with the
/// 1-based line number) for malformed records and ValidationError for a
/// location that is not strictly inside the unit box or an empty file.
PointLoadSet parse_loads(std::istream& in, int dim);
PointLoadSet parse_loads_file(const std::filesystem::path& path, int dim);

/// Writes loads with round-trip precision, so parsing the output gives the
/// same set bit for bit.
void write_loads(std::ostream& out, const PointLoadSet& loads, int dim);

inline constexpr const char* kReportHeader = "level,n,h,ndof,error_l2,eoc";

// 12 significant digits, as used in every CSV this tool writes.
std::string format_real(double v);

void write_csv_report(std::ostream& out, const ConvergenceReport& report);
void write_csv_report(const ConvergenceReport& report, const std::filesystem::path& path);

/// Legacy ASCII VTK unstructured grid with a 3-component point vector named
/// "displacement" (2D fields padded with zeros).
void write_vtk_field(std::ostream& out, const Mesh& mesh, std::span<const double> field);
void write_vtk_field(const Mesh& mesh, std::span<const double> field, const std::filesystem::path& path);

}  // namespace elastopoint::io
