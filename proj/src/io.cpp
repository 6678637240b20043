#include "elastopoint/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "elastopoint/errors.hpp"

namespace elastopoint::io {
namespace {

double parse_number(const std::string& token, std::size_t line) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ParseError(line, "not a number: '" + token + "'");
  return v;
}

std::ofstream open_for_writing(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace

PointLoadSet parse_loads(std::istream& in, int dim) {
  if (dim != 2 && dim != 3) throw ArgumentError("loads need dim 2 or 3");
  PointLoadSet set;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (const auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    if (!text.empty() && text.back() == '\r') text.pop_back();
    std::istringstream fields(text);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok[0] != "point") throw ParseError(line_no, "expected 'point', found '" + tok[0] + "'");
    const auto expected = static_cast<std::size_t>(1 + 2 * dim);
    if (tok.size() != expected) {
      throw ParseError(line_no, "expected " + std::to_string(2 * dim) + " numbers for dim " + std::to_string(dim) +
                                    ", found " + std::to_string(tok.size() - 1));
    }
    PointLoad load;
    for (int a = 0; a < dim; ++a) {
      load.location[a] = parse_number(tok[1 + a], line_no);
      load.force[a] = parse_number(tok[1 + dim + a], line_no);
    }
    for (int a = 0; a < dim; ++a) {
      if (!(load.location[a] > 0.0 && load.location[a] < 1.0)) {
        throw ValidationError("line " + std::to_string(line_no) + ": load location must be strictly inside the unit box");
      }
    }
    set.loads.push_back(load);
  }
  set.validate(dim);
  return set;
}

PointLoadSet parse_loads_file(const std::filesystem::path& path, int dim) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open loads file '" + path.string() + "'");
  return parse_loads(in, dim);
}

void write_loads(std::ostream& out, const PointLoadSet& loads, int dim) {
  char buf[32];
  auto put = [&](double v) {
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out << ' ' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
  };
  for (const auto& l : loads.loads) {
    out << "point";
    for (int a = 0; a < dim; ++a) put(l.location[a]);
    for (int a = 0; a < dim; ++a) put(l.force[a]);
    out << '\n';
  }
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv_report(std::ostream& out, const ConvergenceReport& report) {
  out << kReportHeader << '\n';
  for (const auto& r : report.rows) {
    out << r.level << ',' << r.n << ',' << format_real(r.h) << ',' << r.ndof << ',' << format_real(r.error_l2) << ',';
    if (r.eoc) out << format_real(*r.eoc);
    out << '\n';
  }
}

void write_csv_report(const ConvergenceReport& report, const std::filesystem::path& path) {
  auto out = open_for_writing(path);
  write_csv_report(out, report);
  finish(out, path);
}

void write_vtk_field(std::ostream& out, const Mesh& mesh, std::span<const double> field) {
  const auto d = static_cast<std::size_t>(mesh.dim());
  if (field.size() != mesh.num_vertices() * d) throw ArgumentError("VTK field length does not match the mesh");
  out << "# vtk DataFile Version 3.0\n"
      << "elastopoint displacement\n"
      << "ASCII\n"
      << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (const auto& p : mesh.vertices()) out << format_real(p[0]) << ' ' << format_real(p[1]) << ' ' << format_real(p[2]) << '\n';
  const std::size_t per_cell = d + 1;
  out << "CELLS " << mesh.num_cells() << ' ' << mesh.num_cells() * (per_cell + 1) << '\n';
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    out << per_cell;
    for (int v : mesh.cell(c)) out << ' ' << v;
    out << '\n';
  }
  out << "CELL_TYPES " << mesh.num_cells() << '\n';
  const int type = d == 2 ? 5 : 10;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) out << type << '\n';
  out << "POINT_DATA " << mesh.num_vertices() << '\n' << "VECTORS displacement double\n";
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    for (std::size_t a = 0; a < 3; ++a) {
      if (a > 0) out << ' ';
      out << format_real(a < d ? field[v * d + a] : 0.0);
    }
    out << '\n';
  }
}

void write_vtk_field(const Mesh& mesh, std::span<const double> field, const std::filesystem::path& path) {
  auto out = open_for_writing(path);
  write_vtk_field(out, mesh, field);
  finish(out, path);
}

}  // namespace elastopoint::io
