#include "pfb/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "pfb/errors.hpp"

namespace pfb {

std::string format_double(double value) {
  if (value == 0.0) return "0";  // folds -0 so outputs do not depend on rounding sign
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error("failed writing '" + path + "'");
}

std::string format_vtk(const Mesh& mesh, const std::vector<VtkField>& fields,
                       const std::string& title) {
  for (const VtkField& f : fields) {
    if (f.components != 1 && f.components != 2) {
      throw InvalidArgument("field '" + f.name + "' must have 1 or 2 components");
    }
    const std::size_t count = f.location == FieldLocation::point
                                  ? static_cast<std::size_t>(mesh.num_nodes())
                                  : static_cast<std::size_t>(mesh.num_triangles());
    if (f.values.size() != count * f.components) {
      throw InvalidArgument("field '" + f.name + "' has " + std::to_string(f.values.size()) +
                            " values, expected " + std::to_string(count * f.components));
    }
    if (f.name.empty() || f.name.find_first_of(" \t\n") != std::string::npos) {
      throw InvalidArgument("field names must be non-empty single tokens");
    }
  }

  std::string out;
  out += "# vtk DataFile Version 3.0\n";
  out += title.substr(0, 255) + '\n';
  out += "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out += "POINTS " + std::to_string(mesh.num_nodes()) + " double\n";
  for (const Point& p : mesh.nodes()) {
    out += format_double(p.x) + ' ' + format_double(p.y) + " 0\n";
  }
  out += "CELLS " + std::to_string(mesh.num_triangles()) + ' ' +
         std::to_string(4 * mesh.num_triangles()) + '\n';
  for (const Triangle& t : mesh.triangles()) {
    out += "3 " + std::to_string(t.vertices[0]) + ' ' + std::to_string(t.vertices[1]) + ' ' +
           std::to_string(t.vertices[2]) + '\n';
  }
  out += "CELL_TYPES " + std::to_string(mesh.num_triangles()) + '\n';
  for (Index t = 0; t < mesh.num_triangles(); ++t) out += "5\n";

  auto emit = [&out](const VtkField& f) {
    if (f.components == 1) {
      out += "SCALARS " + f.name + " double 1\nLOOKUP_TABLE default\n";
      for (double v : f.values) out += format_double(v) + '\n';
    } else {
      out += "VECTORS " + f.name + " double\n";
      for (std::size_t i = 0; i < f.values.size(); i += 2) {
        out += format_double(f.values[i]) + ' ' + format_double(f.values[i + 1]) + " 0\n";
      }
    }
  };
  bool header = false;
  for (const VtkField& f : fields) {
    if (f.location != FieldLocation::point) continue;
    if (!header) out += "POINT_DATA " + std::to_string(mesh.num_nodes()) + '\n';
    header = true;
    emit(f);
  }
  header = false;
  for (const VtkField& f : fields) {
    if (f.location != FieldLocation::cell) continue;
    if (!header) out += "CELL_DATA " + std::to_string(mesh.num_triangles()) + '\n';
    header = true;
    emit(f);
  }
  return out;
}

void write_vtk(const Mesh& mesh, const std::vector<VtkField>& fields, const std::string& path,
               const std::string& title) {
  write_text(path, format_vtk(mesh, fields, title));
}

void Series::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) {
    throw InvalidArgument("series row has " + std::to_string(row.size()) + " values for " +
                          std::to_string(columns.size()) + " columns");
  }
  rows.push_back(std::move(row));
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

}  // namespace

std::string format_series(const Series& series) {
  std::string out;
  for (std::size_t i = 0; i < series.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_field(series.columns[i]);
  }
  out += '\n';
  for (const auto& row : series.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

void write_series(const Series& series, const std::string& path) {
  write_text(path, format_series(series));
}

}  // namespace pfb
