#pragma once

#include <string>
#include <vector>

#include "pfb/mesh.hpp"

namespace pfb {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

enum class FieldLocation { point, cell };

/// Named field attached to mesh nodes or triangles. `components` is 1 (scalar)
/// or 2 (planar vector, written as a 3-vector with zero z).
struct VtkField {
  std::string name;
  FieldLocation location = FieldLocation::point;
  int components = 1;
  std::vector<double> values;
};

/// ASCII VTK legacy 3.0 UNSTRUCTURED_GRID text. Throws InvalidArgument on a
/// field whose length does not match the mesh.
std::string format_vtk(const Mesh& mesh, const std::vector<VtkField>& fields,
                       const std::string& title = "pfb");
void write_vtk(const Mesh& mesh, const std::vector<VtkField>& fields, const std::string& path,
               const std::string& title = "pfb");

/// Column-oriented scalar series for CSV output.
struct Series {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
};

/// RFC 4180 CSV: header line then one line per row, CRLF-free (LF only).
std::string format_series(const Series& series);
void write_series(const Series& series, const std::string& path);

void write_text(const std::string& path, const std::string& text);

}  // namespace pfb
