#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pfb/errors.hpp"
#include "pfb/mesh.hpp"
#include "pfb/output.hpp"

namespace pfb {

namespace {

constexpr std::string_view kMagic = "pfb-mesh 1";

struct LineReader {
  std::string_view text;
  std::size_t pos = 0;
  int line_no = 0;

  /// Next non-blank, non-comment line; false at end of input.
  bool next(std::string_view& out) {
    while (pos < text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string_view::npos || line[first] == '#') continue;
      out = line.substr(first);
      return true;
    }
    return false;
  }

  std::string_view expect(const char* what) {
    std::string_view line;
    if (!next(line)) throw ParseError(std::string("unexpected end of file, expected ") + what, line_no);
    return line;
  }
};

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class T>
T parse_number(std::string_view s, int line, const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(std::string("invalid ") + what + " '" + std::string(s) + "'", line);
  }
  return value;
}

Index parse_count(LineReader& in, std::string_view keyword) {
  const std::string_view line = in.expect(std::string(keyword).c_str());
  const auto tok = split(line);
  if (tok.size() != 2 || tok[0] != keyword) {
    throw ParseError("expected '" + std::string(keyword) + " <count>'", in.line_no);
  }
  const Index n = parse_number<Index>(tok[1], in.line_no, "count");
  if (n < 0) throw ParseError("negative count", in.line_no);
  return n;
}

Index parse_id(std::string_view tok, Index count, std::vector<char>& seen, int line,
               const char* entity) {
  const Index id = parse_number<Index>(tok, line, "id");
  if (id < 0 || id >= count) {
    throw ParseError(std::string(entity) + " id " + std::to_string(id) + " out of range", line);
  }
  if (seen[id]) {
    throw ParseError("duplicate " + std::string(entity) + " id " + std::to_string(id), line);
  }
  seen[id] = 1;
  return id;
}

}  // namespace

std::string format_mesh(const Mesh& mesh) {
  std::string out;
  out += kMagic;
  out += '\n';
  out += "nodes " + std::to_string(mesh.num_nodes()) + '\n';
  for (Index i = 0; i < mesh.num_nodes(); ++i) {
    out += std::to_string(i) + ' ' + format_double(mesh.node(i).x) + ' ' +
           format_double(mesh.node(i).y) + '\n';
  }
  out += "triangles " + std::to_string(mesh.num_triangles()) + '\n';
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const Triangle& tri = mesh.triangle(t);
    out += std::to_string(t) + ' ' + std::to_string(tri.vertices[0]) + ' ' +
           std::to_string(tri.vertices[1]) + ' ' + std::to_string(tri.vertices[2]) + ' ' +
           std::to_string(tri.region) + '\n';
  }
  out += "edges " + std::to_string(mesh.num_edges()) + '\n';
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    const auto tag = mesh.boundary_tag(e);
    out += std::to_string(e) + ' ' + std::to_string(mesh.edge(e).nodes[0]) + ' ' +
           std::to_string(mesh.edge(e).nodes[1]) + ' ' + (tag ? std::string(*tag) : "-") + '\n';
  }
  return out;
}

Mesh parse_mesh(std::string_view text) {
  LineReader in{text};
  std::string_view line;
  if (!in.next(line)) throw ParseError("empty mesh file", 1);
  if (line != kMagic) throw ParseError("missing 'pfb-mesh 1' header", in.line_no);

  const Index n_nodes = parse_count(in, "nodes");
  std::vector<Point> nodes(n_nodes);
  std::vector<char> seen(n_nodes, 0);
  for (Index k = 0; k < n_nodes; ++k) {
    const auto tok = split(in.expect("node record"));
    if (tok.size() != 3) throw ParseError("node record needs 'id x y'", in.line_no);
    const Index id = parse_id(tok[0], n_nodes, seen, in.line_no, "node");
    nodes[id] = {parse_number<double>(tok[1], in.line_no, "coordinate"),
                 parse_number<double>(tok[2], in.line_no, "coordinate")};
  }

  const Index n_tris = parse_count(in, "triangles");
  std::vector<std::array<Index, 3>> tris(n_tris);
  std::vector<int> regions(n_tris);
  seen.assign(n_tris, 0);
  for (Index k = 0; k < n_tris; ++k) {
    const auto tok = split(in.expect("triangle record"));
    if (tok.size() != 5) throw ParseError("triangle record needs 'id v0 v1 v2 region'", in.line_no);
    const Index id = parse_id(tok[0], n_tris, seen, in.line_no, "triangle");
    for (int i = 0; i < 3; ++i) {
      tris[id][i] = parse_number<Index>(tok[1 + i], in.line_no, "vertex id");
      if (tris[id][i] < 0 || tris[id][i] >= n_nodes) {
        throw ParseError("vertex id out of range", in.line_no);
      }
    }
    regions[id] = parse_number<int>(tok[4], in.line_no, "region");
  }
  const int triangles_end = in.line_no;

  Mesh mesh;
  try {
    mesh = Mesh(std::move(nodes), std::move(tris), std::move(regions));
  } catch (const GeometryError& e) {
    throw ParseError(e.what(), triangles_end);
  }

  const Index n_edges = parse_count(in, "edges");
  if (n_edges != mesh.num_edges()) {
    throw ParseError("edge count " + std::to_string(n_edges) + " does not match topology (" +
                         std::to_string(mesh.num_edges()) + ")",
                     in.line_no);
  }
  std::vector<std::optional<std::string>> tags(n_edges);
  seen.assign(n_edges, 0);
  for (Index k = 0; k < n_edges; ++k) {
    const auto tok = split(in.expect("edge record"));
    if (tok.size() != 4) throw ParseError("edge record needs 'id a b tag'", in.line_no);
    const Index id = parse_id(tok[0], n_edges, seen, in.line_no, "edge");
    const std::array<Index, 2> ends{parse_number<Index>(tok[1], in.line_no, "node id"),
                                    parse_number<Index>(tok[2], in.line_no, "node id")};
    if (ends != mesh.edge(id).nodes) {
      throw ParseError("edge " + std::to_string(id) + " endpoints do not match topology",
                       in.line_no);
    }
    if (tok[3] != "-") {
      if (!mesh.edge(id).on_boundary()) {
        throw ParseError("interior edge " + std::to_string(id) + " carries a boundary tag",
                         in.line_no);
      }
      tags[id] = std::string(tok[3]);
    }
  }
  if (in.next(line)) throw ParseError("trailing content after edge records", in.line_no);
  return mesh.with_boundary_tags(tags);
}

void save_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << format_mesh(mesh);
  if (!out) throw Error("failed writing '" + path + "'");
}

Mesh load_mesh(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_mesh(buf.str());
}

}  // namespace pfb
