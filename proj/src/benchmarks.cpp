#include "pfb/benchmarks.hpp"

#include <algorithm>
#include <cmath>

#include "json_reader.hpp"
#include "pfb/errors.hpp"

namespace pfb {

using nlohmann::json;
using detail::ObjectReader;

bool Shape::contains(Point p) const {
  if (kind == Kind::disk) {
    const double r = params[2];
    return norm(p - Point{params[0], params[1]}) <= r * (1.0 + 1e-12);
  }
  const double scale = std::max({1.0, std::abs(params[0]), std::abs(params[1]),
                                 std::abs(params[2]), std::abs(params[3])});
  const double tol = 1e-9 * scale;
  return p.x >= params[0] - tol && p.x <= params[2] + tol && p.y >= params[1] - tol &&
         p.y <= params[3] + tol;
}

bool OutputSpec::operator==(const OutputSpec& o) const {
  if (probes.size() != o.probes.size()) return false;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    if (probes[i].name != o.probes[i].name || !(probes[i].at == o.probes[i].at)) return false;
  }
  return centerline_x == o.centerline_x && centerline_count == o.centerline_count &&
         leak_segment == o.leak_segment && snapshot_every == o.snapshot_every;
}

// ---------------------------------------------------------------- writing

namespace {

json field_json(const LinearField& f) { return {{"c", f.constant}, {"x", f.dx}, {"y", f.dy}}; }

void put_shape(json& j, const Shape& s) { j[s.kind == Shape::Kind::box ? "box" : "disk"] = s.params; }

json shape_json(const Shape& s) {
  json j = json::object();
  put_shape(j, s);
  return j;
}

json boundary_json(const std::vector<BoundarySpec>& list) {
  json out = json::array();
  for (const auto& b : list) {
    out.push_back({{"tag", b.tag}, {"type", b.type}, {"value", field_json(b.value)}});
  }
  return out;
}

}  // namespace

json to_json(const BenchmarkSpec& s) {
  json j;
  j["name"] = s.name;
  j["kind"] = s.kind;
  j["mesh"] = {{"kind", s.mesh.kind},
               {"box", {s.mesh.box.lower.x, s.mesh.box.lower.y, s.mesh.box.upper.x, s.mesh.box.upper.y}},
               {"nx", s.mesh.nx},
               {"ny", s.mesh.ny},
               {"xs", s.mesh.xs},
               {"ys", s.mesh.ys},
               {"scale", s.mesh.scale},
               {"fit_disks", s.mesh.fit_disks}};
  j["default_region"] = s.default_region;
  j["regions"] = json::array();
  for (const auto& r : s.regions) {
    json e{{"tag", r.tag}};
    put_shape(e, r.shape);
    j["regions"].push_back(e);
  }
  j["boundaries"] = json::array();
  for (const auto& r : s.boundaries) {
    json e{{"tag", r.tag}};
    put_shape(e, r.shape);
    j["boundaries"].push_back(e);
  }
  json regions = json::array();
  for (const auto& r : s.materials.regions) {
    regions.push_back({{"tag", r.tag}, {"permeability", r.permeability}, {"density", r.density}});
  }
  j["materials"] = {{"mu0", s.materials.mu0},
                    {"beta", s.materials.beta},
                    {"body_force", {s.materials.body_force.x, s.materials.body_force.y}},
                    {"regions", regions}};
  j["source"] = field_json(s.source);
  j["flow_boundary"] = boundary_json(s.flow_boundary);
  json initial_rules = json::array();
  for (const auto& r : s.transport.initial_rules) {
    json e{{"value", r.tag}};
    put_shape(e, r.shape);
    initial_rules.push_back(e);
  }
  j["transport"] = {{"enabled", s.transport.enabled},
                    {"diffusivity", s.transport.diffusivity},
                    {"dt", s.transport.dt},
                    {"t_end", s.transport.t_end},
                    {"steady_tolerance", s.transport.steady_tolerance},
                    {"initial", s.transport.initial},
                    {"initial_rules", initial_rules},
                    {"boundary", boundary_json(s.transport.boundary)}};
  json probes = json::array();
  for (const auto& p : s.outputs.probes) probes.push_back({{"name", p.name}, {"x", p.at.x}, {"y", p.at.y}});
  j["outputs"] = {{"probes", probes},
                  {"centerline_x", s.outputs.centerline_x},
                  {"centerline_count", s.outputs.centerline_count},
                  {"leak_segment", s.outputs.leak_segment ? shape_json(*s.outputs.leak_segment) : json()},
                  {"snapshot_every", s.outputs.snapshot_every}};
  j["picard_relaxation"] = s.picard_relaxation;
  j["thresholds"] = json::object();
  for (const auto& [k, v] : s.thresholds) j["thresholds"][k] = v;
  return j;
}

std::string format_spec(const BenchmarkSpec& spec) { return to_json(spec).dump(2) + "\n"; }

// ---------------------------------------------------------------- reading

namespace {

LinearField read_field(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0, 0.0};
  ObjectReader r(j, path);
  LinearField f{r.number("c", 0.0), r.number("x", 0.0), r.number("y", 0.0)};
  r.finish();
  return f;
}

std::vector<double> read_numbers(const json& j, const std::string& path) {
  detail::as_array(j, path);
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(detail::as_number(j[i], detail::join(path, i)));
  return out;
}

// Reads the "box" or "disk" member of an object being read by `r`.
Shape read_shape(ObjectReader& r) {
  const json* box = r.optional("box");
  const json* disk = r.optional("disk");
  if (box && disk) throw ConfigError(r.path(), "give either 'box' or 'disk', not both");
  if (!box && !disk) throw ConfigError(r.at("box"), "missing required field (or 'disk')");
  Shape s;
  if (box) {
    s.kind = Shape::Kind::box;
    s.params = read_numbers(*box, r.at("box"));
    if (s.params.size() != 4) throw ConfigError(r.at("box"), "expected [x0, y0, x1, y1]");
    if (s.params[0] > s.params[2] || s.params[1] > s.params[3]) {
      throw ConfigError(r.at("box"), "box corners must be ordered");
    }
  } else {
    s.kind = Shape::Kind::disk;
    s.params = read_numbers(*disk, r.at("disk"));
    if (s.params.size() != 3) throw ConfigError(r.at("disk"), "expected [cx, cy, r]");
    if (!(s.params[2] > 0.0)) throw ConfigError(r.at("disk"), "radius must be positive");
  }
  return s;
}

Shape read_shape_object(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  Shape s = read_shape(r);
  r.finish();
  return s;
}

double positive(ObjectReader& r, const std::string& key, double fallback) {
  const double v = r.number(key, fallback);
  if (!(v > 0.0)) throw ConfigError(r.at(key), "must be positive");
  return v;
}

std::vector<BoundarySpec> read_boundary(const json& j, const std::string& path,
                                        std::initializer_list<const char*> types) {
  detail::as_array(j, path);
  std::vector<BoundarySpec> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    ObjectReader r(j[i], detail::join(path, i));
    BoundarySpec b;
    b.tag = detail::as_string(r.required("tag"), r.at("tag"));
    b.type = detail::as_string(r.required("type"), r.at("type"));
    if (std::none_of(types.begin(), types.end(), [&](const char* t) { return b.type == t; })) {
      std::string allowed;
      for (const char* t : types) allowed += std::string(allowed.empty() ? "" : ", ") + t;
      throw ConfigError(r.at("type"), "unknown condition type '" + b.type + "' (expected " + allowed + ")");
    }
    b.value = read_field(r.required("value"), r.at("value"));
    for (const auto& prev : out) {
      if (prev.tag == b.tag) throw ConfigError(r.at("tag"), "duplicate boundary tag '" + b.tag + "'");
    }
    r.finish();
    out.push_back(std::move(b));
  }
  return out;
}

MeshRecipe read_mesh(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  MeshRecipe m;
  m.kind = r.string("kind", "structured");
  if (m.kind != "structured" && m.kind != "tensor") {
    throw ConfigError(r.at("kind"), "unknown mesh kind '" + m.kind + "' (expected structured or tensor)");
  }
  if (const json* box = r.optional("box")) {
    const auto b = read_numbers(*box, r.at("box"));
    if (b.size() != 4 || !(b[2] > b[0]) || !(b[3] > b[1])) {
      throw ConfigError(r.at("box"), "expected [x0, y0, x1, y1] with x1 > x0 and y1 > y0");
    }
    m.box = {{b[0], b[1]}, {b[2], b[3]}};
  }
  m.nx = r.integer("nx", m.nx);
  m.ny = r.integer("ny", m.ny);
  if (m.nx < 1) throw ConfigError(r.at("nx"), "must be at least 1");
  if (m.ny < 1) throw ConfigError(r.at("ny"), "must be at least 1");
  if (const json* xs = r.optional("xs")) m.xs = read_numbers(*xs, r.at("xs"));
  if (const json* ys = r.optional("ys")) m.ys = read_numbers(*ys, r.at("ys"));
  for (const auto& [key, lines] : {std::pair{"xs", &m.xs}, std::pair{"ys", &m.ys}}) {
    if (m.kind == "tensor" && lines->size() < 2) throw ConfigError(r.at(key), "needs at least two grid lines");
    for (std::size_t i = 1; i < lines->size(); ++i) {
      if (!((*lines)[i] > (*lines)[i - 1])) {
        throw ConfigError(detail::join(r.at(key), i), "grid lines must be strictly increasing");
      }
    }
  }
  m.scale = r.integer("scale", 1);
  if (m.scale < 1) throw ConfigError(r.at("scale"), "must be at least 1");
  m.fit_disks = r.number("fit_disks", 0.0);
  if (!(m.fit_disks >= 0.0 && m.fit_disks <= 1.0)) throw ConfigError(r.at("fit_disks"), "must lie in [0, 1]");
  r.finish();
  return m;
}

MaterialSpec read_materials(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  MaterialSpec m;
  m.mu0 = positive(r, "mu0", 1.0);
  m.beta = r.number("beta", 0.0);
  if (!(m.beta >= 0.0)) throw ConfigError(r.at("beta"), "must be non-negative");
  if (const json* b = r.optional("body_force")) {
    const auto v = read_numbers(*b, r.at("body_force"));
    if (v.size() != 2) throw ConfigError(r.at("body_force"), "expected [bx, by]");
    m.body_force = {v[0], v[1]};
  }
  const json& regions = detail::as_array(r.required("regions"), r.at("regions"));
  for (std::size_t i = 0; i < regions.size(); ++i) {
    ObjectReader e(regions[i], detail::join(r.at("regions"), i));
    RegionSpec s;
    s.tag = detail::as_int(e.required("tag"), e.at("tag"));
    s.permeability = detail::as_number(e.required("permeability"), e.at("permeability"));
    if (!(s.permeability > 0.0)) throw ConfigError(e.at("permeability"), "must be positive");
    s.density = e.number("density", 1.0);
    for (const auto& prev : m.regions) {
      if (prev.tag == s.tag) throw ConfigError(e.at("tag"), "duplicate region tag");
    }
    e.finish();
    m.regions.push_back(s);
  }
  r.finish();
  return m;
}

TransportSpec read_transport(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  TransportSpec t;
  t.enabled = r.boolean("enabled", true);
  t.diffusivity = positive(r, "diffusivity", t.diffusivity);
  t.dt = positive(r, "dt", t.dt);
  t.t_end = r.number("t_end", t.t_end);
  if (!(t.t_end >= 0.0)) throw ConfigError(r.at("t_end"), "must be non-negative");
  t.steady_tolerance = r.number("steady_tolerance", t.steady_tolerance);
  if (!(t.steady_tolerance >= 0.0)) throw ConfigError(r.at("steady_tolerance"), "must be non-negative");
  t.initial = r.number("initial", 0.0);
  if (const json* rules = r.optional("initial_rules")) {
    detail::as_array(*rules, r.at("initial_rules"));
    for (std::size_t i = 0; i < rules->size(); ++i) {
      ObjectReader e((*rules)[i], detail::join(r.at("initial_rules"), i));
      Rule<double> rule;
      rule.tag = detail::as_number(e.required("value"), e.at("value"));
      rule.shape = read_shape(e);
      e.finish();
      t.initial_rules.push_back(rule);
    }
  }
  if (const json* b = r.optional("boundary")) {
    t.boundary = read_boundary(*b, r.at("boundary"), {"dirichlet", "flux"});
  }
  r.finish();
  return t;
}

OutputSpec read_outputs(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  OutputSpec o;
  if (const json* probes = r.optional("probes")) {
    detail::as_array(*probes, r.at("probes"));
    for (std::size_t i = 0; i < probes->size(); ++i) {
      ObjectReader e((*probes)[i], detail::join(r.at("probes"), i));
      Probe p;
      p.name = detail::as_string(e.required("name"), e.at("name"));
      p.at = {detail::as_number(e.required("x"), e.at("x")), detail::as_number(e.required("y"), e.at("y"))};
      e.finish();
      o.probes.push_back(p);
    }
  }
  o.centerline_x = r.number("centerline_x", o.centerline_x);
  o.centerline_count = r.integer("centerline_count", 0);
  if (o.centerline_count < 0) throw ConfigError(r.at("centerline_count"), "must be non-negative");
  if (const json* seg = r.optional("leak_segment"); seg && !seg->is_null()) {
    o.leak_segment = read_shape_object(*seg, r.at("leak_segment"));
  }
  o.snapshot_every = r.integer("snapshot_every", 0);
  if (o.snapshot_every < 0) throw ConfigError(r.at("snapshot_every"), "must be non-negative");
  r.finish();
  return o;
}

}  // namespace

BenchmarkSpec spec_from_json(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  BenchmarkSpec s;
  s.name = detail::as_string(r.required("name"), r.at("name"));
  s.kind = r.string("kind", "generic");
  if (s.kind != "generic" && s.kind != "multilayer" && s.kind != "cylinder_inclusion" &&
      s.kind != "leaky_well") {
    throw ConfigError(r.at("kind"), "unknown benchmark kind '" + s.kind + "'");
  }
  s.mesh = read_mesh(r.required("mesh"), r.at("mesh"));
  s.default_region = r.integer("default_region", 1);
  if (const json* regions = r.optional("regions")) {
    detail::as_array(*regions, r.at("regions"));
    for (std::size_t i = 0; i < regions->size(); ++i) {
      ObjectReader e((*regions)[i], detail::join(r.at("regions"), i));
      Rule<int> rule;
      rule.tag = detail::as_int(e.required("tag"), e.at("tag"));
      rule.shape = read_shape(e);
      e.finish();
      s.regions.push_back(rule);
    }
  }
  {
    const json& b = detail::as_array(r.required("boundaries"), r.at("boundaries"));
    for (std::size_t i = 0; i < b.size(); ++i) {
      ObjectReader e(b[i], detail::join(r.at("boundaries"), i));
      Rule<std::string> rule;
      rule.tag = detail::as_string(e.required("tag"), e.at("tag"));
      rule.shape = read_shape(e);
      e.finish();
      s.boundaries.push_back(rule);
    }
  }
  s.materials = read_materials(r.required("materials"), r.at("materials"));
  if (const json* src = r.optional("source")) s.source = read_field(*src, r.at("source"));
  s.flow_boundary = read_boundary(r.required("flow_boundary"), r.at("flow_boundary"),
                                  {"pressure", "velocity"});
  if (const json* t = r.optional("transport")) {
    s.transport = read_transport(*t, r.at("transport"));
  } else {
    s.transport.enabled = false;
  }
  if (const json* o = r.optional("outputs")) s.outputs = read_outputs(*o, r.at("outputs"));
  s.picard_relaxation = r.number("picard_relaxation", 1.0);
  if (!(s.picard_relaxation > 0.0 && s.picard_relaxation <= 1.0)) {
    throw ConfigError(r.at("picard_relaxation"), "must lie in (0, 1]");
  }
  if (const json* th = r.optional("thresholds")) {
    ObjectReader e(*th, r.at("thresholds"));
    for (const auto& [key, value] : th->items()) {
      if (key != "local_balance" && key != "global_balance" && key != "centerline_velocity" &&
          key != "spurious_mass") {
        throw ConfigError(e.at(key), "unknown threshold '" + key + "'");
      }
      s.thresholds[key] = e.number(key, 0.0);
      if (!(s.thresholds[key] >= 0.0)) throw ConfigError(e.at(key), "must be non-negative");
    }
    e.finish();
  }
  r.finish();

  // Cross-references.
  for (std::size_t i = 0; i < s.flow_boundary.size(); ++i) {
    const auto& tag = s.flow_boundary[i].tag;
    if (std::none_of(s.boundaries.begin(), s.boundaries.end(), [&](const auto& b) { return b.tag == tag; })) {
      throw ConfigError(detail::join(detail::join(r.at("flow_boundary"), i), "tag"),
                        "tag '" + tag + "' is not produced by any boundary rule");
    }
  }
  auto has_region = [&](int tag) {
    return std::any_of(s.materials.regions.begin(), s.materials.regions.end(),
                       [&](const RegionSpec& m) { return m.tag == tag; });
  };
  if (!has_region(s.default_region)) throw ConfigError(r.at("default_region"), "no material for region");
  for (std::size_t i = 0; i < s.regions.size(); ++i) {
    if (!has_region(s.regions[i].tag)) {
      throw ConfigError(detail::join(detail::join(r.at("regions"), i), "tag"), "no material for region");
    }
  }
  return s;
}

// ---------------------------------------------------------------- builders

namespace {

std::vector<double> refine_lines(const std::vector<double>& lines, int scale) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
    for (int k = 0; k < scale; ++k) out.push_back(lines[i] + (lines[i + 1] - lines[i]) * k / scale);
  }
  out.push_back(lines.back());
  return out;
}

}  // namespace

Mesh build_mesh(const BenchmarkSpec& spec) {
  const MeshRecipe& m = spec.mesh;
  Mesh mesh;
  if (m.kind == "tensor") {
    const auto xs = refine_lines(m.xs, m.scale), ys = refine_lines(m.ys, m.scale);
    mesh = generate_tensor(xs, ys);
  } else {
    mesh = generate_structured(m.nx * m.scale, m.ny * m.scale, m.box);
  }
  if (m.fit_disks > 0.0) {
    const double cells = std::sqrt(static_cast<double>(mesh.num_triangles()) / 2.0);
    const Rectangle& b = m.box;
    const double h = std::sqrt(b.area()) / cells;
    for (const auto& r : spec.regions) {
      if (r.shape.kind != Shape::Kind::disk) continue;
      const auto& d = r.shape.params;
      mesh = fit_circle(mesh, {d[0], d[1]}, d[2], m.fit_disks * h);
    }
  }
  mesh = mark_regions(mesh, [&](Point c) {
    for (const auto& r : spec.regions) {
      if (r.shape.contains(c)) return r.tag;
    }
    return spec.default_region;
  });
  return mark_boundaries(mesh, [&](Point mid) -> std::optional<std::string> {
    for (const auto& b : spec.boundaries) {
      if (b.shape.contains(mid)) return b.tag;
    }
    return std::nullopt;
  });
}

FlowProblem build_flow_problem(const BenchmarkSpec& spec, std::shared_ptr<const Mesh> mesh,
                               Formulation formulation) {
  FlowProblem p;
  p.mesh = std::move(mesh);
  p.formulation = formulation;
  p.materials.viscosity = {spec.materials.mu0, spec.materials.beta};
  p.materials.body_force = spec.materials.body_force;
  for (const auto& r : spec.materials.regions) p.materials.regions[r.tag] = {r.permeability, r.density};
  if (!(spec.source == LinearField{})) p.source = spec.source;
  for (const auto& b : spec.flow_boundary) {
    p.boundary[b.tag] = b.type == "pressure" ? FlowBoundaryCondition::pressure(b.value)
                                             : FlowBoundaryCondition::velocity(b.value);
  }
  return p;
}

TransportProblem build_transport_problem(const BenchmarkSpec& spec, std::shared_ptr<const Mesh> mesh) {
  const TransportSpec& t = spec.transport;
  TransportProblem p;
  p.mesh = std::move(mesh);
  p.diffusivity = t.diffusivity;
  p.dt = t.dt;
  p.t_end = t.t_end;
  p.initial = [rules = t.initial_rules, fallback = t.initial](Point x) {
    for (const auto& r : rules) {
      if (r.shape.contains(x)) return r.tag;
    }
    return fallback;
  };
  for (const auto& b : t.boundary) {
    p.boundary[b.tag] = b.type == "dirichlet" ? TransportBoundaryCondition::dirichlet(b.value)
                                              : TransportBoundaryCondition::flux(b.value);
  }
  return p;
}

std::vector<Index> leak_segment_edges(const BenchmarkSpec& spec, const Mesh& mesh) {
  std::vector<Index> out;
  if (!spec.outputs.leak_segment) return out;
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    if (spec.outputs.leak_segment->contains(mesh.midpoint(e))) out.push_back(e);
  }
  return out;
}

// ---------------------------------------------------------------- builtins

namespace {

Shape box(double x0, double y0, double x1, double y1) { return {Shape::Kind::box, {x0, y0, x1, y1}}; }

std::vector<Rule<std::string>> box_boundaries(const Rectangle& b) {
  return {{"left", box(b.lower.x, b.lower.y, b.lower.x, b.upper.y)},
          {"right", box(b.upper.x, b.lower.y, b.upper.x, b.upper.y)},
          {"bottom", box(b.lower.x, b.lower.y, b.upper.x, b.lower.y)},
          {"top", box(b.lower.x, b.upper.y, b.upper.x, b.upper.y)}};
}

// Grid lines through every entry of `fixed`, with spacing h_min + growth * d
// at distance d from the nearest fixed line, capped at h_max.
std::vector<double> graded_lines(std::vector<double> fixed, double h_min, double growth, double h_max) {
  std::sort(fixed.begin(), fixed.end());
  auto size_at = [&](double x) {
    double d = std::abs(x - fixed.front());
    for (double f : fixed) d = std::min(d, std::abs(x - f));
    return std::min(h_max, h_min + growth * d);
  };
  std::vector<double> out{fixed.front()};
  for (std::size_t i = 0; i + 1 < fixed.size(); ++i) {
    const double a = fixed[i], b = fixed[i + 1];
    std::vector<double> steps;
    for (double x = a; x < b - 1e-9 * (b - a);) {
      const double h = size_at(x);
      steps.push_back(h);
      x += h;
    }
    double total = 0.0;
    for (double h : steps) total += h;
    // Drop a sliver step if the march overshot by most of a cell.
    if (steps.size() > 1 && total - (b - a) > 0.5 * steps.back()) {
      total -= steps.back();
      steps.pop_back();
    }
    double x = a;
    for (std::size_t k = 0; k + 1 < steps.size(); ++k) {
      x += steps[k] * (b - a) / total;
      out.push_back(x);
    }
    out.push_back(b);
  }
  return out;
}

}  // namespace

BenchmarkSpec multilayer() {
  BenchmarkSpec s;
  s.name = "multilayer";
  s.kind = "multilayer";
  s.mesh.box = {{0, 0}, {1, 1}};
  s.mesh.nx = 20;
  s.mesh.ny = 20;
  const double k[5] = {1.0, 5.0, 0.5, 3.0, 8.0};
  for (int i = 0; i < 5; ++i) {
    s.regions.push_back({i + 1, box(0.0, 0.2 * i, 1.0, 0.2 * (i + 1))});
    s.materials.regions.push_back({i + 1, k[i] * 1e-13, 996.1});
  }
  s.default_region = 1;
  s.boundaries = box_boundaries(s.mesh.box);
  s.materials.mu0 = 1e-8;
  s.flow_boundary = {{"left", "pressure", {1e5, 0, 0}},
                     {"right", "pressure", {0, 0, 0}},
                     {"bottom", "velocity", {}},
                     {"top", "velocity", {}}};
  s.transport.diffusivity = 0.01;
  s.transport.dt = 0.01;
  s.transport.t_end = 5.0;
  s.transport.boundary = {{"left", "dirichlet", {1.0, 0, 0}},
                          {"right", "flux", {}},
                          {"bottom", "flux", {}},
                          {"top", "flux", {}}};
  s.outputs.centerline_x = 0.5;
  s.outputs.centerline_count = 200;
  s.outputs.snapshot_every = 50;
  s.thresholds = {{"local_balance", 1e-10}, {"global_balance", 1e-8}, {"centerline_velocity", 1e-6}};
  return s;
}

BenchmarkSpec cylinder_inclusion(double k2) {
  BenchmarkSpec s;
  s.name = "cylinder_inclusion";
  s.kind = "cylinder_inclusion";
  s.mesh.box = {{0, 0}, {1.2, 0.95}};
  s.mesh.nx = 24;
  s.mesh.ny = 19;
  s.mesh.fit_disks = 0.5;
  const Shape disk{Shape::Kind::disk, {0.6, 0.475, 0.24}};
  s.regions = {{2, disk}};
  s.default_region = 1;
  s.boundaries = box_boundaries(s.mesh.box);
  s.materials.mu0 = 1.13e-3;
  s.materials.regions = {{1, 1e-8, 996.1}, {2, k2, 996.1}};
  s.flow_boundary = {{"left", "pressure", {2.1721e5, 0, 0}},
                     {"right", "pressure", {0, 0, 0}},
                     {"bottom", "velocity", {}},
                     {"top", "velocity", {}}};
  s.transport.diffusivity = 0.01;
  s.transport.dt = 0.01;
  s.transport.t_end = 10.0;
  s.transport.initial = 0.0;
  s.transport.initial_rules = {{1.0, disk}};
  s.transport.boundary = {{"left", "dirichlet", {0, 0, 0}},
                          {"right", "flux", {}},
                          {"bottom", "flux", {}},
                          {"top", "flux", {}}};
  s.outputs.snapshot_every = 100;
  s.thresholds = {{"local_balance", 1e-10}, {"global_balance", 1e-8}};
  return s;
}

BenchmarkSpec leaky_well(double beta) {
  BenchmarkSpec s;
  s.name = "leaky_well";
  s.kind = "leaky_well";
  const double width = 200.0, bottom_top = 30.0, tard_top = 130.0, height = 160.0;
  const double port_x = 50.0, well_x = 150.0, r = 0.15;
  s.mesh.kind = "tensor";
  s.mesh.box = {{0, 0}, {width, height}};
  s.mesh.xs = graded_lines({0.0, port_x - r, port_x, port_x + r, well_x - r, well_x, well_x + r, width},
                           0.05, 0.35, 8.0);
  s.mesh.ys = graded_lines({0.0, bottom_top, tard_top, height}, 0.15, 0.35, 8.0);
  s.regions = {{3, box(well_x - r, bottom_top, well_x + r, tard_top)},
               {2, box(0.0, bottom_top, width, tard_top)}};
  s.default_region = 1;
  s.boundaries = {{"port", box(port_x - r, 0.0, port_x + r, 0.0)},
                  {"bottom", box(0.0, 0.0, width, 0.0)},
                  {"top", box(0.0, height, width, height)},
                  {"left", box(0.0, 0.0, 0.0, height)},
                  {"right", box(width, 0.0, width, height)}};
  s.materials.mu0 = 3.95e-5;
  s.materials.beta = beta;
  s.materials.body_force = {0.0, -9.8};
  s.materials.regions = {{1, 1e-12, 479.0}, {2, 1e-14, 479.0}, {3, 1e-12, 479.0}};
  // 3.075e7 + 1.025e4 * (height - y)
  const LinearField open{3.075e7 + 1.025e4 * height, 0.0, -1.025e4};
  s.flow_boundary = {{"port", "pressure", {2.03e9, 0, 0}},
                     {"bottom", "velocity", {}},
                     {"top", "velocity", {}},
                     {"left", "pressure", open},
                     {"right", "pressure", open}};
  s.transport.diffusivity = 0.01;
  s.transport.dt = 60.0;
  s.transport.t_end = 12.0 * 86400.0;
  s.transport.boundary = {{"port", "dirichlet", {1.0, 0, 0}},
                          {"bottom", "flux", {}},
                          {"top", "flux", {}},
                          {"left", "flux", {}},
                          {"right", "flux", {}}};
  s.outputs.leak_segment = box(well_x - r, tard_top, well_x + r, tard_top);
  s.outputs.probes = {{"well_top", {well_x, tard_top}}, {"well_bottom", {well_x, bottom_top}}};
  s.outputs.snapshot_every = 1440;
  s.thresholds = {{"global_balance", 1e-8}};
  return s;
}

BenchmarkSpec builtin_benchmark(const std::string& name) {
  if (name == "multilayer") return multilayer();
  if (name == "cylinder_inclusion") return cylinder_inclusion();
  if (name == "leaky_well") return leaky_well();
  throw InvalidArgument("unknown benchmark '" + name + "'");
}

std::vector<std::string> builtin_benchmark_names() {
  return {"multilayer", "cylinder_inclusion", "leaky_well"};
}

}  // namespace pfb
