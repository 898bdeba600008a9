#include "curvkit/catalog.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "curvkit/analytic_charts.hpp"
#include "curvkit/intrinsic_geometry.hpp"
#include "json.hpp"

#ifndef CURVKIT_DATA_DIR
#define CURVKIT_DATA_DIR "data"
#endif

namespace curvkit {

using nlohmann::json;

namespace {

std::optional<bool> flag(const json& truth, const char* key) {
  if (!truth.contains(key) || truth.at(key).is_null()) return std::nullopt;
  return truth.at(key).get<bool>();
}

GroundTruth parse_truth(const json& entry) {
  GroundTruth t;
  if (!entry.contains("ground_truth")) return t;
  const auto& g = entry.at("ground_truth");
  t.label = g.value("class", std::string());
  t.umbilic = flag(g, "umbilic");
  t.einstein = flag(g, "einstein");
  t.constant_curvature = flag(g, "constant_curvature");
  t.weyl_free = flag(g, "weyl_free");
  return t;
}

std::vector<std::string> string_list(const json& j) {
  std::vector<std::string> out;
  for (const auto& v : j) out.push_back(v.get<std::string>());
  return out;
}

struct BuiltShape {
  Submanifold sub;
  std::vector<std::string> atlas;
};

BuiltShape build_shape(int n, const json& p) {
  const std::string family = p.at("family").get<std::string>();
  if (family == "round_sphere") {
    const double radius = p.value("radius", 1.0);
    const std::string atlas = p.value("atlas", std::string("polar"));
    if (atlas == "polar") return {round_sphere(n, radius), {"polar"}};
    if (atlas == "stereographic")
      return {round_sphere_stereographic(n, radius, p.value("h0", 0.5)), {"stereo-north", "stereo-south"}};
    throw ArgumentError("unknown sphere atlas '" + atlas + "'");
  }
  if (family == "ellipsoid") return {ellipsoid(p.at("axes").get<std::vector<double>>()), {"polar"}};
  if (family == "quartic_sphere")
    return {quartic_sphere(n, p.at("seed").get<std::uint64_t>(), p.at("eps").get<double>()), {"polar"}};
  if (family == "product_torus") return {product_torus(p.at("a").get<double>(), p.at("b").get<double>()), {"periodic-box"}};
  if (family == "circle_times_sphere")
    return {circle_times_sphere(p.at("a").get<double>(), p.at("b").get<double>()), {"circle*polar"}};
  if (family == "latitude_sphere") return {latitude_sphere(n, p.at("rho").get<double>()), {"polar"}};
  if (family == "clifford_hypersurface") return {clifford_hypersurface(p.at("a").get<double>()), {"circle*polar"}};
  if (family == "hyperbolic_geodesic_sphere") return {hyperbolic_geodesic_sphere(n, p.at("r").get<double>()), {"polar"}};
  throw ArgumentError("unknown shape family '" + family + "'");
}

struct BuiltMetric {
  RiemannianManifold mfd;
  std::vector<std::string> atlas;
};

BuiltMetric build_metric(int n, const json& base) {
  const std::string family = base.at("family").get<std::string>();
  if (family == "round_sphere") {
    const int dim = base.value("n", n);
    const double radius = base.value("radius", 1.0);
    const std::string atlas = base.value("atlas", std::string("polar"));
    if (atlas == "polar") return {round_sphere_metric(dim, radius), {"polar"}};
    if (atlas == "stereographic")
      return {round_sphere_metric_stereographic(dim, radius, base.value("h0", 0.5)), {"stereo-north", "stereo-south"}};
    throw ArgumentError("unknown sphere atlas '" + atlas + "'");
  }
  if (family == "flat_torus") return {flat_torus(base.at("lengths").get<std::vector<double>>()), {"periodic-box"}};
  if (family == "circle") return {circle_metric(base.value("length", 2 * std::numbers::pi)), {"periodic-box"}};
  if (family == "random_trig")
    return {random_trig_metric(base.value("n", n), base.at("seed").get<std::uint64_t>(), base.at("eps").get<double>()),
            {"periodic-box"}};
  if (family == "product") {
    const auto& factors = base.at("factors");
    if (factors.size() != 2) throw ArgumentError("product metrics take exactly two factors");
    BuiltMetric a = build_metric(0, factors[0]);
    BuiltMetric b = build_metric(0, factors[1]);
    BuiltMetric out{product_manifold(a.mfd, b.mfd, a.mfd.name + "x" + b.mfd.name), {}};
    for (const auto& ia : a.atlas)
      for (const auto& ib : b.atlas) out.atlas.push_back(ia + "*" + ib);
    return out;
  }
  throw ArgumentError("unknown metric family '" + family + "'");
}

}  // namespace

void Catalog::put(CatalogEntry entry) {
  for (auto& e : entries_)
    if (e.name == entry.name) {
      e = std::move(entry);
      return;
    }
  entries_.push_back(std::move(entry));
}

void Catalog::add_shapes_json(const std::string& text) try {
  const json doc = json::parse(text);
  if (!doc.is_array()) throw ArgumentError("shape manifest must be a JSON array");
  for (const auto& e : doc) {
    CatalogEntry entry;
    entry.name = e.at("name").get<std::string>();
    entry.n = e.at("n").get<int>();
    entry.m = e.at("m").get<int>();
    const auto& amb = e.at("ambient");
    entry.ambient = AmbientSpace{ambient_kind_from_string(amb.at("kind").get<std::string>()), amb.value("c", 0.0)};
    entry.ambient.validate();
    const auto& params = e.at("parameters");
    entry.parameters = params.dump();
    BuiltShape built = build_shape(entry.n, params);
    if (built.sub.n != entry.n || built.sub.m != entry.m)
      throw ArgumentError("shape '" + entry.name + "': manifest dimensions do not match the family");
    if (built.sub.ambient.kind != entry.ambient.kind || std::abs(built.sub.ambient.c - entry.ambient.c) > 1e-12)
      throw ArgumentError("shape '" + entry.name + "': manifest ambient does not match the family");
    built.sub.name = entry.name;
    entry.atlas = built.atlas;
    entry.submanifold = std::make_shared<const Submanifold>(std::move(built.sub));
    entry.truth = parse_truth(e);
    entry.resolution = e.value("resolution", 0);
    if (entry.resolution != 0 && entry.resolution < 8)
      throw ArgumentError("'" + entry.name + "': resolution must be >= 8");
    put(std::move(entry));
  }
} catch (const json::exception& e) {
  throw ArgumentError(std::string("shape manifest: ") + e.what());
}

void Catalog::add_metrics_json(const std::string& text) try {
  const json doc = json::parse(text);
  if (!doc.is_array()) throw ArgumentError("metric manifest must be a JSON array");
  for (const auto& e : doc) {
    CatalogEntry entry;
    entry.name = e.at("name").get<std::string>();
    entry.n = e.at("n").get<int>();
    BuiltMetric built = build_metric(entry.n, e.at("base"));
    if (built.mfd.n != entry.n) throw ArgumentError("metric '" + entry.name + "': manifest dimension does not match the base");
    if (e.contains("atlas")) {
      const auto ids = string_list(e.at("atlas"));
      if (ids != built.atlas) throw ArgumentError("metric '" + entry.name + "': atlas ids do not match the base charts");
    }
    json params = json::object();
    params["base"] = e.at("base");
    if (e.contains("family") && !e.at("family").is_null()) {
      const auto& fam = e.at("family");
      const AmbientFunction f = basis_function(fam.at("f").get<std::string>());
      built.mfd = conformal_manifold(built.mfd, f, fam.at("t").get<double>());
      params["family"] = fam;
    }
    built.mfd.name = entry.name;
    entry.m = built.mfd.embedding_dim;
    entry.parameters = params.dump();
    entry.atlas = built.atlas;
    entry.metric = std::make_shared<const RiemannianManifold>(std::move(built.mfd));
    entry.truth = parse_truth(e);
    entry.resolution = e.value("resolution", 0);
    if (entry.resolution != 0 && entry.resolution < 8)
      throw ArgumentError("'" + entry.name + "': resolution must be >= 8");
    put(std::move(entry));
  }
} catch (const json::exception& e) {
  throw ArgumentError(std::string("metric manifest: ") + e.what());
}

const CatalogEntry& Catalog::at(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return e;
  throw ArgumentError("unknown catalog case '" + name + "'");
}

bool Catalog::contains(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return true;
  return false;
}

std::string data_directory() {
  if (const char* env = std::getenv("CURVKIT_DATA_DIR")) return env;
  return CURVKIT_DATA_DIR;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Catalog Catalog::load(const std::string& shape_manifest, const std::string& metric_manifest) {
  Catalog c;
  c.add_shapes_json(read_text_file(shape_manifest));
  c.add_metrics_json(read_text_file(metric_manifest));
  return c;
}

Catalog Catalog::builtin() {
  const std::string dir = data_directory();
  return load(dir + "/shape_catalog.json", dir + "/metric_catalog.json");
}

}  // namespace curvkit
