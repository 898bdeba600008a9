#pragma once

// Named test manifolds resolved from JSON manifests to analytic charts.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "curvkit/charts.hpp"

namespace curvkit {

/// Known geometric class of a catalog entry; unset flags are unknown or not
/// applicable.
struct GroundTruth {
  std::string label;
  std::optional<bool> umbilic;
  std::optional<bool> einstein;
  std::optional<bool> constant_curvature;
  std::optional<bool> weyl_free;
};

struct CatalogEntry {
  std::string name;
  int n = 0;
  /// Ambient model dimension for immersions, embedding dimension for metrics.
  int m = 0;
  AmbientSpace ambient;
  std::string parameters;  // compact JSON of the manifest parameters
  std::vector<std::string> atlas;
  std::shared_ptr<const Submanifold> submanifold;
  std::shared_ptr<const RiemannianManifold> metric;
  GroundTruth truth;
  /// Preferred coarse resolution N; 0 selects the dimension default.
  int resolution = 0;

  bool immersed() const { return static_cast<bool>(submanifold); }
};

class Catalog {
 public:
  /// Shape and metric manifests shipped in the data directory.
  static Catalog builtin();
  static Catalog load(const std::string& shape_manifest, const std::string& metric_manifest);

  /// Manifest arrays; entries with an existing name replace the old one.
  void add_shapes_json(const std::string& text);
  void add_metrics_json(const std::string& text);

  const CatalogEntry& at(const std::string& name) const;
  bool contains(const std::string& name) const;
  const std::vector<CatalogEntry>& entries() const { return entries_; }

 private:
  void put(CatalogEntry entry);
  std::vector<CatalogEntry> entries_;
};

/// Directory holding shape_catalog.json, metric_catalog.json and
/// lambda_registry.json (CURVKIT_DATA_DIR unless overridden by the
/// environment variable of the same name).
std::string data_directory();
std::string read_text_file(const std::string& path);

}  // namespace curvkit
