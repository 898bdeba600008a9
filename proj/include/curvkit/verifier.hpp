#pragma once

// Both sides of every inequality, verdicts at two resolutions, the equality
// taxonomy and the conformal sharpness sweep.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "curvkit/catalog.hpp"
#include "curvkit/spectral.hpp"

namespace curvkit {

enum class Theorem { thm_main, thm_R_i, thm_R_ii, cor_B, gwx, thm_main_rephrased };
std::string to_string(Theorem t);

enum class Verdict { holds, equality, violated, inconclusive };
std::string to_string(Verdict v);
/// Worst of two verdicts: violated > inconclusive > holds > equality.
Verdict combine(Verdict a, Verdict b);

/// Inequality constant for the given theorem and order (r for thm_main, k
/// for gwx, unused otherwise).
double constant_for(Theorem t, int n, int order = 0);

struct ResolutionSample {
  int N = 0;
  double lhs = 0.0;
  double rhs_raw = 0.0;
  double rhs = 0.0;
  double scale = 0.0;  // integral of the squared raw curvature quantities
};

struct CertificateInfo {
  double ricci_min = 0.0;
  double K = 0.0;
  std::optional<bool> convex;
  bool user_supplied = false;
};

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct InequalityReport {
  std::string case_name;
  Theorem theorem = Theorem::thm_main;
  std::map<std::string, double> params;
  double lhs = 0.0;
  double rhs_raw = 0.0;
  double constant = 0.0;
  double correction = 1.0;
  double rhs = 0.0;
  std::optional<double> ratio;  // empty for 0 = 0
  Verdict verdict = Verdict::holds;
  std::vector<ResolutionSample> resolutions;
  CertificateInfo certificate;
  std::optional<EigenvalueEstimate> lambda;
  bool converged = true;
  bool exploratory = false;
  std::vector<Check> checks;
  std::vector<std::string> notes;

  bool checks_pass() const;
};

struct VerifyOptions {
  /// Coarse resolution N; reports use N and 2N. 0 selects a default by n.
  int resolution = 0;
  /// Exploratory override of the Ricci parameter.
  std::optional<double> user_K;
};

/// Default coarse resolution: 48, 24, 12 and 8 for n = 2, 3, 4 and n >= 5.
int default_resolution(int n);

struct SweepRow {
  double t = 0.0;
  std::optional<double> ratio_i;
  std::optional<double> ratio_ii;
  double ricci_min = 0.0;
  double weyl_l2 = 0.0;
  Verdict verdict = Verdict::holds;
  bool excluded = false;
  /// |ratio_i - ratio_ii| / ratio_i; zero for 0 = 0 rows.
  double identity_residual = 0.0;
};

struct SweepResult {
  std::string base;
  std::string f_id;
  std::vector<SweepRow> rows;
  std::optional<double> max_ratio;
  bool monotone = true;
};

struct TaxonomyFlags {
  std::optional<bool> umbilic;
  std::optional<bool> einstein;
  std::optional<bool> weyl_free;
  std::optional<bool> constant_curvature;
};

struct TaxonomyReport {
  std::string case_name;
  TaxonomyFlags computed;
  GroundTruth truth;
  std::vector<InequalityReport> reports;
  std::vector<Check> assertions;

  bool consistent() const;
};

class Verifier {
 public:
  explicit Verifier(LambdaRegistry registry = LambdaRegistry::builtin());
  ~Verifier();

  const LambdaRegistry& registry() const { return registry_; }

  /// Integral of |H_r - mean|^2 against |T°^r|^2; the second report is the
  /// equivalent form with T^r - ((n-r)/n) mean(H_r) I on the left.
  std::pair<InequalityReport, InequalityReport> verify_thm_main(const CatalogEntry& entry, int r,
                                                                const VerifyOptions& options = {});
  /// (i) scalar curvature against traceless Ricci, (ii) against
  /// |Rm - R/(n(n-1)) B|^2.
  std::pair<InequalityReport, InequalityReport> verify_thm_R(const CatalogEntry& entry, const VerifyOptions& options = {});
  InequalityReport verify_cor_B(const CatalogEntry& entry, const VerifyOptions& options = {});
  InequalityReport verify_gwx(const CatalogEntry& entry, int k, const VerifyOptions& options = {});

  /// g_t = (1 + t f) g on the unit S^n for t on an even grid.
  SweepResult sharpness_sweep(int n, const std::string& f_id, double t_min, double t_max, int steps,
                              const VerifyOptions& options = {});

  TaxonomyReport equality_taxonomy(const CatalogEntry& entry, const VerifyOptions& options = {});

  void clear_cache();

  struct Impl;

 private:
  LambdaRegistry registry_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace curvkit
