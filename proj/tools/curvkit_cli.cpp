#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "curvkit/catalog.hpp"
#include "curvkit/errors.hpp"
#include "curvkit/quadrature.hpp"
#include "curvkit/report_io.hpp"
#include "curvkit/selftest.hpp"
#include "curvkit/spectral.hpp"
#include "curvkit/verifier.hpp"

using namespace curvkit;

namespace {

struct Globals {
  unsigned threads = 1;
  std::string shapes, metrics, registry;
};

Catalog load_catalog(const Globals& g) {
  if (g.shapes.empty() && g.metrics.empty()) return Catalog::builtin();
  const std::string dir = data_directory();
  return Catalog::load(g.shapes.empty() ? dir + "/shape_catalog.json" : g.shapes,
                       g.metrics.empty() ? dir + "/metric_catalog.json" : g.metrics);
}

LambdaRegistry load_registry(const Globals& g) {
  LambdaRegistry reg = LambdaRegistry::builtin();
  if (!g.registry.empty())
    for (const auto& [name, est] : LambdaRegistry::load(g.registry).entries()) reg.add(name, est.value, est.provenance);
  return reg;
}

std::string truth_class(const GroundTruth& t) {
  if (!t.label.empty()) return t.label;
  std::vector<std::string> parts;
  if (t.constant_curvature.value_or(false)) parts.push_back("constant-curvature");
  if (t.einstein.value_or(false)) parts.push_back("einstein");
  if (t.umbilic.value_or(false)) parts.push_back("umbilic");
  if (parts.empty()) return "generic";
  std::string s = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) s += "," + parts[i];
  return s;
}

int parse_sphere_dimension(const std::string& base) {
  static const std::regex pattern(R"((?:sphere-|S)(\d+)(?:-metric)?)");
  std::smatch m;
  if (!std::regex_match(base, m, pattern)) throw ArgumentError("--base must look like sphere-<n> or S<n>, got '" + base + "'");
  return std::stoi(m[1]);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvkit: numerical checks of almost-Schur type inequalities"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--threads", g.threads, "worker threads for node evaluation")->check(CLI::Range(1u, 256u));
  app.add_option("--shapes", g.shapes, "shape manifest (JSON)");
  app.add_option("--metrics", g.metrics, "metric manifest (JSON)");
  app.add_option("--lambda-registry", g.registry, "extra eigenvalue registry (JSON)");

  auto* verify = app.add_subcommand("verify", "verify one inequality on a catalog case");
  std::string case_name, theorem, out = "-";
  int r = 1, k = 1, resolution = 0;
  std::optional<double> user_K;
  verify->add_option("--case", case_name, "catalog name")->required();
  verify->add_option("--theorem", theorem, "thm_main | thm_R | cor_B | gwx")
      ->required()
      ->check(CLI::IsMember({"thm_main", "thm_R", "cor_B", "gwx"}));
  verify->add_option("--r", r, "order of the mean curvature (thm_main)");
  verify->add_option("--k", k, "Lovelock order (gwx)");
  verify->add_option("--resolution", resolution, "coarse nodes per axis N; reports use N and 2N");
  verify->add_option("--K", user_K, "exploratory Ricci parameter; marks the report exploratory");
  verify->add_option("--out", out, "report path, - for stdout");

  auto* taxonomy = app.add_subcommand("taxonomy", "equality-case classification of a catalog case");
  taxonomy->add_option("--case", case_name, "catalog name")->required();
  taxonomy->add_option("--resolution", resolution, "coarse nodes per axis N");
  taxonomy->add_option("--out", out, "report path, - for stdout");

  auto* sweep = app.add_subcommand("sweep", "conformal sharpness sweep on a round sphere");
  std::string base, f_id;
  double t_min = 0.0, t_max = 0.0;
  int steps = 0;
  sweep->add_option("--base", base, "sphere-<n>")->required();
  sweep->add_option("--f", f_id, "basis function x<i> or x<i>x<j>")->required();
  sweep->add_option("--t-min", t_min)->required();
  sweep->add_option("--t-max", t_max)->required();
  sweep->add_option("--steps", steps)->required()->check(CLI::PositiveNumber);
  sweep->add_option("--resolution", resolution, "coarse nodes per axis N");
  sweep->add_option("--out", out, "CSV path, - for stdout");

  auto* catalog_cmd = app.add_subcommand("catalog", "inspect the manifold catalog");
  bool list = false;
  catalog_cmd->add_flag("--list", list, "print name, n, m and ground-truth class");

  app.add_subcommand("selftest", "run the invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    set_thread_count(g.threads);
    VerifyOptions options;
    options.resolution = resolution;
    options.user_K = user_K;

    if (*verify) {
      const Catalog catalog = load_catalog(g);
      const CatalogEntry& entry = catalog.at(case_name);
      Verifier verifier(load_registry(g));
      std::vector<InequalityReport> reports;
      nlohmann::ordered_json doc;
      if (theorem == "thm_main") {
        auto [main_rep, alt] = verifier.verify_thm_main(entry, r, options);
        reports = {main_rep, alt};
        doc = to_json(reports);
      } else if (theorem == "thm_R") {
        auto [ri, rii] = verifier.verify_thm_R(entry, options);
        reports = {ri, rii};
        doc = to_json(reports);
      } else if (theorem == "cor_B") {
        reports = {verifier.verify_cor_B(entry, options)};
        doc = to_json(reports.front());
      } else {
        reports = {verifier.verify_gwx(entry, k, options)};
        doc = to_json(reports.front());
      }
      write_output(out, doc.dump(2) + "\n");
      std::vector<Verdict> verdicts;
      for (const auto& rep : reports) {
        verdicts.push_back(rep.verdict);
        std::cerr << entry.name << " " << to_string(rep.theorem) << ": " << to_string(rep.verdict);
        if (rep.ratio) std::cerr << " (ratio " << *rep.ratio << ")";
        std::cerr << "\n";
      }
      return exit_code_for(verdicts);
    }

    if (*taxonomy) {
      const Catalog catalog = load_catalog(g);
      Verifier verifier(load_registry(g));
      const auto t = verifier.equality_taxonomy(catalog.at(case_name), options);
      write_output(out, to_json(t).dump(2) + "\n");
      std::vector<Verdict> verdicts;
      for (const auto& rep : t.reports) verdicts.push_back(rep.verdict);
      if (!t.consistent()) {
        std::cerr << "taxonomy assertions failed for " << case_name << "\n";
        return 1;
      }
      return exit_code_for(verdicts);
    }

    if (*sweep) {
      Verifier verifier(load_registry(g));
      const auto result = verifier.sharpness_sweep(parse_sphere_dimension(base), f_id, t_min, t_max, steps, options);
      std::ostringstream csv;
      write_sweep_csv(csv, result);
      write_output(out, csv.str());
      std::vector<Verdict> verdicts;
      for (const auto& row : result.rows)
        if (!row.excluded) verdicts.push_back(row.verdict);
      if (result.max_ratio) std::cerr << "max ratio_i " << *result.max_ratio << (result.monotone ? " (monotone)" : " (not monotone)") << "\n";
      return exit_code_for(verdicts);
    }

    if (*catalog_cmd) {
      const Catalog catalog = load_catalog(g);
      if (!list) {
        std::cerr << "catalog: pass --list\n";
        return 1;
      }
      std::cout << "name\tn\tm\tambient\tclass\n";
      for (const auto& e : catalog.entries())
        std::cout << e.name << '\t' << e.n << '\t' << e.m << '\t' << (e.immersed() ? to_string(e.ambient.kind) : "metric") << '\t'
                  << truth_class(e.truth) << '\n';
      return 0;
    }

    const auto items = run_selftest();
    bool all = true;
    for (const auto& item : items) {
      std::cout << (item.passed ? "PASS " : "FAIL ") << item.name << ": " << item.detail << "\n";
      all = all && item.passed;
    }
    return all ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
