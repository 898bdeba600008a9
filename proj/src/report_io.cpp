#include "curvkit/report_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace curvkit {

using json = nlohmann::ordered_json;

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json optional_flag(const std::optional<bool>& v) { return v ? json(*v) : json(nullptr); }

json checks_json(const std::vector<Check>& checks) {
  json a = json::array();
  for (const auto& c : checks) a.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"passed", c.passed}});
  return a;
}

}  // namespace

json to_json(const InequalityReport& r) {
  json j;
  j["case"] = r.case_name;
  j["theorem"] = to_string(r.theorem);
  json params = json::object();
  for (const auto& [k, v] : r.params) {
    if (v == std::floor(v))
      params[k] = static_cast<long long>(v);
    else
      params[k] = v;
  }
  j["params"] = params;
  j["lhs"] = r.lhs;
  j["rhs_raw"] = r.rhs_raw;
  j["constant"] = r.constant;
  j["correction"] = r.correction;
  j["rhs"] = r.rhs;
  j["ratio"] = optional_number(r.ratio);
  j["verdict"] = to_string(r.verdict);
  json res = json::array();
  for (const auto& s : r.resolutions) res.push_back({{"N", s.N}, {"lhs", s.lhs}, {"rhs", s.rhs}, {"rhs_raw", s.rhs_raw}, {"scale", s.scale}});
  j["resolutions"] = res;
  j["k_certificate"] = {{"K", r.certificate.K},
                        {"ricci_min", r.certificate.ricci_min},
                        {"convex", optional_flag(r.certificate.convex)},
                        {"user_supplied", r.certificate.user_supplied}};
  if (r.lambda)
    j["lambda"] = {{"value", r.lambda->value}, {"kind", to_string(r.lambda->kind)}, {"provenance", r.lambda->provenance}};
  else
    j["lambda"] = nullptr;
  j["converged"] = r.converged;
  j["exploratory"] = r.exploratory;
  j["checks"] = checks_json(r.checks);
  j["notes"] = r.notes;
  return j;
}

json to_json(const std::vector<InequalityReport>& reports) {
  json a = json::array();
  for (const auto& r : reports) a.push_back(to_json(r));
  return a;
}

json to_json(const TaxonomyReport& t) {
  json j;
  j["case"] = t.case_name;
  j["computed"] = {{"umbilic", optional_flag(t.computed.umbilic)},
                   {"einstein", optional_flag(t.computed.einstein)},
                   {"weyl_free", optional_flag(t.computed.weyl_free)},
                   {"constant_curvature", optional_flag(t.computed.constant_curvature)}};
  j["ground_truth"] = {{"label", t.truth.label},
                       {"umbilic", optional_flag(t.truth.umbilic)},
                       {"einstein", optional_flag(t.truth.einstein)},
                       {"weyl_free", optional_flag(t.truth.weyl_free)},
                       {"constant_curvature", optional_flag(t.truth.constant_curvature)}};
  j["assertions"] = checks_json(t.assertions);
  j["consistent"] = t.consistent();
  j["reports"] = to_json(t.reports);
  return j;
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
  out << "t,ratio_i,ratio_ii,ricci_min,weyl_l2,verdict\n";
  out << std::setprecision(17);
  for (const auto& row : sweep.rows) {
    out << row.t << ',';
    if (row.ratio_i) out << *row.ratio_i;
    out << ',';
    if (row.ratio_ii) out << *row.ratio_ii;
    out << ',' << row.ricci_min << ',' << row.weyl_l2 << ',' << (row.excluded ? std::string("excluded") : to_string(row.verdict))
        << '\n';
  }
}

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

int exit_code_for(const std::vector<Verdict>& verdicts) {
  int code = 0;
  for (auto v : verdicts) {
    if (v == Verdict::violated) return 3;
    if (v == Verdict::inconclusive) code = 2;
  }
  return code;
}

}  // namespace curvkit
