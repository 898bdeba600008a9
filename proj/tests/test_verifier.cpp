#include <gtest/gtest.h>

#include <cstdlib>
#include <set>
#include <sstream>
#include <string>

#include "curvkit/catalog.hpp"
#include "curvkit/report_io.hpp"
#include "curvkit/verifier.hpp"

using namespace curvkit;

namespace {

const Catalog& catalog() {
  static const Catalog c = Catalog::builtin();
  return c;
}

Verifier& verifier() {
  static Verifier v;
  return v;
}

VerifyOptions coarse(int N) {
  VerifyOptions o;
  o.resolution = N;
  return o;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CURVKIT_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Constants, LiteralValues) {
  EXPECT_DOUBLE_EQ(constant_for(Theorem::thm_R_i, 3), 24.0);
  EXPECT_DOUBLE_EQ(constant_for(Theorem::thm_R_i, 4), 12.0);
  EXPECT_DOUBLE_EQ(constant_for(Theorem::thm_R_ii, 3), 6.0);
  EXPECT_DOUBLE_EQ(constant_for(Theorem::thm_R_ii, 4), 6.0);
  EXPECT_DOUBLE_EQ(constant_for(Theorem::cor_B, 4), 2.0);
  EXPECT_DOUBLE_EQ(constant_for(Theorem::gwx, 4, 1), 12.0);
  EXPECT_DOUBLE_EQ(constant_for(Theorem::gwx, 5, 2), 80.0);
  EXPECT_DOUBLE_EQ(constant_for(Theorem::thm_main, 3, 1), 1.5);
  EXPECT_DOUBLE_EQ(constant_for(Theorem::thm_main, 3, 2), 6.0);
  EXPECT_DOUBLE_EQ(constant_for(Theorem::thm_main_rephrased, 3), 3.0);
  EXPECT_THROW(constant_for(Theorem::thm_main, 3, 3), ArgumentError);
  EXPECT_THROW(constant_for(Theorem::gwx, 4, 2), ArgumentError);
  EXPECT_EQ(default_resolution(2), 48);
  EXPECT_EQ(default_resolution(6), 8);
}

TEST(Verdicts, CombineOrder) {
  EXPECT_EQ(combine(Verdict::equality, Verdict::holds), Verdict::holds);
  EXPECT_EQ(combine(Verdict::holds, Verdict::inconclusive), Verdict::inconclusive);
  EXPECT_EQ(combine(Verdict::violated, Verdict::inconclusive), Verdict::violated);
  EXPECT_EQ(exit_code_for({Verdict::holds, Verdict::equality}), 0);
  EXPECT_EQ(exit_code_for({Verdict::holds, Verdict::inconclusive}), 2);
  EXPECT_EQ(exit_code_for({Verdict::inconclusive, Verdict::violated}), 3);
}

TEST(Verifier, RoundSphereIsEqualityEverywhere) {
  const auto& s3 = catalog().at("S3");
  for (int r = 1; r <= 2; ++r) {
    const auto [main, alt] = verifier().verify_thm_main(s3, r);
    EXPECT_EQ(main.verdict, Verdict::equality) << r;
    EXPECT_EQ(alt.verdict, Verdict::equality) << r;
    EXPECT_FALSE(main.ratio.has_value());
    EXPECT_LT(std::abs(main.lhs), 1e-10);
    EXPECT_LT(std::abs(main.rhs_raw), 1e-10);
    EXPECT_TRUE(main.checks_pass());
  }
  const auto [i, ii] = verifier().verify_thm_R(s3);
  EXPECT_EQ(i.verdict, Verdict::equality);
  EXPECT_EQ(ii.verdict, Verdict::equality);
  EXPECT_EQ(verifier().verify_cor_B(s3).verdict, Verdict::equality);
  EXPECT_EQ(verifier().verify_gwx(catalog().at("S3-metric"), 1).verdict, Verdict::equality);
}

TEST(Verifier, EllipsoidHoldsStrictly) {
  const auto [main, alt] = verifier().verify_thm_main(catalog().at("ellipsoid-1.3"), 1);
  EXPECT_EQ(main.verdict, Verdict::holds);
  ASSERT_TRUE(main.ratio.has_value());
  EXPECT_GT(*main.ratio, 0.5);
  EXPECT_LT(*main.ratio, 0.7);
  ASSERT_EQ(main.resolutions.size(), 2u);
  EXPECT_EQ(main.resolutions[1].N, 2 * main.resolutions[0].N);
  EXPECT_DOUBLE_EQ(main.certificate.K, 0.0);
  EXPECT_EQ(main.certificate.convex, true);
  EXPECT_TRUE(main.converged);
  // rephrased ratio is an affine function of the original when K = 0
  EXPECT_NEAR(*alt.ratio, 0.5 + 0.5 * *main.ratio, 1e-9);
}

TEST(Verifier, EinsteinProductOfSpheres) {
  const auto& e = catalog().at("S2xS2");
  const auto [i, ii] = verifier().verify_thm_R(e, coarse(8));
  EXPECT_EQ(i.verdict, Verdict::equality);
  EXPECT_EQ(ii.verdict, Verdict::holds);
  const auto b = verifier().verify_cor_B(e, coarse(8));
  EXPECT_EQ(b.verdict, Verdict::holds);
  EXPECT_NEAR(*b.ratio, 0.5, 1e-10);
  ASSERT_TRUE(b.lambda.has_value());
  EXPECT_DOUBLE_EQ(b.lambda->value, 2.0);
}

TEST(Verifier, ConstantScalarCurvatureProduct) {
  const auto [i, ii] = verifier().verify_thm_R(catalog().at("S2xS1"));
  EXPECT_EQ(i.verdict, Verdict::holds);
  EXPECT_EQ(ii.verdict, Verdict::holds);
  EXPECT_LT(*i.ratio, 1e-20);
}

TEST(Verifier, GwxFirstOrderMatchesScalarCurvatureForm) {
  const auto& c = catalog().at("S3-conformal");
  const auto g = verifier().verify_gwx(c, 1);
  const auto [i, ii] = verifier().verify_thm_R(c);
  EXPECT_NEAR(g.lhs, i.lhs, 1e-10 * std::abs(i.lhs));
  EXPECT_NEAR(g.rhs_raw, i.rhs_raw, 1e-10 * std::abs(i.rhs_raw));
  EXPECT_DOUBLE_EQ(g.constant, i.constant);
  EXPECT_EQ(g.verdict, Verdict::holds);
  EXPECT_TRUE(g.checks_pass());
}

TEST(Verifier, HigherOrderAgreesWithLovelockPath) {
  const auto [main, alt] = verifier().verify_thm_main(catalog().at("ellipsoid3-1.3"), 2);
  EXPECT_EQ(main.verdict, Verdict::holds);
  bool found = false;
  for (const auto& c : main.checks)
    if (c.name.find("gwx") != std::string::npos) {
      found = true;
      EXPECT_TRUE(c.passed) << c.name << " " << c.value;
    }
  EXPECT_TRUE(found);
}

TEST(Verifier, CodimensionTwoCounterexample) {
  // S^1(a) x S^2(b) in R^5 has Ric >= 0 and lambda-independent sides when
  // K = 0; the r = 1 inequality fails with ratio 5/2 for a = 1, b = 2.
  const auto [main, alt] = verifier().verify_thm_main(catalog().at("S1xS2-R5"), 1);
  EXPECT_EQ(main.verdict, Verdict::violated);
  ASSERT_TRUE(main.ratio.has_value());
  EXPECT_NEAR(*main.ratio, 2.5, 1e-8);
  EXPECT_TRUE(main.checks_pass());
  EXPECT_DOUBLE_EQ(main.certificate.K, 0.0);
}

TEST(Verifier, ExploratoryKNeedsAnalyticLambda) {
  VerifyOptions o;
  o.user_K = 0.25;
  const auto [main, alt] = verifier().verify_thm_main(catalog().at("ellipsoid-1.3"), 1, o);
  EXPECT_TRUE(main.exploratory);
  EXPECT_TRUE(main.certificate.user_supplied);
  EXPECT_EQ(main.verdict, Verdict::inconclusive);
  const auto b = verifier().verify_cor_B(catalog().at("S3-metric"), o);
  EXPECT_TRUE(b.exploratory);
  EXPECT_DOUBLE_EQ(b.correction, 1.0 + 2 * 0.25 / 3.0);
  o.user_K = -1.0;
  EXPECT_THROW(verifier().verify_cor_B(catalog().at("S3-metric"), o), ArgumentError);
}

TEST(Verifier, InadmissibleRequestsAreRefused) {
  EXPECT_THROW(verifier().verify_thm_main(catalog().at("S3-metric"), 1), InadmissibleError);
  EXPECT_THROW(verifier().verify_thm_main(catalog().at("S3"), 3), InadmissibleError);
  EXPECT_THROW(verifier().verify_thm_R(catalog().at("S2")), InadmissibleError);
  EXPECT_THROW(verifier().verify_cor_B(catalog().at("T2-flat")), InadmissibleError);
  EXPECT_THROW(verifier().verify_gwx(catalog().at("S4"), 2), InadmissibleError);
}

TEST(Verifier, TaxonomyMatchesGroundTruth) {
  for (const char* name : {"S3", "S2xS1", "latitude-S3-in-S4", "ellipsoid-1.3", "S3-conformal"}) {
    const auto t = verifier().equality_taxonomy(catalog().at(name));
    EXPECT_TRUE(t.consistent()) << name;
    for (const auto& a : t.assertions) EXPECT_TRUE(a.passed) << name << ": " << a.name;
  }
  const auto s = verifier().equality_taxonomy(catalog().at("S3"));
  EXPECT_EQ(s.computed.umbilic, true);
  EXPECT_EQ(s.computed.einstein, true);
  const auto p = verifier().equality_taxonomy(catalog().at("S2xS1"));
  EXPECT_EQ(p.computed.einstein, false);
  EXPECT_EQ(p.computed.constant_curvature, false);
}

TEST(Sweep, ConformalFamilyOnS3) {
  const auto s = verifier().sharpness_sweep(3, "x1", 0.01, 0.1, 4, coarse(12));
  ASSERT_EQ(s.rows.size(), 4u);
  EXPECT_DOUBLE_EQ(s.rows.front().t, 0.01);
  EXPECT_DOUBLE_EQ(s.rows.back().t, 0.1);
  for (const auto& row : s.rows) {
    EXPECT_FALSE(row.excluded);
    EXPECT_EQ(row.verdict, Verdict::holds) << row.t;
    EXPECT_LT(row.weyl_l2, 1e-8);
    EXPECT_LT(row.identity_residual, 1e-6);
    EXPECT_GT(row.ricci_min, 0.0);
  }
  EXPECT_THROW(verifier().sharpness_sweep(2, "x1", 0.0, 0.1, 2), ArgumentError);
  EXPECT_THROW(verifier().sharpness_sweep(3, "x1", 0.1, 0.0, 2), ArgumentError);
}

TEST(ReportIo, JsonSchemaKeys) {
  const auto b = verifier().verify_cor_B(catalog().at("S2xS1"));
  const auto j = to_json(b);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  const std::vector<std::string> required = {"case",    "theorem", "params",      "lhs",           "rhs_raw",
                                             "constant", "correction", "ratio",   "verdict",       "resolutions",
                                             "k_certificate", "lambda"};
  for (const auto& k : required) EXPECT_NE(std::find(keys.begin(), keys.end(), k), keys.end()) << k;
  EXPECT_EQ(j["theorem"], "cor_B");
  EXPECT_EQ(j["verdict"], "holds");
  EXPECT_EQ(j["lambda"]["kind"], "analytic");
  EXPECT_TRUE(j["resolutions"][0].contains("N"));
  EXPECT_TRUE(j["resolutions"][0].contains("lhs"));
  EXPECT_TRUE(j["resolutions"][0].contains("rhs"));
  EXPECT_TRUE(j["k_certificate"].contains("K"));
  // no registry entry and K = 0: lambda is not needed and stays null
  EXPECT_TRUE(to_json(verifier().verify_cor_B(catalog().at("S3-conformal")))["lambda"].is_null());

  const auto [main, alt] = verifier().verify_thm_main(catalog().at("S3"), 1);
  const auto ja = to_json(std::vector<InequalityReport>{main, alt});
  ASSERT_TRUE(ja.is_array());
  EXPECT_TRUE(ja[0]["ratio"].is_null());
  EXPECT_EQ(ja[0]["params"]["r"], 1);
}

TEST(ReportIo, SweepCsv) {
  SweepResult s;
  SweepRow a;
  a.t = 0.5;
  a.ratio_i = 0.25;
  a.ratio_ii = 0.25;
  a.ricci_min = 1.0;
  SweepRow b;
  b.t = 0.9;
  b.excluded = true;
  s.rows = {a, b};
  std::ostringstream os;
  write_sweep_csv(os, s);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,ratio_i,ratio_ii,ricci_min,weyl_l2,verdict");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 4), "0.5,");
  EXPECT_NE(line.find(",holds"), std::string::npos);
  std::getline(in, line);
  EXPECT_NE(line.find("excluded"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("selftest"), 0);
  EXPECT_EQ(run_cli("catalog --list"), 0);
  EXPECT_EQ(run_cli("verify --case S3 --theorem cor_B --out -"), 0);
  EXPECT_EQ(run_cli("verify --case S1xS2-R5 --theorem thm_main --r 1 --out -"), 3);
  EXPECT_EQ(run_cli("verify --case trig-T3 --theorem cor_B --out -"), 2);
  EXPECT_EQ(run_cli("verify --case no-such-case --theorem cor_B"), 1);
  EXPECT_EQ(run_cli("verify --case S2 --theorem thm_R"), 1);
  EXPECT_EQ(run_cli("verify --case S3 --theorem bogus"), 1);
  EXPECT_EQ(run_cli("frobnicate"), 1);
}
