#include <gtest/gtest.h>

#include <random>

#include "curvkit/curvature_functionals.hpp"
#include "oracles.hpp"

using namespace curvkit;

namespace {

VecValuedSym2<double> random_form(int n, int q, std::mt19937_64& rng) {
  std::vector<Matrixd> c;
  for (int a = 0; a < q; ++a) c.emplace_back(oracle::random_symmetric(n, rng));
  return VecValuedSym2<double>(std::move(c));
}

AlgCurvTensor4<double> gauss_flat(const VecValuedSym2<double>& a) {
  const int n = a.dim();
  AlgCurvTensor4<double> rm(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) rm(i, j, k, l) = a.pair(i, k, j, l) - a.pair(i, l, j, k);
  return rm;
}

}  // namespace

TEST(NewtonTensor, EpsilonMatchesBruteForce) {
  std::mt19937_64 rng(11);
  for (int n = 2; n <= 4; ++n)
    for (int r = 1; r < n; ++r) {
      const Eigen::MatrixXd a = oracle::random_symmetric(n, rng);
      const auto t = newton_transform(VecValuedSym2<double>::scalar(Matrixd(a)), r);
      const Eigen::MatrixXd expect = oracle::newton_bruteforce(a, r);
      EXPECT_LT((Eigen::MatrixXd(t.components[0]) - expect).cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, expect.norm()));
      EXPECT_NEAR(t.mean(0), oracle::mean_curvature_bruteforce(a, r), 1e-12 * std::max(1.0, std::abs(t.mean(0))));
    }
}

TEST(NewtonTensor, HypersurfaceFastPathAgreesWithEpsilon) {
  std::mt19937_64 rng(12);
  double worst = 0;
  for (int n = 2; n <= 6; ++n)
    for (int r = 1; r < n; ++r)
      for (int trial = 0; trial < 100; ++trial) {
        const Matrixd a = oracle::random_symmetric(n, rng);
        const auto slow = newton_transform(VecValuedSym2<double>::scalar(a), r);
        const auto fast = newton_transform_hypersurface(a, r);
        const double scale = std::max(slow.components[0].norm(), 1e-300);
        worst = std::max(worst, (slow.components[0] - fast.components[0]).norm() / scale);
        worst = std::max(worst, std::abs(slow.mean(0) - fast.mean(0)) / std::max(std::abs(slow.mean(0)), 1e-3 * scale));
      }
  EXPECT_LT(worst, 1e-11);
}

TEST(NewtonTensor, HypersurfaceEigenvaluesAreSigmaWithOneOmitted) {
  const std::vector<double> k{0.5, -1.25, 2.0, 3.0};
  Matrixd a = Matrixd::Zero(4, 4);
  for (int i = 0; i < 4; ++i) a(i, i) = k[i];
  for (int r = 1; r < 4; ++r) {
    const auto t = newton_transform_hypersurface(a, r);
    for (int i = 0; i < 4; ++i) {
      std::vector<double> rest;
      for (int j = 0; j < 4; ++j)
        if (j != i) rest.push_back(k[j]);
      EXPECT_NEAR(t.components[0](i, i), oracle::sigma_subsets(rest, r), 1e-13);
    }
    EXPECT_NEAR(t.mean(0), oracle::sigma_subsets(k, r), 1e-13);
  }
}

TEST(NewtonTensor, TraceIdentityAnyCodimension) {
  std::mt19937_64 rng(13);
  for (int n = 2; n <= 5; ++n)
    for (int q = 1; q <= 3; ++q)
      for (int r = 1; r < n; ++r)
        for (int trial = 0; trial < 20; ++trial) {
          const auto a = random_form(n, q, rng);
          const auto t = newton_transform(a, r);
          const AmbVectord tr = t.traces();
          const double scale = std::max(1.0, t.mean.norm());
          ASSERT_EQ(tr.size(), t.mean.size());
          ASSERT_LT((tr - (n - r) * t.mean).norm(), 1e-10 * scale);
          const auto t0 = traceless_newton(t);
          ASSERT_LT(t0.traces().norm(), 1e-10 * scale);
        }
}

TEST(NewtonTensor, LowOrderClosedForms) {
  std::mt19937_64 rng(14);
  const auto a = random_form(4, 2, rng);
  AmbVectord h(2);
  for (int al = 0; al < 2; ++al) h(al) = a.component(al).trace();
  const auto t1 = newton_transform(a, 1);
  for (int al = 0; al < 2; ++al) {
    const Matrixd expect = h(al) * Matrixd::Identity(4, 4) - a.component(al);
    EXPECT_LT((t1.components[al] - expect).cwiseAbs().maxCoeff(), 1e-13);
  }
  double a2 = 0;
  for (int al = 0; al < 2; ++al) a2 += a.component(al).squaredNorm();
  const auto t2 = newton_transform(a, 2);
  EXPECT_NEAR(t2.mean(0), 0.5 * (h.squaredNorm() - a2), 1e-12);
}

TEST(NewtonTensor, NormalFrameCovariance) {
  std::mt19937_64 rng(15);
  const auto a = random_form(3, 2, rng);
  const double th = 0.7;
  Eigen::MatrixXd rot(2, 2);
  rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  const auto b = a.rotated(Matrixd::Identity(3, 3), rot);
  const auto ta = newton_transform(a, 1), tb = newton_transform(b, 1);
  EXPECT_NEAR(ta.norm2(), tb.norm2(), 1e-12);
  EXPECT_NEAR(ta.mean.norm(), tb.mean.norm(), 1e-12);
  const auto ea = newton_transform(a, 2), eb = newton_transform(b, 2);
  EXPECT_LT((ea.components[0] - eb.components[0]).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(NewtonTensor, OrderOutOfRange) {
  const auto a = VecValuedSym2<double>::scalar(Matrixd::Identity(3, 3));
  EXPECT_THROW(newton_transform(a, 0), ArgumentError);
  EXPECT_THROW(newton_transform(a, 3), ArgumentError);
  EXPECT_THROW(mean_curvature(a, 4), ArgumentError);
  EXPECT_THROW(VecValuedSym2<double>(std::vector<Matrixd>{}), ArgumentError);
}

TEST(ElementarySymmetric, MatchesSubsets) {
  std::mt19937_64 rng(16);
  std::normal_distribution<double> d;
  for (int n = 1; n <= 7; ++n) {
    std::vector<double> k(n);
    for (auto& v : k) v = d(rng);
    for (int r = 0; r <= n; ++r) EXPECT_NEAR(elementary_symmetric<double>(k, r), oracle::sigma_subsets(k, r), 1e-12);
  }
}

TEST(Lovelock, UnitSphereClosedForms) {
  for (int n = 3; n <= 6; ++n)
    for (int k = 1; 2 * k < n; ++k) {
      const auto lv = lovelock(unit_curvature_tensor(SymTensor2<double>::identity(n)), k);
      const double rk = std::tgamma(n + 1.0) / std::tgamma(n - 2.0 * k + 1.0);
      EXPECT_NEAR(lv.rk, rk, 1e-10 * rk);
      const double e = (n - 2.0 * k) / (2.0 * n) * rk;
      EXPECT_LT((lv.ek - e * Matrixd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-10 * rk);
    }
}

TEST(Lovelock, FirstOrderIsScalarAndEinstein) {
  std::mt19937_64 rng(17);
  for (int n = 3; n <= 5; ++n) {
    oracle::Tensor4 o = oracle::random_curvature(n, rng);
    AlgCurvTensor4<double> rm(n);
    std::copy(o.v.begin(), o.v.end(), rm.data().begin());
    const auto lv = lovelock(rm, 1);
    const auto ric = ricci_contraction(rm, Matrixd(Matrixd::Identity(n, n))).matrix();
    const double R = ric.trace();
    EXPECT_NEAR(lv.rk, R, 1e-10 * std::abs(R) + 1e-10);
    EXPECT_LT((lv.ek - (0.5 * R * Matrixd::Identity(n, n) - ric)).cwiseAbs().maxCoeff(), 1e-10 * rm.max_abs());
  }
}

TEST(Lovelock, TraceIdentityRandom) {
  std::mt19937_64 rng(18);
  for (int n = 3; n <= 6; ++n)
    for (int k = 1; 2 * k < n; ++k)
      for (int trial = 0; trial < 20; ++trial) {
        oracle::Tensor4 o = oracle::random_curvature(n, rng);
        AlgCurvTensor4<double> rm(n);
        std::copy(o.v.begin(), o.v.end(), rm.data().begin());
        const auto lv = lovelock(rm, k);
        const double scale = std::pow(rm.max_abs(), k) * std::tgamma(2 * k + 1.0);
        ASSERT_NEAR(lv.ek.trace(), (n - 2.0 * k) / 2.0 * lv.rk, 1e-10 * scale);
      }
}

TEST(Lovelock, FlatBridgeToNewtonTensors) {
  // In flat ambient space E^(k) = ((2k)!/2) T^{2k}, for the Gauss curvature
  // of any second fundamental form.
  std::mt19937_64 rng(19);
  for (int n = 3; n <= 5; ++n)
    for (int q = 1; q <= 2; ++q)
      for (int k = 1; 2 * k < n; ++k) {
        const auto a = random_form(n, q, rng);
        const auto lv = lovelock(gauss_flat(a), k);
        const auto t = newton_transform(a, 2 * k);
        const Matrixd expect = 0.5 * std::tgamma(2 * k + 1.0) * t.components[0];
        EXPECT_LT((lv.ek - expect).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, expect.norm()));
        EXPECT_NEAR(lv.rk, std::tgamma(2 * k + 1.0) * t.mean(0), 1e-10 * std::max(1.0, std::abs(lv.rk)));
      }
}

TEST(Lovelock, OrderOutOfRange) {
  EXPECT_THROW(lovelock(AlgCurvTensor4<double>(4), 2), ArgumentError);
  EXPECT_THROW(lovelock(AlgCurvTensor4<double>(4), 0), ArgumentError);
}
