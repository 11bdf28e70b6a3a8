#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "spspec/bounds.hpp"

using namespace spspec;

TEST(Mu, Examples)
{
  EXPECT_EQ(mu({MultiIndex{5}, MultiIndex{2}, MultiIndex{1}}).sorted, (std::vector<Coord>{5, 2, 1}));
  EXPECT_EQ(mu({MultiIndex{0}, MultiIndex{0}}).sorted, (std::vector<Coord>{1, 1}));
  EXPECT_EQ(mu({MultiIndex{3, -4}, MultiIndex{1, 1}}).sorted, (std::vector<Coord>{4, 1}));
  auto m = mu({MultiIndex{1}, MultiIndex{-7}, MultiIndex{3}});
  EXPECT_EQ(m(1), 7);
  EXPECT_EQ(m(3), 1);
  EXPECT_THROW(mu(std::span<const MultiIndex>()), ValidationError);
}

TEST(ATheta, Examples)
{
  EXPECT_NEAR(a_theta(MultiIndex{5}, {MultiIndex{2}, MultiIndex{1}}, 0.5), std::sqrt(2.0) / (std::sqrt(2.0) + 3.0),
              1e-15);
  EXPECT_NEAR(a_theta(MultiIndex{5}, {MultiIndex{2}, MultiIndex{1}}, 0.5), 0.320377, 1e-6);
  EXPECT_DOUBLE_EQ(a_theta(MultiIndex{5}, {MultiIndex{2}, MultiIndex{1}}, 0.0), 0.25);
  for (double th : {0.0, 0.3, 1.0})
    EXPECT_EQ(a_theta(MultiIndex{4}, {MultiIndex{-4}, MultiIndex{4}}, th), 1.0);
  EXPECT_THROW(a_theta(MultiIndex{1}, {MultiIndex{1}}, 0.5), ValidationError);
  EXPECT_THROW(a_theta(MultiIndex{1}, {MultiIndex{1}, MultiIndex{1}}, 1.5), ValidationError);
}

TEST(ATheta, MonotoneInTheLargestEntry)
{
  for (double th : {0.0, 0.5, 1.0})
    for (Coord m3 = 1; m3 <= 6; ++m3)
      for (Coord m2 = m3; m2 <= 12; ++m2) {
        double prev = 2.0;
        for (Coord m1 = m2; m1 <= 40; ++m1) {
          MuProfile m{{m1, m2, m3}};
          double a = a_theta(m, th);
          EXPECT_GT(a, 0.0);
          EXPECT_LE(a, 1.0);
          EXPECT_LE(a, prev);
          EXPECT_EQ(a == 1.0, m1 == m2);
          prev = a;
        }
      }
}

TEST(Inequality, HandExample)
{
  double a = a_theta(MultiIndex{10}, {MultiIndex{1}, MultiIndex{1}}, 0.0);
  EXPECT_DOUBLE_EQ(a, 0.1);
  EXPECT_DOUBLE_EQ(10.0 * a, 1.0);
  EXPECT_LE(10.0 * a, 2.0 * 1.0);
}

TEST(Inequality, ExhaustiveSweep)
{
  InequalityDomain dom;
  dom.max_coord = 30;
  for (double th : {0.0, 0.5, 1.0}) {
    auto rep = check_appendix_inequality(dom, th);
    EXPECT_EQ(rep.violations, 0u) << th;
    EXPECT_EQ(rep.checked, 61u * 61u * 61u);
    EXPECT_LE(rep.max_ratio, 1.0);
    EXPECT_GT(rep.max_ratio, 0.0);
    EXPECT_TRUE(rep.rows.empty());
  }
}

TEST(Inequality, RatioBelowHalfWhenEllIsSmall)
{
  // ||l|| <= mu_1(j) and A <= 1 give a ratio of at most 1/2
  InequalityDomain dom;
  dom.lattice = Lattice::Naturals;
  dom.max_coord = 12;
  dom.p = 3;
  auto rep = check_appendix_inequality(dom, 0.5, true);
  EXPECT_EQ(rep.violations, 0u);
  ASSERT_EQ(rep.rows.size(), rep.checked);
  for (const auto& r : rep.rows) {
    Coord m1 = 1;
    for (const auto& j : r.js)
      m1 = std::max(m1, max_norm(j));
    if (max_norm(r.ell) <= m1) {
      EXPECT_LE(r.lhs / r.rhs, 0.5 + 1e-15);
    }
  }
}

TEST(Inequality, TwoDimensions)
{
  InequalityDomain dom;
  dom.dim = 2;
  dom.max_coord = 4;
  auto rep = check_appendix_inequality(dom, 0.25);
  EXPECT_EQ(rep.violations, 0u);
  EXPECT_EQ(rep.checked, static_cast<std::uint64_t>(std::pow(9.0, 6)));
}

TEST(Inequality, CsvRows)
{
  InequalityDomain dom;
  dom.lattice = Lattice::Naturals;
  dom.max_coord = 1;
  auto rep = check_appendix_inequality(dom, 0.0, true);
  std::ostringstream os;
  write_inequality_csv(os, rep);
  std::string s = os.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "ell,js,lhs,rhs");
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 9);
  EXPECT_NE(s.find("\n0,0;0,1,2\n"), std::string::npos);
}

TEST(Inequality, Validation)
{
  InequalityDomain dom;
  dom.p = 1;
  EXPECT_THROW(check_appendix_inequality(dom, 0.5), ValidationError);
  dom.p = 2;
  EXPECT_THROW(check_appendix_inequality(dom, -0.1), ValidationError);
}

TEST(Rates, Examples)
{
  auto r = predicted_rate(0.0, 2.0, 1.0, 0.0, 0.0, 1.01, 0);
  EXPECT_NEAR(r.value, 0.99, 1e-15);
  EXPECT_FALSE(r.below_validity);

  for (double sp : {1.0, 2.0, 3.5})
    for (double nu : {0.0, 0.2})
      for (double kappa : {0.5, 1.0, 2.0}) {
        auto half = predicted_rate(0.0, sp, 1.0, 0.5, nu, kappa, 1);
        EXPECT_DOUBLE_EQ(half.value, std::min((sp - kappa / 2) / 2, sp - kappa / 2 - nu));
      }
}

TEST(Rates, IterativeBaseCaseMatches)
{
  for (double s : {0.0, 0.5})
    for (double sp : {1.0, 2.5, 4.0})
      for (double th : {0.0, 0.5, 1.0})
        for (int alpha : {0, 1}) {
          auto a = predicted_rate(s, sp, 1.0, th, 0.1, 1.2, alpha);
          auto b = predicted_rate_iterative(2, s, sp, th, 0.1, 1.2, alpha);
          EXPECT_NEAR(a.value, b.value, 1e-15);
          EXPECT_EQ(a.below_validity, b.below_validity);
        }
  EXPECT_THROW(predicted_rate_iterative(1, 0.0, 2.0, 0.5, 0.0, 1.0, 0), ValidationError);
}

TEST(Rates, IterativeTermsDependOnArity)
{
  auto r = predicted_rate_iterative(4, 0.0, 3.0, 0.5, 0.0, 1.0, 1);
  EXPECT_DOUBLE_EQ(r.value, std::min((3.0 - 1.5) / 2.0, 3.0 - 0.5 - 1.0));
  EXPECT_FALSE(r.below_validity);
}

TEST(Rates, BelowValidityKeepsTheSignedValue)
{
  auto r = predicted_rate(0.0, 0.2, 1.0, 0.0, 0.0, 1.0, 0);
  EXPECT_TRUE(r.below_validity);
  EXPECT_DOUBLE_EQ(r.value, -0.8);
  auto q = predicted_rate_iterative(3, 1.0, 1.5, 0.5, 0.0, 1.0, 0);
  EXPECT_TRUE(q.below_validity);
  EXPECT_DOUBLE_EQ(q.value, -0.5);
}
