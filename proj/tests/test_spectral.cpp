#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "spspec/spectral.hpp"

using namespace spspec;

namespace {

SpectralVector random_vector(std::mt19937& rng, BasisTag basis, Coord R, int count)
{
  std::uniform_int_distribution<Coord> coord(basis.kind == BasisKind::Hermite ? 0 : -R, R);
  std::normal_distribution<double> val;
  SpectralVector u(basis);
  for (int i = 0; i < count; ++i) {
    std::vector<Coord> j(basis.dim);
    for (auto& c : j)
      c = coord(rng);
    u.set(MultiIndex(j), {val(rng), val(rng)});
  }
  return u;
}

}  // namespace

TEST(Vector, SetPrunesTinyValues)
{
  SpectralVector u(BasisTag::fourier());
  u.set(MultiIndex{1}, 1e-301);
  EXPECT_TRUE(u.empty());
  u.set(MultiIndex{1}, 2.0);
  u.set(MultiIndex{1}, 0.0);
  EXPECT_TRUE(u.empty());
  u.set(MultiIndex{3}, 1e-299);
  EXPECT_EQ(u.size(), 1u);
}

TEST(Vector, RejectsIndicesOutsideTheLattice)
{
  SpectralVector h(BasisTag::hermite());
  EXPECT_THROW(h.set(MultiIndex{-1}, 1.0), ValidationError);
  SpectralVector f(BasisTag::fourier(2));
  EXPECT_THROW(f.set(MultiIndex{1}, 1.0), ValidationError);
}

TEST(Norms, L1Examples)
{
  SpectralVector u(BasisTag::fourier());
  u.set(MultiIndex{0}, 1.0);
  EXPECT_DOUBLE_EQ(l1s_norm(u, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(l1s_norm(u, 3.7), 1.0);
  SpectralVector v(BasisTag::fourier());
  v.set(MultiIndex{2}, 1.0);
  v.set(MultiIndex{-2}, 1.0);
  EXPECT_DOUBLE_EQ(l1s_norm(v, 1.0), 4.0);
}

TEST(Norms, L1PowerLawPartialSums)
{
  const double zeta3 = 1.2020569031595942;
  double prev = 0.0;
  for (Coord K : {1, 10, 100, 1000}) {
    auto u = power_law_test_function(3.0, K, BasisTag::fourier());
    double brute = 1.0;
    for (Coord k = 1; k <= K; ++k)
      brute += 2.0 * std::pow(1.0 + static_cast<double>(k), -3.0);
    double n = l1s_norm(u, 0.0);
    EXPECT_NEAR(n, brute, 1e-13);
    EXPECT_GT(n, prev);
    EXPECT_LT(n, 2.0 * (zeta3 - 1.0) + 1.0);
    prev = n;
  }
  EXPECT_NEAR(prev, 2.0 * (zeta3 - 1.0) + 1.0, 1e-6);
}

TEST(Norms, L2Examples)
{
  SpectralVector u(BasisTag::fourier());
  u.set(MultiIndex{0}, 3.0);
  EXPECT_DOUBLE_EQ(l2s_norm(u, 0.0), 3.0);
  SpectralVector v(BasisTag::fourier());
  v.set(MultiIndex{1}, 3.0);
  v.set(MultiIndex{-1}, 4.0);
  EXPECT_DOUBLE_EQ(l2s_norm(v, 0.0), 5.0);
}

TEST(Norms, RandomProperties)
{
  std::mt19937 rng(20240517);
  std::uniform_real_distribution<double> sdist(0.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t d = 1 + trial % 2;
    auto u = random_vector(rng, BasisTag::fourier(d), 12, 30);
    double s = sdist(rng);
    // l2 <= l1 at the same weight
    EXPECT_LE(l2s_norm(u, s), l1s_norm(u, s) * (1 + 1e-14));
    // homogeneity
    Scalar c(-1.5, 2.0);
    EXPECT_NEAR(l1s_norm(u.scaled(c), s), std::abs(c) * l1s_norm(u, s), 1e-12 * l1s_norm(u, s) * std::abs(c));
    // monotone in s
    EXPECT_LE(l1s_norm(u, s), l1s_norm(u, s + 0.5) * (1 + 1e-14));
    // product-norm weights against max-norm weights of order d s
    double dd = static_cast<double>(d);
    EXPECT_LE(l1s_norm(u, s, SizeKind::ProdNorm),
              std::pow(2.0, dd * s) * l1s_norm(u, dd * s) * (1 + 1e-13));
  }
}

TEST(PowerLaw, HermiteExamples)
{
  auto a = power_law_test_function(3.0, 0, BasisTag::hermite());
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a.at(MultiIndex{0}), Scalar(1.0));
  auto b = power_law_test_function(3.0, 2, BasisTag::hermite());
  ASSERT_EQ(b.size(), 3u);
  EXPECT_DOUBLE_EQ(b.at(MultiIndex{1}).real(), 0.125);
  EXPECT_NEAR(b.at(MultiIndex{2}).real(), 0.037037037037037035, 1e-17);
}

TEST(PowerLaw, FourierExampleAndIsotropy)
{
  auto u = power_law_test_function(2.0, 1, BasisTag::fourier());
  ASSERT_EQ(u.size(), 3u);
  EXPECT_DOUBLE_EQ(u.at(MultiIndex{-1}).real(), 0.25);
  EXPECT_DOUBLE_EQ(u.at(MultiIndex{0}).real(), 1.0);
  EXPECT_DOUBLE_EQ(u.at(MultiIndex{1}).real(), 0.25);
  auto v = power_law_test_function(2.0, 2, BasisTag::fourier(2));
  EXPECT_EQ(v.size(), 25u);
  EXPECT_DOUBLE_EQ(v.at(MultiIndex{2, -1}).real(), 1.0 / 9.0);
}

TEST(PowerLaw, RejectsBadParameters)
{
  EXPECT_THROW(power_law_test_function(1.0, 4, BasisTag::fourier()), ValidationError);
  EXPECT_THROW(power_law_test_function(3.0, -1, BasisTag::fourier()), ValidationError);
}

TEST(Difference, MissingEntriesAreZero)
{
  SpectralVector a(BasisTag::fourier()), b(BasisTag::fourier());
  a.set(MultiIndex{0}, 1.0);
  b.set(MultiIndex{1}, 2.0);
  auto d = difference(a, b);
  EXPECT_EQ(d.at(MultiIndex{0}), Scalar(1.0));
  EXPECT_EQ(d.at(MultiIndex{1}), Scalar(-2.0));
  EXPECT_TRUE(difference(a, a).empty());
  EXPECT_THROW(difference(a, SpectralVector(BasisTag::hermite())), ValidationError);
}

TEST(Truncate, KeepsSmallSizes)
{
  auto u = power_law_test_function(3.0, 5, BasisTag::fourier());
  auto t = u.truncated(2);
  EXPECT_EQ(t.size(), 5u);
  EXPECT_EQ(u.truncated(2, SizeKind::ProdNorm).size(), 3u);
}

TEST(Text, RoundTripIsExact)
{
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    BasisTag basis = trial % 3 == 0 ? BasisTag::hermite() : BasisTag::fourier(1 + trial % 2);
    auto u = random_vector(rng, basis, 50, 40);
    std::istringstream is(to_text(u));
    auto back = read_text(is, basis);
    EXPECT_EQ(back, u);
  }
}

TEST(Text, FormatIsTabSeparatedAndSorted)
{
  SpectralVector u(BasisTag::fourier(2));
  u.set(MultiIndex{1, -2}, {0.5, -1.0});
  u.set(MultiIndex{-3, 0}, {0.1, 0.0});
  EXPECT_EQ(to_text(u), "-3 0\t0.1\t0\n1 -2\t0.5\t-1\n");
}

TEST(Text, MalformedLinesReportTheLine)
{
  std::istringstream is("0\t1\t0\n1\tx\t0\n");
  try {
    read_text(is, BasisTag::fourier());
    FAIL() << "expected a format error";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  std::istringstream neg("-1\t1\t0\n");
  EXPECT_THROW(read_text(neg, BasisTag::hermite()), FormatError);
  std::istringstream fields("0\t1\n");
  EXPECT_THROW(read_text(fields, BasisTag::fourier()), FormatError);
}
