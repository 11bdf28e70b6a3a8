#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "spspec/indices.hpp"

using namespace spspec;

namespace {

SparseSetSpec make_spec(int p, Coord N, int alpha, SizeKind size, Lattice lat, std::size_t d = 1)
{
  SparseSetSpec s;
  s.p = p;
  s.N = N;
  s.alpha = alpha;
  s.size = size;
  s.lattice = lat;
  s.dim = d;
  return s;
}

// all points of [-R, R]^d (or [0, R]^d), lexicographic
std::vector<MultiIndex> box_points(std::size_t d, Coord R, Lattice lat)
{
  Coord lo = lat == Lattice::Naturals ? 0 : -R;
  std::vector<MultiIndex> out;
  std::vector<Coord> cur(d, lo);
  while (true) {
    out.emplace_back(cur);
    std::size_t n = d;
    while (n-- > 0) {
      if (++cur[n] <= R)
        break;
      cur[n] = lo;
    }
    if (n == static_cast<std::size_t>(-1))
      break;
  }
  return out;
}

// brute-force filter of the boxed p-fold product, lexicographic
std::vector<std::vector<MultiIndex>> brute_sparse(const SparseSetSpec& s, const MultiIndex& ell)
{
  std::vector<std::vector<MultiIndex>> out;
  auto pts = box_points(s.dim, s.N, s.lattice);
  std::vector<std::size_t> idx(static_cast<std::size_t>(s.p), 0);
  Coord lsize = size_of(s.size, ell);
  if (s.boxM && lsize > *s.boxM)
    return out;
  while (true) {
    std::vector<MultiIndex> t;
    Coord prod = s.alpha ? lsize : 1;
    bool ok = true;
    for (auto i : idx) {
      t.push_back(pts[i]);
      Coord sz = size_of(s.size, pts[i]);
      if (s.boxM && sz > *s.boxM)
        ok = false;
      prod *= sz;
    }
    if (ok && prod <= s.N)
      out.push_back(t);
    std::size_t k = idx.size();
    while (k-- > 0) {
      if (++idx[k] < pts.size())
        break;
      idx[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1))
      break;
  }
  return out;
}

}  // namespace

TEST(Norms, MaxNorm)
{
  EXPECT_EQ(max_norm(MultiIndex{0}), 1);
  EXPECT_EQ(max_norm(MultiIndex{2, -3}), 3);
  EXPECT_EQ(max_norm(MultiIndex{-7}), 7);
}

TEST(Norms, ProdNorm)
{
  EXPECT_EQ(prod_norm(MultiIndex{0, 0}), 1);
  EXPECT_EQ(prod_norm(MultiIndex{2, -1}), 6);
  EXPECT_EQ(prod_norm(MultiIndex{3}), 4);
}

TEST(Norms, ProdNormSandwich)
{
  for (const auto& j : box_points(2, 10, Lattice::Integers)) {
    EXPECT_LE(max_norm(j), prod_norm(j));
    EXPECT_LE(prod_norm(j), 4 * max_norm(j) * max_norm(j));
  }
}

TEST(Momentum, Examples)
{
  std::vector<MultiIndex> a{{2}, {3}};
  EXPECT_EQ(momentum(MultiIndex{5}, a), (MultiIndex{0}));
  std::vector<MultiIndex> b{{1}, {-1}};
  EXPECT_EQ(momentum(MultiIndex{0}, b), (MultiIndex{0}));
  std::vector<MultiIndex> c{{1, 0}, {0, 2}};
  EXPECT_EQ(momentum(MultiIndex{2, 1}, c), (MultiIndex{1, -1}));
}

TEST(Momentum, DimensionMismatch)
{
  std::vector<MultiIndex> js{{1}, {1, 2}};
  EXPECT_THROW(momentum(MultiIndex{0}, js), ValidationError);
}

TEST(MultiIndexType, LexicographicOrderAndHash)
{
  EXPECT_LT((MultiIndex{-1, 5}), (MultiIndex{0, -3}));
  EXPECT_LT((MultiIndex{0, -3}), (MultiIndex{0, 2}));
  MultiIndexHash h;
  EXPECT_EQ(h(MultiIndex{3, -4}), h(MultiIndex{3, -4}));
  EXPECT_EQ((MultiIndex{1, 2}).str(), "(1,2)");
}

TEST(SpecValidation, RejectsBadFields)
{
  auto s = make_spec(0, 4, 0, SizeKind::MaxNorm, Lattice::Integers);
  EXPECT_THROW(s.validate(), ValidationError);
  s.p = 2;
  s.N = 0;
  EXPECT_THROW(s.validate(), ValidationError);
  s.N = 4;
  s.alpha = 2;
  EXPECT_THROW(s.validate(), ValidationError);
  s.alpha = 0;
  s.boxM = 0;
  EXPECT_THROW(s.validate(), ValidationError);
}

TEST(Enumerate, TwentyOneTuples)
{
  auto s = make_spec(2, 2, 0, SizeKind::MaxNorm, Lattice::Integers);
  auto tuples = enumerate_sparse(s, MultiIndex{7});
  EXPECT_EQ(tuples.size(), 21u);
  int small = 0, one_two = 0;
  for (const auto& t : tuples) {
    Coord a = std::abs(t[0][0]), b = std::abs(t[1][0]);
    if (a <= 1 && b <= 1)
      ++small;
    else if ((a == 2) != (b == 2))
      ++one_two;
  }
  EXPECT_EQ(small, 9);
  EXPECT_EQ(one_two, 12);
}

TEST(Enumerate, AlphaOneBudget)
{
  auto s = make_spec(1, 3, 1, SizeKind::MaxNorm, Lattice::Naturals);
  auto tuples = enumerate_sparse(s, MultiIndex{2});
  ASSERT_EQ(tuples.size(), 2u);
  EXPECT_EQ(tuples[0][0], MultiIndex{0});
  EXPECT_EQ(tuples[1][0], MultiIndex{1});
}

TEST(Enumerate, LevelOneIsTheSizeOneSet)
{
  for (int p = 1; p <= 4; ++p) {
    // only j = 0 has product size 1
    auto prod = make_spec(p, 1, 1, SizeKind::ProdNorm, Lattice::Integers);
    auto t = enumerate_sparse(prod, MultiIndex{0});
    ASSERT_EQ(t.size(), 1u);
    for (const auto& j : t[0])
      EXPECT_EQ(j, MultiIndex{0});
    // max-norm size 1 also admits +-1
    auto maxn = make_spec(p, 1, 1, SizeKind::MaxNorm, Lattice::Integers);
    std::size_t expect = 1;
    for (int i = 0; i < p; ++i)
      expect *= 3;
    EXPECT_EQ(enumerate_sparse(maxn, MultiIndex{0}).size(), expect);
  }
}

TEST(Enumerate, AlphaOneRejectsLargeEll)
{
  auto s = make_spec(2, 4, 1, SizeKind::MaxNorm, Lattice::Integers);
  EXPECT_TRUE(enumerate_sparse(s, MultiIndex{5}).empty());
  EXPECT_FALSE(enumerate_sparse(s, MultiIndex{4}).empty());
}

TEST(Enumerate, MatchesBruteForce)
{
  for (auto size : {SizeKind::MaxNorm, SizeKind::ProdNorm})
    for (auto lat : {Lattice::Integers, Lattice::Naturals})
      for (std::size_t d = 1; d <= 2; ++d)
        for (int p = 1; p <= 3; ++p) {
          // keep the brute-force box small for the widest case
          Coord nmax = (d == 2 && p == 3) ? 4 : (d == 2 ? 12 : 20);
          for (Coord N = 1; N <= nmax; N += (N < 8 ? 1 : 3))
            for (int alpha = 0; alpha <= 1; ++alpha) {
              auto s = make_spec(p, N, alpha, size, lat, d);
              std::vector<Coord> lc(d, lat == Lattice::Naturals ? 1 : -1);
              MultiIndex ell(lc);
              auto got = enumerate_sparse(s, ell);
              auto want = brute_sparse(s, ell);
              ASSERT_EQ(got, want) << "d=" << d << " p=" << p << " N=" << N << " alpha=" << alpha;
            }
        }
}

TEST(Enumerate, BoxCapMatchesBruteForce)
{
  auto s = make_spec(2, 12, 0, SizeKind::MaxNorm, Lattice::Integers);
  s.boxM = 3;
  auto got = enumerate_sparse(s, MultiIndex{0});
  EXPECT_EQ(got, brute_sparse(s, MultiIndex{0}));
  for (const auto& t : got)
    for (const auto& j : t)
      EXPECT_LE(max_norm(j), 3);
  EXPECT_TRUE(enumerate_sparse(s, MultiIndex{4}).empty());
}

TEST(Enumerate, ContainsAgreesWithEnumeration)
{
  auto s = make_spec(2, 9, 1, SizeKind::ProdNorm, Lattice::Integers);
  MultiIndex ell{1};
  auto in = enumerate_sparse(s, ell);
  std::set<std::vector<MultiIndex>> members(in.begin(), in.end());
  for (Coord a = -9; a <= 9; ++a)
    for (Coord b = -9; b <= 9; ++b) {
      std::vector<Coord> flat{a, b};
      EXPECT_EQ(s.contains(ell.coords(), IndexTuple(flat, 1)),
                members.count({MultiIndex{a}, MultiIndex{b}}) > 0);
    }
}

TEST(Enumerate, MonotoneInNAndAlpha)
{
  for (Coord N = 1; N < 16; ++N) {
    auto s0 = make_spec(3, N, 0, SizeKind::MaxNorm, Lattice::Integers);
    auto s1 = s0;
    s1.N = N + 1;
    auto a1 = s0;
    a1.alpha = 1;
    MultiIndex ell{2};
    auto small = enumerate_sparse(s0, ell), big = enumerate_sparse(s1, ell), sub = enumerate_sparse(a1, ell);
    std::set<std::vector<MultiIndex>> bs(big.begin(), big.end()), ss(small.begin(), small.end());
    for (const auto& t : small)
      EXPECT_TRUE(bs.count(t));
    for (const auto& t : sub)
      EXPECT_TRUE(ss.count(t));
  }
}

TEST(Enumerate, LexicographicAndUnique)
{
  auto s = make_spec(3, 10, 0, SizeKind::ProdNorm, Lattice::Integers, 2);
  auto t = enumerate_sparse(s, MultiIndex{0, 0});
  EXPECT_TRUE(std::is_sorted(t.begin(), t.end()));
  EXPECT_EQ(std::adjacent_find(t.begin(), t.end()), t.end());
}

TEST(SizeBall, MatchesFilter)
{
  auto s = make_spec(1, 1, 0, SizeKind::ProdNorm, Lattice::Integers, 2);
  auto ball = size_ball(s, 6);
  std::vector<MultiIndex> want;
  for (const auto& j : box_points(2, 6, Lattice::Integers))
    if (prod_norm(j) <= 6)
      want.push_back(j);
  EXPECT_EQ(ball, want);
}

TEST(Count, Examples)
{
  EXPECT_EQ(count_sparse(make_spec(2, 2, 0, SizeKind::MaxNorm, Lattice::Integers), false), Count(21));
  EXPECT_EQ(count_sparse(make_spec(1, 1, 0, SizeKind::MaxNorm, Lattice::Integers), false), Count(3));
  EXPECT_EQ(count_sparse(make_spec(2, 4, 0, SizeKind::ProdNorm, Lattice::Naturals), false), Count(8));
}

TEST(Count, MatchesEnumeration)
{
  for (auto size : {SizeKind::MaxNorm, SizeKind::ProdNorm})
    for (auto lat : {Lattice::Integers, Lattice::Naturals})
      for (std::size_t d = 1; d <= 2; ++d)
        for (int p = 1; p <= 3; ++p)
          for (Coord N : {1, 2, 5, 12, 30}) {
            auto s = make_spec(p, N, 0, size, lat, d);
            std::vector<Coord> zero(d, 0);
            Count tuples = enumerate_sparse(s, MultiIndex(zero)).size();
            EXPECT_EQ(count_sparse(s, false), tuples);
            // alpha = 1: sum over the l ball
            auto s1 = s;
            s1.alpha = 1;
            Count total = 0;
            for (const auto& ell : size_ball(s1, N))
              total += enumerate_sparse(s1, ell).size();
            EXPECT_EQ(count_sparse(s1, true), total) << "p=" << p << " N=" << N << " d=" << d;
            // alpha = 0 with a box bounds l too
            auto sb = s;
            sb.boxM = 3;
            Count boxed = 0;
            for (const auto& ell : size_ball(sb, 3))
              boxed += enumerate_sparse(sb, ell).size();
            EXPECT_EQ(count_sparse(sb, true), boxed);
          }
}

TEST(Count, AlphaZeroWithoutBoxNeedsCap)
{
  EXPECT_THROW(count_sparse(make_spec(2, 4, 0, SizeKind::MaxNorm, Lattice::Integers), true), ValidationError);
}

TEST(Count, MomentumRestricted)
{
  for (Coord q : {0, 1, 2}) {
    auto s = make_spec(2, 8, 0, SizeKind::MaxNorm, Lattice::Integers);
    // brute force: l with |l - j1 - j2|_inf <= q for every tuple
    Count brute = 0;
    for (const auto& t : enumerate_sparse(s, MultiIndex{0})) {
      Coord m = t[0][0] + t[1][0];
      for (Coord l = m - q - 2; l <= m + q + 2; ++l)
        if (std::abs(l - m) <= q)
          ++brute;
    }
    EXPECT_EQ(count_momentum_restricted(s, q), brute);
  }
}

TEST(Count, OverflowIsReported)
{
  auto s = make_spec(6, 1000000, 0, SizeKind::MaxNorm, Lattice::Integers, 8);
  EXPECT_THROW(count_sparse(s, false), CountOverflow);
}

TEST(Count, ToString)
{
  Count big = static_cast<Count>(1) << 100;
  EXPECT_EQ(to_string(big), "1267650600228229401496703205376");
  EXPECT_EQ(to_string(Count(0)), "0");
}
