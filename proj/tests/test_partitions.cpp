#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace kyoto;

namespace {

std::vector<std::vector<int>> parts_of(const std::vector<Partition>& ps) {
  std::vector<std::vector<int>> out;
  for (const auto& p : ps)
    out.push_back(p.parts);
  return out;
}

/// The generator's contract, checked by filtering every candidate directly.
std::vector<std::vector<int>> filtered_partitions(const ProblemParams& p, int w, Orientation o, const ZUpperFn& z) {
  const ProblemParams q = o == Orientation::cols ? p : p.transposed();
  const long long limit = (q.b - 1) * oracle::choose(q.m, q.a);
  std::vector<std::vector<int>> out;
  for (const auto& cand : oracle::all_partitions(w, q.n, q.m)) {
    long long a_sum = 0, sum = 0;
    bool ok = true;
    for (std::size_t len = 1; len <= cand.size() && ok; ++len) {
      a_sum += oracle::choose(cand[len - 1], q.a);
      sum += cand[len - 1];
      const auto bound = o == Orientation::cols ? z(q.m, static_cast<int>(len)) : z(static_cast<int>(len), q.m);
      ok = a_sum <= limit && sum <= bound;
    }
    if (ok)
      out.push_back(cand);
  }
  return out;
}

Partition make(const std::vector<int>& parts, int bound) {
  return Partition{parts, bound, std::accumulate(parts.begin(), parts.end(), 0)};
}

}  // namespace

TEST(Partitions, Examples) {
  const ProblemParams p33{2, 2, 3, 3};
  const auto z = analytic_z_upper(p33);
  EXPECT_EQ(parts_of(generate_partitions(p33, 6, Orientation::cols, z)), (std::vector<std::vector<int>>{{2, 2, 2}}));
  EXPECT_TRUE(generate_partitions(p33, 7, Orientation::cols, z).empty());
  const ProblemParams p22{2, 2, 2, 2};
  EXPECT_EQ(parts_of(generate_partitions(p22, 0, Orientation::cols, analytic_z_upper(p22))),
            (std::vector<std::vector<int>>{{0, 0}}));
  EXPECT_TRUE(generate_partitions(p22, 5, Orientation::cols, analytic_z_upper(p22)).empty());
}

TEST(Partitions, FormatAndParse) {
  EXPECT_EQ(format_parts({3, 2, 0}), "3,2,0");
  EXPECT_EQ(parse_parts("3,2,0"), (std::vector<int>{3, 2, 0}));
  EXPECT_THROW(parse_parts("3,,1"), InputError);
  EXPECT_EQ(format_pair({make({2, 2, 2}, 3), make({2, 2, 2}, 3)}), "2,2,2 | 2,2,2");
}

TEST(Partitions, EqualToFilteredEnumeration) {
  // Both a sound analytic bound and the trivial bound m*n as z_ub.
  const ZUpperFn trivial = [](int r, int c) -> std::int64_t { return static_cast<std::int64_t>(r) * c; };
  for (int m = 2; m <= 6; ++m)
    for (int n = 2; n <= 6; ++n)
      for (int a = 2; a <= std::min(m, 4); ++a)
        for (int b = 2; b <= std::min(n, 4); ++b) {
          const ProblemParams p{a, b, m, n};
          const auto analytic = analytic_z_upper(p);
          for (int w = 0; w <= m * n; ++w)
            for (auto o : {Orientation::cols, Orientation::rows})
              for (const ZUpperFn* z : {&analytic, &trivial}) {
                const auto got = parts_of(generate_partitions(p, w, o, *z));
                ASSERT_EQ(got, filtered_partitions(p, w, o, *z)) << to_string(p) << " w=" << w;
                ASSERT_TRUE(std::is_sorted(got.begin(), got.end()));
                ASSERT_EQ(std::adjacent_find(got.begin(), got.end()), got.end());
              }
        }
}

TEST(Partitions, ShapeInvariants) {
  const ProblemParams p{3, 3, 7, 9};
  for (int w = 20; w <= 40; ++w)
    for (const auto& part : generate_partitions(p, w, Orientation::cols, analytic_z_upper(p))) {
      ASSERT_EQ(part.parts.size(), 9u);
      ASSERT_EQ(part.bound, 7);
      ASSERT_EQ(part.weight, w);
      ASSERT_TRUE(std::is_sorted(part.parts.rbegin(), part.parts.rend()));
    }
}

TEST(Pairing, Examples) {
  const ProblemParams p33{2, 2, 3, 3};
  EXPECT_EQ(pair_partitions({make({2, 2, 2}, 3)}, {make({2, 2, 2}, 3)}, p33).size(), 1u);
  const ProblemParams p44{2, 2, 4, 4};
  EXPECT_TRUE(pair_partitions({make({3, 3, 3, 0}, 4)}, {make({3, 3, 3, 0}, 4)}, p44).empty());
  EXPECT_EQ(pair_partitions({make({3, 2, 2, 2}, 4)}, {make({3, 2, 2, 2}, 4)}, p44).size(), 1u);
  const ProblemParams p22{2, 2, 2, 2};
  EXPECT_EQ(pair_partitions({make({1, 1}, 2)}, {make({1, 1}, 2)}, p22).size(), 1u);
  EXPECT_THROW(pair_partitions({make({1, 1}, 2), make({2, 1}, 2)}, {make({1, 1}, 2)}, p22), InputError);
  EXPECT_THROW(pair_partitions({make({1, 2}, 2)}, {make({2, 1}, 2)}, p22), InputError);
}

TEST(Pairing, EveryAdmissibleMatrixIsCoveredBySomePair) {
  // Exhaustive over all matrices up to 4 x 4: the sorted sums of every
  // admissible matrix appear among the generated pairs of its weight.
  for (int m = 2; m <= 4; ++m)
    for (int n = 2; n <= 4; ++n)
      for (int a = 2; a <= m; ++a)
        for (int b = 2; b <= n; ++b) {
          const ProblemParams p{a, b, m, n};
          std::vector<std::set<std::pair<std::vector<int>, std::vector<int>>>> pairs(m * n + 1);
          for (int w = 0; w <= m * n; ++w)
            for (const auto& pp : admissible_pairs(p, w, analytic_z_upper(p)))
              pairs[w].insert({pp.rows.parts, pp.cols.parts});
          for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (m * n)); ++mask) {
            const auto mat = oracle::from_mask(m, n, mask);
            if (oracle::has_minor(mat, a, b))
              continue;
            auto r = mat.row_sums(), c = mat.col_sums();
            std::sort(r.rbegin(), r.rend());
            std::sort(c.rbegin(), c.rend());
            ASSERT_TRUE(pairs[mat.weight()].count({r, c})) << to_string(p) << "\n" << mat;
          }
        }
}

TEST(Pairing, NoPairsAboveOracleValue) {
  // Above z the generator and pairing may still emit pairs, but never at
  // weights exceeding the analytic upper bound.
  for (int m = 2; m <= 5; ++m)
    for (int n = m; m * n <= 20; ++n) {
      const ProblemParams p{2, 2, m, n};
      const auto ub = z_upper(p).upper;
      EXPECT_TRUE(admissible_pairs(p, static_cast<int>(ub) + 1, analytic_z_upper(p)).empty()) << to_string(p);
    }
}
