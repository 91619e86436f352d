#include "support/oracles.hpp"

#include <gtest/gtest.h>

using namespace kyoto;

namespace {

bool rows_descending_within(const BitMatrix& mat, const Blocks& blocks) {
  for (const auto& blk : blocks)
    for (std::size_t k = 1; k < blk.size(); ++k) {
      const auto hi = mat.row(blk[k - 1]), lo = mat.row(blk[k]);
      if (std::lexicographical_compare(hi.begin(), hi.end(), lo.begin(), lo.end()))
        return false;
    }
  return true;
}

/// Consecutive runs of a random length, covering 0..n-1.
Blocks random_blocks(std::mt19937& rng, int n) {
  Blocks out;
  for (int i = 0; i < n;) {
    const int len = 1 + static_cast<int>(rng() % (n - i));
    out.emplace_back();
    for (int k = 0; k < len; ++k)
      out.back().push_back(i++);
  }
  return out;
}

}  // namespace

TEST(SortToFixpoint, RowsOnlyExample) {
  const auto input = oracle::lexsort_example_input();
  const auto sorted = sort_to_fixpoint(input, whole_block(5), singleton_blocks(5));
  EXPECT_EQ(sorted, oracle::lexsort_example_rows_sorted());
}

TEST(SortToFixpoint, FullBlocksReachDoublySortedFixpoint) {
  const auto sorted = sort_to_fixpoint(oracle::lexsort_example_input(), whole_block(5), whole_block(5));
  EXPECT_TRUE(rows_descending_within(sorted, whole_block(5)));
  EXPECT_TRUE(rows_descending_within(sorted.transposed(), whole_block(5)));
  EXPECT_TRUE(oracle::isomorphic(sorted, oracle::lexsort_example_input(), false));
}

TEST(SortToFixpoint, BlockHelpersAndValidation) {
  EXPECT_EQ(blocks_by_value({3, 3, 2, 2, 2, 0}), (Blocks{{0, 1}, {2, 3, 4}, {5}}));
  EXPECT_EQ(whole_block(3), (Blocks{{0, 1, 2}}));
  EXPECT_EQ(singleton_blocks(2), (Blocks{{0}, {1}}));
  EXPECT_THROW(sort_to_fixpoint(BitMatrix::identity(2), {{0}}, whole_block(2)), InputError);
  EXPECT_THROW(sort_to_fixpoint(BitMatrix::identity(2), {{0, 0}, {1}}, whole_block(2)), InputError);
}

TEST(SortToFixpoint, PotentialStrictlyIncreasesPerSwap) {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 500; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 9), n = 1 + static_cast<int>(rng() % 9);
    const auto mat = oracle::random_matrix(rng, m, n);
    const auto rb = random_blocks(rng, m), cb = random_blocks(rng, n);
    const auto trace = sort_to_fixpoint_traced(mat, rb, cb);
    ASSERT_EQ(trace.potentials.size(), trace.swaps + 1);
    for (std::size_t k = 1; k < trace.potentials.size(); ++k)
      ASSERT_LT(trace.potentials[k - 1], trace.potentials[k]);
    ASSERT_EQ(trace.potentials.back(), potential(rotated(trace.result)));
  }
}

TEST(SortToFixpoint, FixpointProperties) {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 7), n = 1 + static_cast<int>(rng() % 7);
    const auto mat = oracle::random_matrix(rng, m, n);
    const auto rb = random_blocks(rng, m), cb = random_blocks(rng, n);
    const auto out = sort_to_fixpoint(mat, rb, cb);
    ASSERT_TRUE(rows_descending_within(out, rb));
    ASSERT_TRUE(rows_descending_within(out.transposed(), cb));
    ASSERT_EQ(sort_to_fixpoint(out, rb, cb), out);
    ASSERT_EQ(out.weight(), mat.weight());
    if (m <= 6 && n <= 6) {
      ASSERT_TRUE(oracle::isomorphic(out, mat, false));
    }
  }
}

TEST(Rotated, Involution) {
  const auto x = oracle::lexsort_example_input();
  EXPECT_EQ(rotated(rotated(x)), x);
  EXPECT_EQ(rotated(BitMatrix::from_rows({"10", "00"})), BitMatrix::from_rows({"00", "01"}));
}

TEST(Canonical, ExamplePairIsIsomorphic) {
  const auto l = oracle::isomorphic_pair_left(), r = oracle::isomorphic_pair_right();
  EXPECT_EQ(encode_matrix(l), "8 8 4BySSiYxiUU=");
  EXPECT_EQ(encode_matrix(r), "8 8 4JhUMg5JJYM=");
  EXPECT_EQ(canonical_form(l), canonical_form(r));
  EXPECT_EQ(make_canonical(l).code, make_canonical(r).code);
  EXPECT_EQ(automorphism_count(l), automorphism_count(r));
}

TEST(Canonical, InvariantUnderShuffles) {
  std::mt19937 rng(43);
  for (int trial = 0; trial < 500; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 8), n = 1 + static_cast<int>(rng() % 8);
    const auto mat = oracle::random_matrix(rng, m, n);
    const auto form = canonical_form(mat);
    ASSERT_EQ(canonical_form(oracle::shuffle(rng, mat)), form);
    ASSERT_EQ(canonical_form(mat.transposed()).rows(), m == n ? m : n);
    if (m == n) {
      ASSERT_EQ(canonical_form(mat.transposed()), form);
    }
    ASSERT_TRUE(oracle::isomorphic(form, mat, true) || m > 6 || n > 6);
  }
}

TEST(Canonical, SeparatesNonIsomorphicMatrices) {
  std::mt19937 rng(44);
  int distinct = 0;
  for (int trial = 0; trial < 1500; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const auto x = oracle::random_matrix(rng, n, n), y = oracle::random_matrix(rng, n, n);
    const bool iso = oracle::isomorphic(x, y, true);
    ASSERT_EQ(canonical_form(x) == canonical_form(y), iso) << x << "\n" << y;
    distinct += !iso;
    const bool iso_direct = oracle::isomorphic(x, y, false);
    ASSERT_EQ(canonical_form(x, false) == canonical_form(y, false), iso_direct);
  }
  EXPECT_GT(distinct, 100);
}

TEST(Canonical, FormIsGreatestImage) {
  // Exhaustive over all images of small matrices.
  std::mt19937 rng(45);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 4), n = 1 + static_cast<int>(rng() % 4);
    const auto mat = oracle::random_matrix(rng, m, n);
    std::vector<int> rp(m), cp(n);
    std::iota(rp.begin(), rp.end(), 0);
    BitMatrix best;
    do {
      std::iota(cp.begin(), cp.end(), 0);
      do {
        const auto img = mat.permuted(rp, cp);
        // Only images with non-increasing line sums compete.
        const auto rs = img.row_sums(), cs = img.col_sums();
        if (!std::is_sorted(rs.rbegin(), rs.rend()) || !std::is_sorted(cs.rbegin(), cs.rend()))
          continue;
        if (best.empty() || best < img)
          best = img;
      } while (std::next_permutation(cp.begin(), cp.end()));
    } while (std::next_permutation(rp.begin(), rp.end()));
    ASSERT_EQ(canonical_form(mat, false), best) << mat;
  }
}

TEST(Automorphisms, Examples) {
  EXPECT_EQ(automorphism_count(BitMatrix::identity(2)), 4u);
  EXPECT_EQ(automorphism_count(BitMatrix::ones(1, 1)), 2u);
  EXPECT_EQ(automorphism_count(BitMatrix::ones(2, 2)), 8u);
  EXPECT_EQ(automorphism_count(BitMatrix::ones(2, 3)), 12u);
  EXPECT_EQ(automorphism_count(BitMatrix::identity(4)), 48u);
  for (const auto& x : {BitMatrix::identity(2), BitMatrix::ones(1, 1), BitMatrix::ones(2, 2)})
    EXPECT_EQ(automorphism_count(x), oracle::automorphisms(x));
}

TEST(Automorphisms, MatchBruteForce) {
  std::mt19937 rng(46);
  for (int trial = 0; trial < 300; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 5), n = 1 + static_cast<int>(rng() % 5);
    const auto mat = oracle::random_matrix(rng, m, n, trial % 3 ? 0.5 : 0.8);
    ASSERT_EQ(automorphism_count(mat), oracle::automorphisms(mat)) << mat;
  }
}

TEST(Canonical, NodeBudget) {
  EXPECT_THROW(canonical_search(BitMatrix::identity(6), true, 3), BudgetError);
  EXPECT_GT(canonical_search(BitMatrix::identity(6)).nodes, 0u);
  // A large highly symmetric matrix stays cheap.
  EXPECT_EQ(automorphism_count(BitMatrix::ones(10, 10)), 2 * 3628800ull * 3628800ull);
}

TEST(ComplementStructure, Examples) {
  const auto ones = complement_structure(BitMatrix::ones(3, 4));
  EXPECT_EQ(ones.isolated_vertices, 7);
  EXPECT_EQ(ones.edges, 0);
  const auto i2 = complement_structure(BitMatrix::identity(2));
  EXPECT_EQ(i2.isolated_edges, 2);
  const auto i3 = complement_structure(BitMatrix::identity(3));
  EXPECT_EQ(i3.cycles, (std::vector<int>{6}));
  EXPECT_EQ(i3.edges, 6);
  const auto path = complement_structure(BitMatrix::from_rows({"001", "111"}));
  EXPECT_EQ(path.paths, (std::vector<int>{2}));
  EXPECT_EQ(path.isolated_vertices, 2);
  EXPECT_EQ(complement_structure(BitMatrix(2, 2)).cycles, (std::vector<int>{4}));
  EXPECT_EQ(complement_structure(BitMatrix(2, 3)).other, 1);
}

TEST(EnumerateMaximal, SmallCases) {
  const auto s3 = enumerate_maximal({2, 2, 3, 3}, 6);
  EXPECT_TRUE(s3.complete);
  ASSERT_EQ(s3.representatives.size(), 1u);
  EXPECT_EQ(s3.representatives[0].automorphism_count, 12u);
  EXPECT_EQ(complement_structure(s3.representatives[0].matrix).isolated_edges, 3);

  const auto s5 = enumerate_maximal({2, 2, 5, 5}, 12);
  EXPECT_TRUE(s5.complete);
  ASSERT_EQ(s5.representatives.size(), 2u);
  std::vector<std::uint64_t> auts;
  for (const auto& c : s5.representatives) {
    EXPECT_TRUE(verify_witness(c.matrix, s5.params, 12));
    EXPECT_EQ(c.matrix, canonical_form(c.matrix));
    auts.push_back(c.automorphism_count);
  }
  std::sort(auts.begin(), auts.end());
  EXPECT_EQ(auts, (std::vector<std::uint64_t>{4, 48}));
  EXPECT_THROW(enumerate_maximal({2, 2, 3, 4}, 7), InputError);
}

TEST(EnumerateMaximal, AgreesWithExhaustiveClasses) {
  // Classes of maximal matrices counted by brute force and isomorphism tests.
  for (const ProblemParams p : {ProblemParams{2, 2, 4, 4}, ProblemParams{2, 3, 4, 4}, ProblemParams{3, 3, 4, 4}}) {
    const int z = brute_force_z(p);
    std::vector<BitMatrix> classes;
    for (std::uint64_t mask = 0; mask < (1u << 16); ++mask) {
      if (std::popcount(mask) != z)
        continue;
      const auto mat = oracle::from_mask(4, 4, mask);
      if (oracle::has_minor(mat, p.a, p.b))
        continue;
      if (std::none_of(classes.begin(), classes.end(),
                       [&](const BitMatrix& c) { return oracle::isomorphic(c, mat, p.a == p.b); }))
        classes.push_back(mat);
    }
    const auto set = enumerate_maximal(p, z);
    EXPECT_TRUE(set.complete);
    EXPECT_EQ(set.representatives.size(), classes.size()) << to_string(p);
  }
}

TEST(EnumerateMaximal, RepresentativeLine) {
  const auto s3 = enumerate_maximal({2, 2, 3, 3}, 6);
  const auto line = format_representative(s3, s3.representatives[0]);
  EXPECT_EQ(line, "2 2 3 3 6 " + s3.representatives[0].code + " 2,2,2 2,2,2 12");
}
