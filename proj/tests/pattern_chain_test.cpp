#include "layoutforge/pattern_chain.hpp"
#include "layoutforge/synthetic.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>
#include <set>

namespace {

using namespace layoutforge;
constexpr double kPi = std::numbers::pi;

PairwiseRelation chairs(std::vector<Transform> priors) {
  PairwiseRelation r;
  r.dominant_id = "dining_table";
  r.secondary_id = "dining_chair";
  r.priors = std::move(priors);
  return r;
}

const Catalog& catalog() { return synthetic::demo_catalog(); }

const ObjectInstance& chair() { return synthetic::instance("dining_chair"); }

std::array<oracle::P, 4> quad(const Transform& t) {
  return oracle::corners(t.x, t.z, chair().width, chair().depth, t.theta);
}

bool conflict(const Transform& a, const Transform& b) {
  return oracle::overlap_area(quad(a), quad(b)) >= kCopyOverlapEps;
}

// Four sides, two chairs shifted into sides 0 and 1, two more far out.
PairwiseRelation eight_priors() {
  return chairs({{0, 0, 0.8, kPi},
                 {0, 0, -0.8, 0},
                 {0.9, 0, 0, -kPi / 2},
                 {-0.9, 0, 0, kPi / 2},
                 {0.15, 0, 0.85, kPi},
                 {-0.1, 0, -0.75, 0.1},
                 {2.2, 0, 0.3, -kPi / 2},
                 {-2.2, 0, -0.3, kPi / 2}});
}

void expect_sound_and_maximal(const PairwiseRelation& rel, const Chain& chain) {
  std::set<std::size_t> used(chain.begin(), chain.end());
  EXPECT_EQ(used.size(), chain.size());
  for (std::size_t i = 0; i < chain.size(); ++i) {
    for (std::size_t j = i + 1; j < chain.size(); ++j) {
      EXPECT_LT(oracle::overlap_area(quad(rel.priors[chain[i]]), quad(rel.priors[chain[j]])),
                kCopyOverlapEps);
    }
  }
  for (std::size_t k = 0; k < rel.priors.size(); ++k) {
    if (used.contains(k)) continue;
    const bool blocked = std::any_of(chain.begin(), chain.end(), [&](std::size_t c) {
      return conflict(rel.priors[k], rel.priors[c]);
    });
    EXPECT_TRUE(blocked) << "index " << k << " could extend the chain";
  }
}

TEST(PatternChain, FourSidesGiveOneFullChainEach) {
  const PairwiseRelation rel = chairs({{0, 0, 0.8, kPi}, {0, 0, -0.8, 0},
                                       {0.9, 0, 0, -kPi / 2}, {-0.9, 0, 0, kPi / 2}});
  Rng rng = seeded_rng(1);
  const PatternChainSet set = generate_chain_set(rel, catalog(), rng);
  ASSERT_EQ(set.chains.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(set.chains[k].front(), k);
    Chain sorted = set.chains[k];
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(sorted, (Chain{0, 1, 2, 3}));
  }
  EXPECT_EQ(set.max_length(), 4u);
}

TEST(PatternChain, MutuallyOverlappingPriors) {
  const PairwiseRelation rel = chairs({{0, 0, 0.8, kPi}, {0.1, 0, 0.8, kPi}});
  Rng rng = seeded_rng(1);
  const PatternChainSet set = generate_chain_set(rel, catalog(), rng);
  EXPECT_EQ(set.chains, (std::vector<Chain>{{0}, {1}}));
}

TEST(PatternChain, SinglePrior) {
  Rng rng = seeded_rng(1);
  EXPECT_EQ(generate_chain_set(chairs({{0, 0, 1, 0}}), catalog(), rng).chains,
            (std::vector<Chain>{{0}}));
}

TEST(PatternChain, EightPriorFixtureChainsAreMaximalIndependentSets) {
  const PairwiseRelation rel = eight_priors();
  ASSERT_TRUE(conflict(rel.priors[0], rel.priors[4]));
  ASSERT_TRUE(conflict(rel.priors[1], rel.priors[5]));
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Rng rng = seeded_rng(seed);
    const PatternChainSet set = generate_chain_set(rel, catalog(), rng, false);
    ASSERT_EQ(set.chains.size(), 8u);
    std::set<std::size_t> covered;
    for (const auto& chain : set.chains) {
      expect_sound_and_maximal(rel, chain);
      covered.insert(chain.begin(), chain.end());
    }
    EXPECT_EQ(covered.size(), 8u);
  }
}

TEST(PatternChain, SeededDeterminism) {
  Rng a = seeded_rng(4), b = seeded_rng(4);
  EXPECT_EQ(generate_chain_set(eight_priors(), catalog(), a),
            generate_chain_set(eight_priors(), catalog(), b));
}

TEST(PatternChain, RandomRelationsSoundAndMaximal) {
  Rng rng = seeded_rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Transform> priors;
    const std::size_t n = 1 + uniform_index(rng, 14);
    for (std::size_t i = 0; i < n; ++i) {
      priors.push_back({uniform_real(rng, -1.5, 1.5), 0, uniform_real(rng, -1.5, 1.5),
                        uniform_real(rng, -kPi, kPi)});
    }
    const PairwiseRelation rel = chairs(priors);
    const PatternChainSet set = generate_chain_set(rel, catalog(), rng, false);
    for (const auto& chain : set.chains) expect_sound_and_maximal(rel, chain);
  }
}

TEST(AlignChain, MergesNearlyEqualCoordinates) {
  const PairwiseRelation rel = chairs({{1.02, 0, 0.8, kPi}, {0.98, 0, -0.8, 0}});
  const auto poses = align_chain(rel, {0, 1}, catalog());
  EXPECT_NEAR(poses[0].x, 1.0, 1e-12);
  EXPECT_NEAR(poses[1].x, 1.0, 1e-12);
  EXPECT_EQ(poses[0].z, 0.8);
  EXPECT_EQ(poses[1].z, -0.8);
}

TEST(AlignChain, SnapsSmallRotations) {
  const PairwiseRelation rel = chairs({{0, 0, 0.8, 0.03}, {0, 0, -0.8, kPi / 2 - 0.04}});
  const auto poses = align_chain(rel, {0, 1}, catalog());
  EXPECT_EQ(poses[0].theta, 0.0);
  EXPECT_NEAR(poses[1].theta, kPi / 2, 1e-15);
}

TEST(AlignChain, AlignedInputIsAFixedPoint) {
  const PairwiseRelation rel = chairs({{0, 0, 0.8, kPi}, {0, 0, -0.8, 0}, {0.9, 0, 0, -kPi / 2}});
  const auto poses = align_chain(rel, {2, 0, 1}, catalog());
  EXPECT_EQ(poses, (std::vector<Transform>{rel.priors[2], rel.priors[0], rel.priors[1]}));
}

TEST(AlignChain, NeverCollidesAndIsIdempotent) {
  Rng rng = seeded_rng(13);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Transform> priors;
    for (int i = 0; i < 8; ++i) {
      const double x = 0.5 * static_cast<double>(uniform_index(rng, 5)) - 1.0;
      const double z = 0.55 * static_cast<double>(uniform_index(rng, 5)) - 1.1;
      priors.push_back({x + uniform_real(rng, -0.04, 0.04), 0, z + uniform_real(rng, -0.04, 0.04),
                        normalize_angle(kPi / 2 * static_cast<double>(uniform_index(rng, 4)) +
                                        uniform_real(rng, -0.06, 0.06))});
    }
    const PairwiseRelation rel = chairs(priors);
    const PatternChainSet set = generate_chain_set(rel, catalog(), rng, true);
    for (const auto& chain : set.chains) {
      const auto once = align_chain(rel, chain, catalog());
      EXPECT_TRUE(copies_disjoint(chair(), once));
      for (std::size_t i = 0; i < once.size(); ++i) {
        for (std::size_t j = i + 1; j < once.size(); ++j) EXPECT_FALSE(conflict(once[i], once[j]));
      }
      const PairwiseRelation again = chairs(once);
      Chain identity(once.size());
      for (std::size_t i = 0; i < identity.size(); ++i) identity[i] = i;
      EXPECT_EQ(align_chain(again, identity, catalog()), once);
    }
  }
}

}  // namespace
