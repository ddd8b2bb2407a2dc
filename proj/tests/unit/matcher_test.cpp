#include <gtest/gtest.h>

#include <climits>
#include <fstream>
#include <functional>
#include <sstream>

#include "assignment.hpp"
#include "brute_force.hpp"
#include "decide/lexicon.hpp"
#include "decide/matcher.hpp"
#include "generators.hpp"

namespace decide {
namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kFig3 = "For your installation of tensorflow, 10.0 version of CUDA library should be used";

TEST(Matcher, FigureThreeUsesTheTree) {
  Paragraph para{1, 0, kFig3};
  auto rec = recognize(para, default_lexicon());
  auto aligned = align_parses(parse_conllu(slurp(DECIDE_FIXTURES_DIR "/fig3.conllu")), {para});
  ASSERT_TRUE(aligned);
  auto matches = match_paragraph(rec, &(*aligned)[0]);
  ASSERT_EQ(matches.size(), 2u);
  EXPECT_EQ(matches[0].component.component, "tensorflow");
  EXPECT_FALSE(matches[0].version);
  EXPECT_EQ(matches[1].component.component, "cuda");
  ASSERT_TRUE(matches[1].version);
  EXPECT_EQ(matches[1].version->version.str(), "10.0");
  EXPECT_EQ(matches[1].lca_depth, 1u);
  EXPECT_EQ(matches[1].mode, MatchMode::Tree);

  // Without the parse, proximity pairs the version with tensorflow instead.
  auto plain = match_paragraph(rec, nullptr);
  ASSERT_TRUE(plain[0].version);
  EXPECT_EQ(plain[0].mode, MatchMode::Distance);
}

TEST(Matcher, DistanceModeWithinSentences) {
  auto rec = recognize(Paragraph{1, 0, "TensorFlow 1.15 is not compatible with CUDA 10.2. Python 3.7 is fine."},
                       default_lexicon());
  auto m = match_paragraph(rec, nullptr);
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m[0].version->version.str(), "1.15");
  EXPECT_EQ(m[1].version->version.str(), "10.2");
  EXPECT_EQ(m[1].token_distance, 1u);
  EXPECT_EQ(m[2].version->version.str(), "3.7");
  auto comps = extracted_components(m);
  ASSERT_EQ(comps.size(), 3u);
  EXPECT_EQ(comps[0].str(), "cuda 10.2");
  EXPECT_EQ(comps[2].str(), "tensorflow 1.15");
}

TEST(Matcher, GluedMentionsHaveZeroDistance) {
  auto rec = recognize(Paragraph{1, 0, "cuda-8 with gcc 5.4"}, default_lexicon());
  auto m = match_paragraph(rec, nullptr);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0].token_distance, 0u);
  EXPECT_EQ(m[0].version->version.str(), "8");
}

TEST(Matcher, TiesGoLeftToRight) {
  // c0 v0 c1 v1 on a flat tree: every pairing scores the same depth, and
  // both full assignments have equal distance.
  std::vector<DepToken> toks{{"c0", 4, "dep"}, {"v0", 4, "dep"}, {"c1", 4, "dep"}, {"v1", 4, "dep"}, {"r", {}, "root"}};
  DepTree tree(toks);
  tree.set_char_spans({{0, 2}, {3, 5}, {6, 8}, {9, 11}, {12, 13}});
  auto mk_c = [](std::size_t w) {
    return ComponentMention{"c" + std::to_string(w), StackLayer::Library, {w, w + 1}, {3 * w, 3 * w + 2}, ""};
  };
  auto mk_v = [](std::size_t w, std::uint32_t v) { return VersionMention{Version{{v}, false}, {w, w + 1}, {3 * w, 3 * w + 2}, ""}; };
  auto m = match_pairs({mk_c(0), mk_c(2)}, {mk_v(1, 1), mk_v(3, 2)}, &tree);
  EXPECT_EQ(m[0].version->version.str(), "1");
  EXPECT_EQ(m[1].version->version.str(), "2");

  // One version, two equidistant components: the left one gets it.
  auto one = match_pairs({mk_c(0), mk_c(2)}, {mk_v(1, 1)}, nullptr);
  EXPECT_TRUE(one[0].version);
  EXPECT_FALSE(one[1].version);
}

TEST(Matcher, MissingHeadFallsBackToDistance) {
  testing::Rng rng(5);
  auto tree = testing::random_tree(rng, 3);
  ComponentMention c{"c", StackLayer::Library, {0, 1}, {100, 102}, ""};
  VersionMention v{Version{{1}, false}, {1, 2}, {0, 5}, ""};
  auto m = match_pairs({c}, {v}, &tree);
  EXPECT_EQ(m[0].mode, MatchMode::Distance);
  EXPECT_TRUE(m[0].version);
}

// Total LCA depth equals the exhaustive maximum on random small instances.
TEST(Matcher, TreeModeIsOptimal) {
  testing::Rng rng(2024);
  for (int round = 0; round < 300; ++round) {
    auto inst = testing::random_matching_instance(rng, 4, 4, 15);
    auto m = match_pairs(inst.components, inst.versions, &inst.tree);
    std::size_t total = 0, matched = 0;
    std::set<std::size_t> used;
    for (const auto& p : m) {
      if (!p.version) continue;
      ++matched;
      total += p.lca_depth;
      EXPECT_TRUE(used.insert(p.version->tokens.begin).second);
    }
    EXPECT_EQ(matched, std::min(inst.components.size(), inst.versions.size()));
    ASSERT_EQ(total, testing::brute_max_lca(inst.tree, inst.components, inst.versions)) << "round " << round;
  }
}

// Best (weight, -distance) over full-cardinality assignments, by brute force.
std::pair<std::int64_t, std::int64_t> brute_pair(const std::vector<std::vector<std::int64_t>>& w,
                                                 const std::vector<std::vector<std::int64_t>>& d) {
  std::size_t n = w.size(), m = w[0].size(), target = std::min(n, m);
  std::pair<std::int64_t, std::int64_t> best{LLONG_MIN, LLONG_MIN};
  std::vector<bool> used(m, false);
  std::function<void(std::size_t, std::size_t, std::int64_t, std::int64_t)> go = [&](std::size_t i, std::size_t k,
                                                                                     std::int64_t sw, std::int64_t sd) {
    if (i == n) {
      if (k == target) best = std::max(best, std::make_pair(sw, -sd));
      return;
    }
    if (k + (n - i) > target) go(i + 1, k, sw, sd);
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j]) continue;
      used[j] = true;
      go(i + 1, k + 1, sw + w[i][j], sd + d[i][j]);
      used[j] = false;
    }
  };
  go(0, 0, 0, 0);
  return best;
}

TEST(Assignment, HungarianMatchesBruteForce) {
  testing::Rng rng(77);
  for (int round = 0; round < 200; ++round) {
    std::size_t n = static_cast<std::size_t>(rng.between(1, 7));
    std::size_t m = static_cast<std::size_t>(rng.between(1, 7));
    std::vector<std::vector<std::int64_t>> w(n, std::vector<std::int64_t>(m));
    for (auto& r : w) {
      for (auto& x : r) x = rng.between(-20, 20);
    }
    auto assign = detail::max_weight_assignment(w);
    ASSERT_EQ(assign.size(), n);
    std::int64_t total = 0;
    std::size_t matched = 0;
    std::set<int> cols;
    for (std::size_t i = 0; i < n; ++i) {
      if (assign[i] < 0) continue;
      ++matched;
      total += w[i][static_cast<std::size_t>(assign[i])];
      EXPECT_TRUE(cols.insert(assign[i]).second);
    }
    EXPECT_EQ(matched, std::min(n, m));
    std::vector<std::vector<std::int64_t>> zero(n, std::vector<std::int64_t>(m, 0));
    EXPECT_EQ(total, brute_pair(w, zero).first) << "round " << round;
  }
}

// Sentences with more than six mentions per side take the solver path; the
// result must still maximize depth and then minimize distance.
TEST(Matcher, LargeSentencesStayOptimal) {
  testing::Rng rng(4242);
  for (int round = 0; round < 30; ++round) {
    auto inst = testing::random_matching_instance(rng, 8, 8, 20);
    while (inst.components.size() <= 6 && inst.versions.size() <= 6) inst = testing::random_matching_instance(rng, 8, 8, 20);
    auto m = match_pairs(inst.components, inst.versions, &inst.tree);
    std::int64_t depth = 0, dist = 0;
    for (const auto& p : m) {
      if (!p.version) continue;
      depth += static_cast<std::int64_t>(p.lca_depth);
      dist += static_cast<std::int64_t>(p.token_distance);
    }
    std::size_t n = inst.components.size(), k = inst.versions.size();
    std::vector<std::vector<std::int64_t>> w(n, std::vector<std::int64_t>(k)), d = w;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        auto ch = *testing::naive_head(inst.tree, inst.components[i].chars);
        auto vh = *testing::naive_head(inst.tree, inst.versions[j].chars);
        w[i][j] = static_cast<std::int64_t>(testing::naive_lca_depth(inst.tree, ch, vh));
        d[i][j] = static_cast<std::int64_t>(token_distance(inst.components[i], inst.versions[j]));
      }
    }
    auto best = brute_pair(w, d);
    EXPECT_EQ(depth, best.first) << "round " << round;
    EXPECT_EQ(-dist, best.second) << "round " << round;
  }
}

TEST(Matcher, ExtractedComponentsKeepVersionlessHardware) {
  auto rec = recognize(Paragraph{1, 0, "TensorFlow 2.4 does not support Apple M1 natively."}, default_lexicon());
  auto comps = extracted_components(match_paragraph(rec, nullptr));
  ASSERT_EQ(comps.size(), 2u);
  EXPECT_EQ(comps[0].str(), "apple m1");
  EXPECT_EQ(comps[1].str(), "tensorflow 2.4");
}

}  // namespace
}  // namespace decide
