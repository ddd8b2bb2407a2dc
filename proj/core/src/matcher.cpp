#include "decide/matcher.hpp"

#include <algorithm>
#include <climits>
#include <cstdint>
#include <map>
#include <set>

#include "assignment.hpp"

namespace decide {

namespace {

constexpr std::size_t kExhaustiveLimit = 6;

struct Problem {
  std::size_t n = 0;  // components
  std::size_t m = 0;  // versions
  std::vector<std::vector<std::int64_t>> weight;
  std::vector<std::vector<std::size_t>> distance;
};

// Score of a complete assignment; larger is better.
struct Score {
  std::int64_t weight = 0;
  std::size_t distance = 0;
  std::vector<int> key;  // per component: version index or INT_MAX

  bool better_than(const Score& o) const {
    if (weight != o.weight) return weight > o.weight;
    if (distance != o.distance) return distance < o.distance;
    return key < o.key;
  }
};

Score score_of(const Problem& pb, const std::vector<int>& assign) {
  Score s;
  s.key.resize(pb.n);
  for (std::size_t i = 0; i < pb.n; ++i) {
    if (assign[i] < 0) {
      s.key[i] = INT_MAX;
      continue;
    }
    s.key[i] = assign[i];
    s.weight += pb.weight[i][assign[i]];
    s.distance += pb.distance[i][assign[i]];
  }
  return s;
}

void search(const Problem& pb, std::size_t i, std::size_t matched, std::vector<bool>& used, std::vector<int>& cur,
            std::optional<Score>& best, std::vector<int>& best_assign) {
  const std::size_t target = std::min(pb.n, pb.m);
  if (i == pb.n) {
    if (matched != target) return;
    auto s = score_of(pb, cur);
    if (!best || s.better_than(*best)) {
      best = std::move(s);
      best_assign = cur;
    }
    return;
  }
  // Remaining components must still be able to reach the target.
  if (matched + (pb.n - i) < target) return;
  for (std::size_t j = 0; j < pb.m; ++j) {
    if (used[j]) continue;
    used[j] = true;
    cur[i] = static_cast<int>(j);
    search(pb, i + 1, matched + 1, used, cur, best, best_assign);
    used[j] = false;
  }
  cur[i] = -1;
  search(pb, i + 1, matched, used, cur, best, best_assign);
}

std::vector<int> solve(const Problem& pb) {
  if (pb.n <= kExhaustiveLimit && pb.m <= kExhaustiveLimit) {
    std::vector<bool> used(pb.m, false);
    std::vector<int> cur(pb.n, -1), best_assign(pb.n, -1);
    std::optional<Score> best;
    search(pb, 0, 0, used, cur, best, best_assign);
    return best_assign;
  }
  // Fold the distance tie-break into a single scalar.
  std::size_t max_d = 0;
  for (const auto& row : pb.distance) {
    for (auto d : row) max_d = std::max(max_d, d);
  }
  const auto scale = static_cast<std::int64_t>(max_d * std::min(pb.n, pb.m) + 1);
  std::vector<std::vector<std::int64_t>> w(pb.n, std::vector<std::int64_t>(pb.m));
  for (std::size_t i = 0; i < pb.n; ++i) {
    for (std::size_t j = 0; j < pb.m; ++j) {
      w[i][j] = pb.weight[i][j] * scale - static_cast<std::int64_t>(pb.distance[i][j]);
    }
  }
  return detail::max_weight_assignment(w);
}

bool contains(const Span& outer, std::size_t pos) { return pos >= outer.begin && pos < outer.end; }

}  // namespace

std::string to_string(MatchMode mode) { return mode == MatchMode::Tree ? "tree" : "distance"; }

std::size_t token_distance(const ComponentMention& c, const VersionMention& v) {
  if (v.tokens.begin >= c.tokens.end) return v.tokens.begin - (c.tokens.end - 1);
  if (c.tokens.begin >= v.tokens.end) return c.tokens.begin - (v.tokens.end - 1);
  return 0;
}

std::optional<std::size_t> mention_head(const DepTree& tree, const Span& chars) {
  const auto& spans = tree.char_spans();
  std::optional<std::size_t> best;
  for (std::size_t w = 0; w < spans.size(); ++w) {
    bool overlaps = spans[w].begin < chars.end && chars.begin < spans[w].end;
    if (overlaps && (!best || tree.depth(w) < tree.depth(*best))) best = w;
  }
  return best;
}

std::vector<MatchedPair> match_pairs(const std::vector<ComponentMention>& components,
                                     const std::vector<VersionMention>& versions, const DepTree* tree) {
  Problem pb;
  pb.n = components.size();
  pb.m = versions.size();
  pb.weight.assign(pb.n, std::vector<std::int64_t>(pb.m, 0));
  pb.distance.assign(pb.n, std::vector<std::size_t>(pb.m, 0));

  std::vector<std::optional<std::size_t>> c_head(pb.n), v_head(pb.m);
  bool use_tree = tree != nullptr;
  if (use_tree) {
    for (std::size_t i = 0; i < pb.n && use_tree; ++i) use_tree = (c_head[i] = mention_head(*tree, components[i].chars)).has_value();
    for (std::size_t j = 0; j < pb.m && use_tree; ++j) use_tree = (v_head[j] = mention_head(*tree, versions[j].chars)).has_value();
  }

  std::vector<std::vector<std::size_t>> lca(pb.n, std::vector<std::size_t>(pb.m, 0));
  for (std::size_t i = 0; i < pb.n; ++i) {
    for (std::size_t j = 0; j < pb.m; ++j) {
      pb.distance[i][j] = token_distance(components[i], versions[j]);
      if (use_tree) {
        lca[i][j] = lca_depth(*tree, *c_head[i], *v_head[j]);
        pb.weight[i][j] = static_cast<std::int64_t>(lca[i][j]);
      } else {
        pb.weight[i][j] = -static_cast<std::int64_t>(pb.distance[i][j]);
      }
    }
  }

  auto assign = solve(pb);
  std::vector<MatchedPair> out;
  out.reserve(pb.n);
  for (std::size_t i = 0; i < pb.n; ++i) {
    MatchedPair mp;
    mp.component = components[i];
    mp.mode = use_tree ? MatchMode::Tree : MatchMode::Distance;
    if (assign[i] >= 0) {
      auto j = static_cast<std::size_t>(assign[i]);
      mp.version = versions[j];
      mp.lca_depth = lca[i][j];
      mp.token_distance = pb.distance[i][j];
    }
    out.push_back(std::move(mp));
  }
  return out;
}

std::vector<MatchedPair> match_paragraph(const Recognition& rec, const std::vector<DepTree>* trees) {
  // Group key: tree index, or trees->size() + tokenizer sentence.
  const std::size_t tree_count = trees ? trees->size() : 0;
  auto group_of = [&](const Span& chars, const Span& tokens) -> std::size_t {
    for (std::size_t t = 0; t < tree_count; ++t) {
      const auto& spans = (*trees)[t].char_spans();
      if (spans.empty()) continue;
      if (contains(Span{spans.front().begin, spans.back().end}, chars.begin)) return t;
    }
    return tree_count + rec.tokens.at(tokens.begin).sentence;
  };

  std::map<std::size_t, std::pair<std::vector<ComponentMention>, std::vector<VersionMention>>> groups;
  for (const auto& c : rec.components) groups[group_of(c.chars, c.tokens)].first.push_back(c);
  for (const auto& v : rec.versions) groups[group_of(v.chars, v.tokens)].second.push_back(v);

  std::vector<MatchedPair> out;
  for (const auto& [key, group] : groups) {
    const DepTree* tree = key < tree_count ? &(*trees)[key] : nullptr;
    auto part = match_pairs(group.first, group.second, tree);
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const MatchedPair& a, const MatchedPair& b) { return a.component.chars.begin < b.component.chars.begin; });
  return out;
}

std::vector<VersionedComponent> extracted_components(const std::vector<MatchedPair>& matches) {
  std::set<VersionedComponent> out;
  for (const auto& m : matches) {
    if (m.version) {
      out.insert(VersionedComponent{m.component.component, m.version->version});
    } else if (m.component.layer == StackLayer::Hardware) {
      out.insert(VersionedComponent{m.component.component, std::nullopt});
    }
  }
  return {out.begin(), out.end()};
}

}  // namespace decide
