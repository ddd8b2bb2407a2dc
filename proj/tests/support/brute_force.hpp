#pragma once

// Exhaustive reference implementations. They share no code with the
// production search beyond the data types, so agreement is meaningful.

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "decide/dep_tree.hpp"
#include "decide/detector.hpp"
#include "decide/matcher.hpp"

namespace decide::testing {

// Depth by walking head links; independent of DepTree::depth.
inline std::size_t walk_depth(const DepTree& tree, std::size_t i) {
  std::size_t d = 0;
  while (tree.token(i).head) {
    i = *tree.token(i).head;
    ++d;
  }
  return d;
}

inline std::size_t naive_lca_depth(const DepTree& tree, std::size_t i, std::size_t j) {
  std::set<std::size_t> ancestors;
  for (std::optional<std::size_t> k = i; k; k = tree.token(*k).head) ancestors.insert(*k);
  std::optional<std::size_t> k = j;
  while (!ancestors.contains(*k)) k = tree.token(*k).head;
  return walk_depth(tree, *k);
}

// Word heading a mention: overlapping word of minimal depth, leftmost on ties.
inline std::optional<std::size_t> naive_head(const DepTree& tree, const Span& chars) {
  std::optional<std::size_t> best;
  for (std::size_t w = 0; w < tree.size(); ++w) {
    const auto& s = tree.char_spans()[w];
    if (s.end <= chars.begin || chars.end <= s.begin) continue;
    if (!best || walk_depth(tree, w) < walk_depth(tree, *best)) best = w;
  }
  return best;
}

/// Maximum total LCA depth over every one-to-one (possibly partial)
/// assignment of versions to components.
inline std::size_t brute_max_lca(const DepTree& tree, const std::vector<ComponentMention>& components,
                                 const std::vector<VersionMention>& versions) {
  std::vector<std::size_t> ch, vh;
  for (const auto& c : components) ch.push_back(*naive_head(tree, c.chars));
  for (const auto& v : versions) vh.push_back(*naive_head(tree, v.chars));
  std::vector<bool> used(versions.size(), false);
  std::size_t best = 0;
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t total) {
    if (i == components.size()) {
      best = std::max(best, total);
      return;
    }
    go(i + 1, total);
    for (std::size_t j = 0; j < versions.size(); ++j) {
      if (used[j]) continue;
      used[j] = true;
      go(i + 1, total + naive_lca_depth(tree, ch[i], vh[j]));
      used[j] = false;
    }
  };
  go(0, 0);
  return best;
}

/// Satisfiability by enumerating every combination of candidate values.
///
/// Candidates per entry: the graph's concrete versions inside the
/// constraint (or the pin / "any version" when the graph knows none), plus
/// the installed version when it lies inside the constraint. A combination
/// is accepted when no two chosen versions, and no chosen version and
/// installed non-required component, share an Incompatible edge, and an
/// installed in-range version is only replaced when something chosen
/// earlier, or installed, rules it out.
inline bool brute_satisfiable(const std::vector<RequiredEntry>& entries, const EnvSnapshot& local,
                              const KnowledgeGraph& kg) {
  std::set<std::string> names;
  for (const auto& e : entries) names.insert(e.component);
  std::vector<VersionedComponent> others;
  for (const auto& c : local.components) {
    if (!names.contains(c.component.name)) others.push_back(c.component);
  }
  auto clash = [&](const VersionedComponent& x, const VersionedComponent& y) {
    const auto* e = kg.find_edge(x, y);
    return e && e->conf < 0;
  };

  // nullopt candidate = "any version", which clashes with nothing.
  using Candidate = std::optional<VersionedComponent>;
  std::vector<std::vector<Candidate>> candidates;
  std::vector<std::optional<VersionedComponent>> keep;  // installed and in range
  for (const auto& e : entries) {
    std::vector<Candidate> cands;
    if (e.constraint.empty) return false;
    const auto* inst = local.find(e.component);
    bool installed_in_range = false;
    if (inst) {
      const auto& v = inst->component.version;
      installed_in_range = !v || version_satisfies(*v, e.constraint);
      if (!installed_in_range && !v) return false;
    }
    std::vector<Version> known;
    for (const auto& node : kg.nodes_of(e.component)) {
      if (node.version && !node.version->wildcard && version_satisfies(*node.version, e.constraint)) {
        known.push_back(*node.version);
      }
    }
    if (installed_in_range) {
      cands.push_back(inst->component);
      keep.push_back(inst->component);
      if (inst->component.version) {
        const auto& iv = *inst->component.version;
        for (const auto& v : known) {
          if (compare_versions(v, iv) != 0) cands.push_back(VersionedComponent{e.component, v});
        }
        if (known.empty()) {
          if (!e.constraint.is_point()) cands.push_back(std::nullopt);
          else if (compare_versions(e.constraint.lower->version, iv) != 0)
            cands.push_back(VersionedComponent{e.component, e.constraint.lower->version});
        }
      }
    } else {
      keep.push_back(std::nullopt);
      for (const auto& v : known) cands.push_back(VersionedComponent{e.component, v});
      if (known.empty()) {
        if (e.constraint.is_point()) cands.push_back(VersionedComponent{e.component, e.constraint.lower->version});
        else cands.push_back(std::nullopt);
      }
    }
    candidates.push_back(std::move(cands));
  }

  std::vector<Candidate> chosen(entries.size());
  std::function<bool(std::size_t)> go = [&](std::size_t i) {
    if (i == entries.size()) return true;
    for (const auto& c : candidates[i]) {
      bool ok = true;
      if (c) {
        for (std::size_t j = 0; j < i && ok; ++j) ok = !(chosen[j] && clash(*c, *chosen[j]));
        for (const auto& o : others) ok = ok && !clash(*c, o);
      }
      if (ok && keep[i] && c != keep[i]) {
        bool ruled_out = false;
        for (std::size_t j = 0; j < i; ++j) ruled_out = ruled_out || (chosen[j] && clash(*keep[i], *chosen[j]));
        for (const auto& o : others) ruled_out = ruled_out || clash(*keep[i], o);
        ok = ruled_out;
      }
      if (!ok) continue;
      chosen[i] = c;
      if (go(i + 1)) return true;
    }
    return false;
  };
  return go(0);
}

}  // namespace decide::testing
