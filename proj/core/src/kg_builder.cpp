#include "decide/kg_builder.hpp"

#include <algorithm>
#include <tuple>

#include "decide/error.hpp"

namespace decide {

namespace {

constexpr const char* kModule = "kg-builder";

using PairKey = std::pair<VersionedComponent, VersionedComponent>;

// Deterministic preference among evidence for the same post and pair.
bool preferred(const Evidence& x, const Evidence& y) {
  return std::tie(x.loss, x.template_used, x.relation) < std::tie(y.loss, y.template_used, y.relation);
}

}  // namespace

ConsolidationStrategy parse_consolidation_strategy(std::string_view name) {
  if (name == "majority") return ConsolidationStrategy::MajorityVote;
  if (name == "weighted") return ConsolidationStrategy::WeightedMajorityVote;
  if (name == "loss") return ConsolidationStrategy::VoteByLoss;
  throw ConfigError(kModule, "unknown consolidation strategy '" + std::string(name) + "' (majority|weighted|loss)");
}

std::string_view to_string(ConsolidationStrategy strategy) {
  switch (strategy) {
    case ConsolidationStrategy::MajorityVote: return "majority";
    case ConsolidationStrategy::WeightedMajorityVote: return "weighted";
    case ConsolidationStrategy::VoteByLoss: return "loss";
  }
  return "majority";
}

Consolidation consolidate(const std::vector<Evidence>& evidence, const std::map<std::int64_t, std::int64_t>& post_scores,
                          ConsolidationStrategy strategy, const Lexicon& lexicon) {
  Consolidation out;

  // pair -> post -> evidence
  std::map<PairKey, std::map<std::int64_t, Evidence>> by_pair;
  for (const auto& e : evidence) {
    PairKey key = e.a < e.b ? PairKey{e.a, e.b} : PairKey{e.b, e.a};
    auto& slot = by_pair[key];
    auto [it, inserted] = slot.emplace(e.post_id, e);
    if (!inserted) {
      ++out.discarded;
      if (preferred(e, it->second)) it->second = e;
    }
  }

  auto& kg = out.graph;
  for (const auto& [key, posts] : by_pair) {
    for (const auto* node : {&key.first, &key.second}) {
      kg.add_component(node->name, lexicon.layer_of(node->name));
      kg.add_node(*node);
    }

    KGEdge edge;
    edge.a = key.first;
    edge.b = key.second;
    double weight_compat = 0, weight_incompat = 0;
    const Evidence* lowest = nullptr;
    for (const auto& [post, e] : posts) {
      double w = 1.0;
      if (strategy == ConsolidationStrategy::WeightedMajorityVote) {
        auto it = post_scores.find(post);
        w = static_cast<double>(std::max<std::int64_t>(it == post_scores.end() ? 1 : it->second, 1));
      }
      if (e.relation == Relation::Compatible) {
        ++edge.compatible_count;
        weight_compat += w;
      } else {
        ++edge.incompatible_count;
        weight_incompat += w;
      }
      if (!lowest || e.loss < lowest->loss ||
          (e.loss == lowest->loss && std::tie(e.post_id, e.relation) < std::tie(lowest->post_id, lowest->relation))) {
        lowest = &e;
      }
      edge.evidence.push_back(EvidenceRef{post, e.relation, e.loss});
    }

    switch (strategy) {
      case ConsolidationStrategy::MajorityVote:
        edge.conf = confidence_weight(edge.compatible_count, edge.incompatible_count);
        break;
      case ConsolidationStrategy::WeightedMajorityVote:
        edge.conf = (weight_compat - weight_incompat) / (weight_compat + weight_incompat);
        break;
      case ConsolidationStrategy::VoteByLoss:
        edge.conf = lowest->relation == Relation::Compatible ? 1.0 : -1.0;
        break;
    }
    if (edge.conf == 0.0) {
      out.discarded += posts.size();
      continue;
    }
    kg.put_edge(std::move(edge));
  }
  return out;
}

std::optional<RelationFinding> relation_between(const KnowledgeGraph& kg, const VersionedComponent& a,
                                                const VersionedComponent& b) {
  // Candidate nodes per side: the exact node, then wildcard nodes it
  // instantiates, longest prefix first.
  auto candidates = [&](const VersionedComponent& q) {
    std::vector<VersionedComponent> out;
    if (kg.has_node(q)) out.push_back(q);
    if (!q.version || q.version->wildcard) return out;
    std::vector<VersionedComponent> wild;
    for (const auto& n : kg.nodes_of(q.name)) {
      if (n.version && n.version->wildcard && version_unifies(*q.version, *n.version)) wild.push_back(n);
    }
    std::stable_sort(wild.begin(), wild.end(), [](const auto& x, const auto& y) {
      return x.version->segments.size() > y.version->segments.size();
    });
    out.insert(out.end(), wild.begin(), wild.end());
    return out;
  };

  auto ca = candidates(a);
  auto cb = candidates(b);
  const KGEdge* best = nullptr;
  std::size_t best_rank = 0;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    for (std::size_t j = 0; j < cb.size(); ++j) {
      if (best && i + j >= best_rank) continue;
      if (const auto* e = kg.find_edge(ca[i], cb[j])) {
        best = e;
        best_rank = i + j;
      }
    }
  }
  if (!best) return std::nullopt;
  return RelationFinding{best->relation(), best->conf, best->evidence_posts(), best};
}

std::vector<Version> candidate_versions(const KnowledgeGraph& kg, const std::string& component) {
  std::vector<Version> out;
  for (const auto& n : kg.nodes_of(component)) {
    if (n.version) out.push_back(*n.version);
  }
  std::sort(out.begin(), out.end(), [](const Version& x, const Version& y) { return key_order(x, y) < 0; });
  return out;
}

}  // namespace decide
