#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "decide/knowledge_graph.hpp"
#include "decide/lexicon.hpp"
#include "decide/qa.hpp"

namespace decide {

enum class ConsolidationStrategy { MajorityVote, WeightedMajorityVote, VoteByLoss };

/// "majority", "weighted" or "loss".
ConsolidationStrategy parse_consolidation_strategy(std::string_view name);
std::string_view to_string(ConsolidationStrategy strategy);

struct Consolidation {
  KnowledgeGraph graph;
  /// Duplicate (post, pair) evidence plus evidence of pairs whose votes
  /// cancel out. Stored evidence + discarded = input size.
  std::size_t discarded = 0;
};

/// Builds the graph from per-post evidence.
///  - MajorityVote: conf = (#compatible - #incompatible) / #posts.
///  - WeightedMajorityVote: the same with each post weighted by
///    max(score, 1); posts missing from `post_scores` weigh 1.
///  - VoteByLoss: the lowest-loss evidence decides, conf = +-1.
/// Pairs with conf 0 are dropped. Evidence repeated for the same post and
/// pair (the pair mentioned in two paragraphs) is kept once, the lowest-loss
/// copy winning. Result does not depend on the order of `evidence`.
Consolidation consolidate(const std::vector<Evidence>& evidence, const std::map<std::int64_t, std::int64_t>& post_scores,
                          ConsolidationStrategy strategy, const Lexicon& lexicon);

struct RelationFinding {
  Relation relation = Relation::Compatible;
  double conf = 0.0;
  std::vector<std::int64_t> evidence_posts;
  const KGEdge* edge = nullptr;
};

/// Edge between two versioned components: exact nodes first, otherwise
/// stored wildcard nodes ("1.x") that the query versions instantiate, the
/// most specific match winning. nullopt means unknown.
std::optional<RelationFinding> relation_between(const KnowledgeGraph& kg, const VersionedComponent& a,
                                                const VersionedComponent& b);

/// Distinct versions of a component's nodes, ascending; a wildcard sorts
/// right after the concrete versions it shares a prefix with.
std::vector<Version> candidate_versions(const KnowledgeGraph& kg, const std::string& component);

inline constexpr int kKnowledgeGraphSchemaVersion = 1;

/// Canonical JSON: identical graphs serialize to identical bytes.
std::string serialize_kg(const KnowledgeGraph& kg);
/// Throws SchemaError on a schema_version mismatch, FormatError otherwise.
KnowledgeGraph deserialize_kg(std::string_view json_text);

void save_kg(const KnowledgeGraph& kg, const std::filesystem::path& path);
KnowledgeGraph load_kg(const std::filesystem::path& path);

}  // namespace decide
