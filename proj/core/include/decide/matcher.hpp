#pragma once

#include <optional>
#include <string>
#include <vector>

#include "decide/dep_tree.hpp"
#include "decide/model.hpp"
#include "decide/recognizer.hpp"

namespace decide {

enum class MatchMode { Tree, Distance };

std::string to_string(MatchMode mode);

struct MatchedPair {
  ComponentMention component;
  std::optional<VersionMention> version;
  /// LCA depth of the two head words; 0 in distance mode or when unmatched.
  std::size_t lca_depth = 0;
  /// Token distance between the mentions; 0 when unmatched.
  std::size_t token_distance = 0;
  MatchMode mode = MatchMode::Distance;
};

/// Tokens between two mentions (0 when they overlap, as in "cuda-8").
std::size_t token_distance(const ComponentMention& c, const VersionMention& v);

/// Tree word that heads a mention: the overlapping word closest to the root.
/// nullopt when the tree has no char spans or none overlaps.
std::optional<std::size_t> mention_head(const DepTree& tree, const Span& chars);

/// One-to-one assignment of versions to components within one sentence.
/// Every component appears once in the result, in input order. With a tree
/// the objective is total LCA depth; without one it is minus the total token
/// distance. Assignments always have min(#components, #versions) pairs. Ties
/// go to the smaller total token distance, then to the assignment that is
/// lexicographically smallest when read left to right over components.
std::vector<MatchedPair> match_pairs(const std::vector<ComponentMention>& components,
                                     const std::vector<VersionMention>& versions,
                                     const DepTree* tree = nullptr);

/// Runs match_pairs per sentence of a recognized paragraph. Mentions inside
/// an aligned tree use it; the rest are grouped by tokenizer sentence and
/// matched by distance. `trees` may be null.
std::vector<MatchedPair> match_paragraph(const Recognition& recognition, const std::vector<DepTree>* trees);

/// Components carried into relation extraction: versioned matches plus
/// versionless hardware; sorted and deduplicated.
std::vector<VersionedComponent> extracted_components(const std::vector<MatchedPair>& matches);

}  // namespace decide
