#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "decide/model.hpp"

namespace decide {

/// One post's contribution to an edge.
struct EvidenceRef {
  std::int64_t post_id = 0;
  Relation relation = Relation::Compatible;
  double loss = 0.0;

  friend bool operator==(const EvidenceRef&, const EvidenceRef&) = default;
  friend auto operator<=>(const EvidenceRef&, const EvidenceRef&) = default;
};

/// Undirected weighted (in)compatibility relation. `a < b` in key order.
struct KGEdge {
  VersionedComponent a;
  VersionedComponent b;
  std::int64_t compatible_count = 0;
  std::int64_t incompatible_count = 0;
  /// Signed confidence in [-1, 1], never 0. Positive means compatible.
  double conf = 0.0;
  /// Sorted ascending.
  std::vector<EvidenceRef> evidence;

  Relation relation() const { return conf > 0 ? Relation::Compatible : Relation::Incompatible; }
  /// Distinct post ids in ascending order.
  std::vector<std::int64_t> evidence_posts() const;

  friend bool operator==(const KGEdge&, const KGEdge&) = default;
};

/// Confidence weight from relation counts: (compatible - incompatible) / total.
double confidence_weight(std::int64_t compatible, std::int64_t incompatible);

/// Nodes are versioned components; edges are keyed by the unordered node pair.
/// Both containers iterate in canonical key order regardless of insertion order.
class KnowledgeGraph {
 public:
  using EdgeKey = std::pair<VersionedComponent, VersionedComponent>;

  /// Registers a component's layer. Conflicting re-registration throws.
  void add_component(const std::string& name, StackLayer layer);

  /// Idempotent. Throws ContractViolation for a versionless non-hardware node
  /// or an unregistered component.
  void add_node(const VersionedComponent& node);

  /// Inserts or replaces the edge between `edge.a` and `edge.b` (any order;
  /// normalized so a < b). Both endpoints must already be nodes and conf
  /// must be non-zero and within [-1, 1].
  void put_edge(KGEdge edge);

  bool has_node(const VersionedComponent& node) const { return nodes_.contains(node); }
  const KGEdge* find_edge(const VersionedComponent& x, const VersionedComponent& y) const;

  /// Nodes of one component in key order.
  std::vector<VersionedComponent> nodes_of(const std::string& name) const;

  /// Edges touching `node`.
  std::vector<const KGEdge*> edges_of(const VersionedComponent& node) const;

  const std::map<std::string, StackLayer>& components() const { return components_; }
  /// Node -> neighbouring nodes.
  const std::map<VersionedComponent, std::set<VersionedComponent>>& nodes() const { return nodes_; }
  const std::map<EdgeKey, KGEdge>& edges() const { return edges_; }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  friend bool operator==(const KnowledgeGraph&, const KnowledgeGraph&) = default;

 private:
  static EdgeKey make_key(const VersionedComponent& x, const VersionedComponent& y);

  std::map<std::string, StackLayer> components_;
  std::map<VersionedComponent, std::set<VersionedComponent>> nodes_;
  std::map<EdgeKey, KGEdge> edges_;
};

}  // namespace decide
