#include "decide/knowledge_graph.hpp"

#include <algorithm>
#include <cmath>

#include "decide/error.hpp"

namespace decide {

namespace {
constexpr const char* kModule = "core-model";
}

std::vector<std::int64_t> KGEdge::evidence_posts() const {
  std::vector<std::int64_t> ids;
  ids.reserve(evidence.size());
  for (const auto& e : evidence) ids.push_back(e.post_id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

double confidence_weight(std::int64_t compatible, std::int64_t incompatible) {
  auto total = compatible + incompatible;
  if (total <= 0) throw ContractViolation(kModule, "confidence weight needs at least one observation");
  return static_cast<double>(compatible - incompatible) / static_cast<double>(total);
}

void KnowledgeGraph::add_component(const std::string& name, StackLayer layer) {
  auto [it, inserted] = components_.emplace(name, layer);
  if (!inserted && it->second != layer)
    throw ContractViolation(kModule, "component '" + name + "' registered with two layers");
}

void KnowledgeGraph::add_node(const VersionedComponent& node) {
  auto it = components_.find(node.name);
  if (it == components_.end())
    throw ContractViolation(kModule, "node for unregistered component '" + node.name + "'");
  if (!node.version && it->second != StackLayer::Hardware)
    throw ContractViolation(kModule, "only hardware components may be versionless: '" + node.name + "'");
  nodes_.try_emplace(node);
}

KnowledgeGraph::EdgeKey KnowledgeGraph::make_key(const VersionedComponent& x, const VersionedComponent& y) {
  return x < y ? EdgeKey{x, y} : EdgeKey{y, x};
}

void KnowledgeGraph::put_edge(KGEdge edge) {
  if (edge.a == edge.b) throw ContractViolation(kModule, "self-loop on '" + edge.a.str() + "'");
  if (!has_node(edge.a) || !has_node(edge.b))
    throw ContractViolation(kModule, "edge endpoint missing: " + edge.a.str() + " / " + edge.b.str());
  if (!(edge.conf != 0.0 && std::abs(edge.conf) <= 1.0))
    throw ContractViolation(kModule, "edge confidence must be non-zero and within [-1, 1]");
  if (edge.compatible_count < 0 || edge.incompatible_count < 0 ||
      edge.compatible_count + edge.incompatible_count < 1)
    throw ContractViolation(kModule, "edge needs at least one observation");

  if (edge.b < edge.a) std::swap(edge.a, edge.b);
  std::sort(edge.evidence.begin(), edge.evidence.end());
  nodes_[edge.a].insert(edge.b);
  nodes_[edge.b].insert(edge.a);
  auto key = EdgeKey{edge.a, edge.b};
  edges_.insert_or_assign(std::move(key), std::move(edge));
}

const KGEdge* KnowledgeGraph::find_edge(const VersionedComponent& x, const VersionedComponent& y) const {
  auto it = edges_.find(make_key(x, y));
  return it == edges_.end() ? nullptr : &it->second;
}

std::vector<VersionedComponent> KnowledgeGraph::nodes_of(const std::string& name) const {
  std::vector<VersionedComponent> out;
  for (auto it = nodes_.lower_bound(VersionedComponent{name, std::nullopt});
       it != nodes_.end() && it->first.name == name; ++it)
    out.push_back(it->first);
  return out;
}

std::vector<const KGEdge*> KnowledgeGraph::edges_of(const VersionedComponent& node) const {
  std::vector<const KGEdge*> out;
  auto it = nodes_.find(node);
  if (it == nodes_.end()) return out;
  for (const auto& other : it->second) out.push_back(find_edge(node, other));
  return out;
}

}  // namespace decide
