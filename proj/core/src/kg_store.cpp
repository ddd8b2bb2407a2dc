#include <cmath>
#include <fstream>

#include "decide/error.hpp"
#include "decide/kg_builder.hpp"
#include "json.hpp"
#include "text.hpp"

namespace decide {

namespace {

constexpr const char* kModule = "kg-builder";

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

FormatError bad(const std::string& what) { return FormatError(kModule, "knowledge graph file: " + what); }

template <typename T>
T field(const json& obj, const char* name, const std::string& where) {
  if (!obj.is_object() || !obj.contains(name)) throw bad(where + " lacks \"" + name + "\"");
  try {
    return obj.at(name).get<T>();
  } catch (const json::exception&) {
    throw bad(where + " has a malformed \"" + name + "\"");
  }
}

}  // namespace

std::string serialize_kg(const KnowledgeGraph& kg) {
  ordered_json doc;
  doc["schema_version"] = kKnowledgeGraphSchemaVersion;

  auto components = ordered_json::array();
  for (const auto& [name, layer] : kg.components()) {
    components.push_back(ordered_json{{"name", name}, {"layer", to_string(layer)}});
  }
  doc["components"] = std::move(components);

  std::map<VersionedComponent, std::size_t> ids;
  auto nodes = ordered_json::array();
  for (const auto& [node, _] : kg.nodes()) {
    auto id = ids.size();
    ids.emplace(node, id);
    ordered_json n{{"id", id}, {"name", node.name}};
    n["version"] = node.version ? ordered_json(node.version->str()) : ordered_json(nullptr);
    nodes.push_back(std::move(n));
  }
  doc["nodes"] = std::move(nodes);

  auto edges = ordered_json::array();
  for (const auto& [key, e] : kg.edges()) {
    auto evidence = ordered_json::array();
    for (const auto& ref : e.evidence) {
      evidence.push_back(ordered_json{{"post_id", ref.post_id}, {"relation", to_string(ref.relation)}, {"loss", ref.loss}});
    }
    edges.push_back(ordered_json{{"a", ids.at(e.a)},
                                 {"b", ids.at(e.b)},
                                 {"relation", to_string(e.relation())},
                                 {"conf", e.conf},
                                 {"compatible_count", e.compatible_count},
                                 {"incompatible_count", e.incompatible_count},
                                 {"evidence", std::move(evidence)}});
  }
  doc["edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

KnowledgeGraph deserialize_kg(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw bad(std::string("not JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("schema_version")) throw bad("missing schema_version");
  if (!doc["schema_version"].is_number_integer() || doc["schema_version"].get<int>() != kKnowledgeGraphSchemaVersion) {
    throw SchemaError(kModule, "knowledge graph schema_version: expected " + std::to_string(kKnowledgeGraphSchemaVersion) +
                                   ", found " + doc["schema_version"].dump());
  }

  KnowledgeGraph kg;
  try {
    for (const auto& c : field<json>(doc, "components", "document")) {
      kg.add_component(field<std::string>(c, "name", "component"),
                       parse_stack_layer(field<std::string>(c, "layer", "component")));
    }

    std::map<std::int64_t, VersionedComponent> by_id;
    for (const auto& n : field<json>(doc, "nodes", "document")) {
      auto id = field<std::int64_t>(n, "id", "node");
      VersionedComponent node{field<std::string>(n, "name", "node " + std::to_string(id)), std::nullopt};
      if (!n.contains("version")) throw bad("node " + std::to_string(id) + " lacks \"version\"");
      if (!n["version"].is_null()) node.version = parse_version(field<std::string>(n, "version", "node"));
      if (!by_id.emplace(id, node).second) throw bad("duplicate node id " + std::to_string(id));
      kg.add_node(node);
    }

    for (const auto& e : field<json>(doc, "edges", "document")) {
      auto node = [&](const char* end) {
        auto id = field<std::int64_t>(e, end, "edge");
        auto it = by_id.find(id);
        if (it == by_id.end()) throw bad("edge refers to unknown node " + std::to_string(id));
        return it->second;
      };
      KGEdge edge;
      edge.a = node("a");
      edge.b = node("b");
      auto where = "edge (" + edge.a.str() + ", " + edge.b.str() + ")";
      edge.conf = field<double>(e, "conf", where);
      edge.compatible_count = field<std::int64_t>(e, "compatible_count", where);
      edge.incompatible_count = field<std::int64_t>(e, "incompatible_count", where);
      for (const auto& ref : field<json>(e, "evidence", where)) {
        edge.evidence.push_back(EvidenceRef{field<std::int64_t>(ref, "post_id", where + " evidence"),
                                            parse_relation(field<std::string>(ref, "relation", where + " evidence")),
                                            field<double>(ref, "loss", where + " evidence")});
      }
      if (edge.evidence.empty()) throw bad(where + " has no evidence");
      auto relation = parse_relation(field<std::string>(e, "relation", where));
      if (relation != edge.relation()) throw bad(where + " relation disagrees with the sign of conf");
      kg.put_edge(std::move(edge));
    }
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw bad(e.what());
  }
  return kg;
}

void save_kg(const KnowledgeGraph& kg, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(kModule, "cannot write " + path.string());
  out << serialize_kg(kg);
  if (!out.flush()) throw IoError(kModule, "failed writing " + path.string());
}

KnowledgeGraph load_kg(const std::filesystem::path& path) {
  return deserialize_kg(text::read_file(path.string(), kModule));
}

}  // namespace decide
