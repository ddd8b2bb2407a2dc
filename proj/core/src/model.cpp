#include "decide/model.hpp"

#include "decide/error.hpp"
#include "text.hpp"

namespace decide {

std::string_view to_string(StackLayer layer) {
  switch (layer) {
    case StackLayer::Library: return "library";
    case StackLayer::Runtime: return "runtime";
    case StackLayer::Driver: return "driver";
    case StackLayer::OsContainer: return "os_container";
    case StackLayer::Hardware: return "hardware";
  }
  return "library";
}

StackLayer parse_stack_layer(std::string_view text) {
  auto t = text::to_lower(text::trim(text));
  if (t == "library") return StackLayer::Library;
  if (t == "runtime") return StackLayer::Runtime;
  if (t == "driver") return StackLayer::Driver;
  if (t == "os_container" || t == "os" || t == "os/container") return StackLayer::OsContainer;
  if (t == "hardware") return StackLayer::Hardware;
  throw ParseError("core-model", "unknown stack layer '" + std::string(text) + "'");
}

std::string_view to_string(Relation relation) {
  return relation == Relation::Compatible ? "compatible" : "incompatible";
}

Relation parse_relation(std::string_view text) {
  auto t = text::to_lower(text::trim(text));
  if (t == "compatible") return Relation::Compatible;
  if (t == "incompatible") return Relation::Incompatible;
  throw ParseError("core-model", "unknown relation '" + std::string(text) + "'");
}

std::string VersionedComponent::str() const {
  return version ? name + " " + version->str() : name;
}

std::strong_ordering operator<=>(const VersionedComponent& a, const VersionedComponent& b) {
  if (auto c = a.name <=> b.name; c != 0) return c;
  if (auto c = a.version.has_value() <=> b.version.has_value(); c != 0) return c;
  if (!a.version) return std::strong_ordering::equal;
  return key_order(*a.version, *b.version);
}

VersionedComponent parse_versioned_component(std::string_view text) {
  auto t = text::squeeze_spaces(text);
  VersionedComponent out;
  auto space = t.rfind(' ');
  if (space != std::string::npos) {
    if (auto v = try_parse_version(std::string_view(t).substr(space + 1))) {
      out.name = text::to_lower(t.substr(0, space));
      out.version = *v;
      return out;
    }
  }
  out.name = text::to_lower(t);
  return out;
}

}  // namespace decide
