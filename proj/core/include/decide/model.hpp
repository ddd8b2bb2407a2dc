#pragma once

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "decide/version.hpp"

namespace decide {

/// The five layers of a deep-learning stack.
enum class StackLayer { Library, Runtime, Driver, OsContainer, Hardware };

std::string_view to_string(StackLayer layer);
/// Accepts `library`, `runtime`, `driver`, `os_container`, `hardware`.
StackLayer parse_stack_layer(std::string_view text);

/// Unknown is never stored; it is the absence of an edge.
enum class Relation { Compatible, Incompatible };

std::string_view to_string(Relation relation);
Relation parse_relation(std::string_view text);

struct ComponentSpec {
  std::string canonical_name;
  std::set<std::string> aliases;
  StackLayer layer = StackLayer::Library;
};

/// A component name paired with an optional version. Only hardware
/// components may be versionless; the knowledge graph enforces that.
struct VersionedComponent {
  std::string name;
  std::optional<Version> version;

  /// `name version`, or the bare name when versionless.
  std::string str() const;

  friend bool operator==(const VersionedComponent&, const VersionedComponent&) = default;
};

/// Canonical key order: name, versionless first, then key_order on versions.
std::strong_ordering operator<=>(const VersionedComponent& a, const VersionedComponent& b);

/// Parses "tensorflow 1.15" / "apple m1": the last whitespace-separated word
/// is taken as the version when it parses as one.
VersionedComponent parse_versioned_component(std::string_view text);

}  // namespace decide
