#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "decide/model.hpp"

namespace decide {

/// How to read a component's installed version from a system command.
/// `pattern` is an ECMAScript regex; its first capture group is the version.
/// A pattern without a group only signals presence (hardware components).
struct ProbeSpec {
  std::string command;
  std::vector<std::string> args;
  std::string pattern;
};

struct LexiconEntry {
  ComponentSpec spec;
  std::vector<ProbeSpec> probes;
};

/// Known stack components with case-insensitive name/alias lookup.
class Lexicon {
 public:
  Lexicon() = default;
  /// Throws ConfigError when names collide or an entry is malformed.
  explicit Lexicon(std::vector<LexiconEntry> entries);

  /// Canonical spec for a name or alias, any case.
  const ComponentSpec* find(std::string_view name) const;
  const LexiconEntry* entry(std::string_view canonical) const;

  /// Layer of a canonical name; Library for names the lexicon does not know.
  StackLayer layer_of(std::string_view canonical) const;

  const std::vector<LexiconEntry>& entries() const { return entries_; }

  /// Every surface form (canonical names and aliases, lowercase) with the
  /// index of the entry it resolves to.
  const std::unordered_map<std::string, std::size_t>& surface_forms() const { return lookup_; }

  /// Longest surface form measured in tokens.
  std::size_t max_surface_tokens() const { return max_surface_tokens_; }

 private:
  std::vector<LexiconEntry> entries_;
  std::unordered_map<std::string, std::size_t> lookup_;
  std::size_t max_surface_tokens_ = 1;
};

/// Reads the `components.json` format: [{canonical, aliases[], layer, probes?}].
Lexicon parse_lexicon(std::string_view json_text);
Lexicon load_lexicon(const std::filesystem::path& path);
const Lexicon& default_lexicon();

}  // namespace decide
