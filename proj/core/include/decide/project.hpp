#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "decide/lexicon.hpp"
#include "decide/version.hpp"

namespace decide {

enum class RequirementOrigin { RequirementsFile, ImportScan, Implicit };

std::string_view to_string(RequirementOrigin origin);

struct RequiredEntry {
  /// Canonical lexicon name after build_required_stack; before that the
  /// normalized package name (lowercase, '_' -> '-').
  std::string component;
  VersionConstraint constraint;
  RequirementOrigin origin = RequirementOrigin::RequirementsFile;

  friend bool operator==(const RequiredEntry&, const RequiredEntry&) = default;
};

struct ParsedRequirements {
  std::vector<RequiredEntry> entries;
  std::vector<std::string> warnings;
};

/// requirements.txt reader. Comments, extras and environment markers are
/// stripped; option lines (-r, -e, --index-url, ...) are skipped with a
/// warning. Specifiers ==, ===, >=, >, <=, <, ~= and ==X.Y.* map to ranges
/// and comma-joined ones are intersected; != is ignored with a warning.
/// Local ("+cu101") and pre/post-release suffixes are dropped with a warning.
/// Unparseable lines are skipped with a warning, never fatal.
ParsedRequirements parse_requirements(std::string_view text);

/// Root package names imported by one Python source (relative imports
/// excluded, nothing else filtered).
std::set<std::string> imports_in_source(std::string_view source);

struct ImportScan {
  std::set<std::string> packages;
  std::vector<std::string> warnings;
};

/// Walks `root` for .py files and collects imported root packages, dropping
/// standard-library modules and modules that live in the tree itself.
/// Hidden directories, __pycache__ and virtualenvs are not descended into.
ImportScan scan_imports(const std::filesystem::path& root);

struct RequiredStack {
  std::vector<RequiredEntry> entries;

  const RequiredEntry* find(std::string_view component) const;
};

/// File entries first (in file order; repeated components intersected), then
/// imported packages not already listed, alphabetically, with unbounded
/// constraints. Names are canonicalized through the lexicon when known.
RequiredStack build_required_stack(const std::vector<RequiredEntry>& requirements, const std::set<std::string>& imports,
                                   const Lexicon& lexicon);

}  // namespace decide
