#include "decide/project.hpp"

#include <algorithm>
#include <regex>
#include <system_error>

#include "decide/config.hpp"
#include "decide/error.hpp"
#include "text.hpp"

namespace decide {

namespace {

namespace fs = std::filesystem;

std::string normalize_package(std::string_view name) {
  auto s = text::to_lower(name);
  std::replace(s.begin(), s.end(), '_', '-');
  return s;
}

Version bump_last(Version v) {
  v.wildcard = false;
  ++v.segments.back();
  return v;
}

// Numeric release part of a specifier version; dropped parts are noted in
// `warnings`.
std::optional<Version> release_version(std::string_view raw, const std::string& line,
                                       std::vector<std::string>& warnings) {
  auto loose = parse_loose_version(raw);
  if (!loose) return std::nullopt;
  if (!loose->suffix.empty()) {
    auto what = loose->suffix.front() == '+' ? "local version suffix" : "pre/post-release suffix";
    warnings.push_back("'" + line + "': " + what + " '" + loose->suffix + "' ignored");
  }
  if (loose->truncated) warnings.push_back("'" + line + "': version truncated to three segments");
  return loose->version;
}

std::optional<VersionConstraint> specifier_constraint(std::string_view spec, const std::string& line,
                                                      std::vector<std::string>& warnings) {
  static const std::regex kSpec(R"(^(===|~=|==|!=|>=|<=|>|<)\s*(\S+)$)");
  std::string s(text::trim(spec));
  std::smatch m;
  if (!std::regex_match(s, m, kSpec)) return std::nullopt;
  std::string op = m[1];
  std::string ver = m[2];

  if (op == "!=") {
    warnings.push_back("'" + line + "': exclusion '" + s + "' ignored");
    return VersionConstraint::unbounded();
  }
  if (op == "==" && ver.size() > 2 && ver.ends_with(".*")) {
    auto v = release_version(ver.substr(0, ver.size() - 2), line, warnings);
    if (!v) return std::nullopt;
    VersionConstraint c;
    c.lower = VersionBound{*v, true};
    c.upper = VersionBound{bump_last(*v), false};
    return c;
  }
  auto v = release_version(ver, line, warnings);
  if (!v) return std::nullopt;

  VersionConstraint c;
  if (op == "==" || op == "===") return VersionConstraint::exactly(*v);
  if (op == ">=") c.lower = VersionBound{*v, true};
  if (op == ">") c.lower = VersionBound{*v, false};
  if (op == "<=") c.upper = VersionBound{*v, true};
  if (op == "<") c.upper = VersionBound{*v, false};
  if (op == "~=") {
    if (v->segments.size() < 2) return std::nullopt;
    Version prefix = *v;
    prefix.segments.pop_back();
    c.lower = VersionBound{*v, true};
    c.upper = VersionBound{bump_last(prefix), false};
  }
  return c;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '_'; });
}

// Splits Python source into logical statements with strings and comments
// blanked out. Brackets and backslashes continue a statement; ';' ends one.
std::vector<std::string> logical_statements(std::string_view src) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  std::size_t i = 0;
  auto flush = [&] {
    auto t = text::trim(cur);
    if (!t.empty()) out.emplace_back(t);
    cur.clear();
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    if (c == '"' || c == '\'') {
      bool triple = i + 2 < src.size() && src[i + 1] == c && src[i + 2] == c;
      std::size_t j = i + (triple ? 3 : 1);
      while (j < src.size()) {
        if (src[j] == '\\') {
          j += 2;
          continue;
        }
        if (triple) {
          if (src[j] == c && j + 2 < src.size() && src[j + 1] == c && src[j + 2] == c) {
            j += 3;
            break;
          }
        } else if (src[j] == c || src[j] == '\n') {
          ++j;
          break;
        }
        ++j;
      }
      cur += "''";
      i = j;
      continue;
    }
    if (c == '\\' && i + 1 < src.size() && (src[i + 1] == '\n' || src[i + 1] == '\r')) {
      cur += ' ';
      i += src[i + 1] == '\r' && i + 2 < src.size() && src[i + 2] == '\n' ? 3 : 2;
      continue;
    }
    if (c == '(' || c == '[' || c == '{') ++depth;
    if ((c == ')' || c == ']' || c == '}') && depth > 0) --depth;
    if (c == '\n' || c == '\r') {
      if (depth > 0) {
        cur += ' ';
      } else {
        flush();
      }
      ++i;
      continue;
    }
    if (c == ';' && depth == 0) {
      flush();
      ++i;
      continue;
    }
    cur += c;
    ++i;
  }
  flush();
  return out;
}

std::string root_of(std::string_view dotted) { return std::string(dotted.substr(0, dotted.find('.'))); }

const std::set<std::string>& stdlib_modules() {
  static const std::set<std::string> modules = [] {
    auto lines = text::config_lines(config::python_stdlib_modules());
    return std::set<std::string>(lines.begin(), lines.end());
  }();
  return modules;
}

bool skip_directory(const fs::path& dir) {
  auto name = dir.filename().string();
  if (name.empty()) return false;
  if (name.front() == '.' || name == "__pycache__" || name == "site-packages" || name == "node_modules") return true;
  std::error_code ec;
  return fs::exists(dir / "pyvenv.cfg", ec);
}

}  // namespace

std::string_view to_string(RequirementOrigin origin) {
  switch (origin) {
    case RequirementOrigin::RequirementsFile: return "requirements-file";
    case RequirementOrigin::ImportScan: return "import-scan";
    case RequirementOrigin::Implicit: return "implicit";
  }
  return "requirements-file";
}

ParsedRequirements parse_requirements(std::string_view input) {
  static const std::regex kLine(R"(^([A-Za-z0-9](?:[A-Za-z0-9._-]*[A-Za-z0-9])?)\s*(\[[^\]]*\])?\s*(.*)$)");
  ParsedRequirements out;

  // Join backslash continuations first.
  std::vector<std::string> logical;
  std::string pending;
  for (auto line : text::lines(input)) {
    auto t = text::trim(line);
    if (!t.empty() && t.back() == '\\') {
      pending += std::string(t.substr(0, t.size() - 1)) + " ";
      continue;
    }
    logical.push_back(pending + std::string(line));
    pending.clear();
  }
  if (!pending.empty()) logical.push_back(pending);

  for (const auto& raw : logical) {
    std::string_view line = raw;
    // A '#' starts a comment at line start or after whitespace.
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '#' && (i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1])))) {
        line = line.substr(0, i);
        break;
      }
    }
    line = text::trim(line);
    if (line.empty()) continue;
    std::string shown(line);
    if (line.front() == '-') {
      out.warnings.push_back("'" + shown + "': option lines are not followed");
      continue;
    }
    if (auto semi = line.find(';'); semi != std::string_view::npos) line = text::trim(line.substr(0, semi));

    std::string s(line);
    std::smatch m;
    if (!std::regex_match(s, m, kLine)) {
      out.warnings.push_back("'" + shown + "': not a requirement, skipped");
      continue;
    }
    RequiredEntry entry{normalize_package(m[1].str()), VersionConstraint::unbounded(), RequirementOrigin::RequirementsFile};
    auto rest = text::trim(std::string_view(s).substr(static_cast<std::size_t>(m.position(3))));
    if (!rest.empty() && rest.front() == '@') {
      out.warnings.push_back("'" + shown + "': direct reference, version unconstrained");
      out.entries.push_back(std::move(entry));
      continue;
    }
    bool ok = true;
    if (!rest.empty()) {
      for (auto spec : text::split(rest, ',')) {
        if (text::trim(spec).empty()) continue;
        auto c = specifier_constraint(spec, shown, out.warnings);
        if (!c) {
          ok = false;
          break;
        }
        entry.constraint = intersect(entry.constraint, *c);
      }
    }
    if (!ok) {
      out.warnings.push_back("'" + shown + "': unparseable specifier, line skipped");
      continue;
    }
    if (entry.constraint.empty) out.warnings.push_back("'" + shown + "': specifiers conflict, nothing satisfies them");
    out.entries.push_back(std::move(entry));
  }
  return out;
}

std::set<std::string> imports_in_source(std::string_view source) {
  std::set<std::string> out;
  for (const auto& stmt : logical_statements(source)) {
    std::string_view s = stmt;
    if (s.starts_with("import") && s.size() > 6 && std::isspace(static_cast<unsigned char>(s[6]))) {
      for (auto part : text::split(s.substr(7), ',')) {
        part = text::trim(part);
        auto name = part.substr(0, part.find_first_of(" \t"));
        auto root = root_of(name);
        if (is_identifier(root)) out.insert(root);
      }
    } else if (s.starts_with("from") && s.size() > 4 && std::isspace(static_cast<unsigned char>(s[4]))) {
      auto rest = text::trim(s.substr(5));
      auto module = rest.substr(0, rest.find_first_of(" \t"));
      auto after = text::trim(rest.substr(module.size()));
      if (module.empty() || module.front() == '.' || !after.starts_with("import")) continue;
      auto root = root_of(module);
      if (is_identifier(root)) out.insert(root);
    }
  }
  return out;
}

ImportScan scan_imports(const fs::path& root) {
  ImportScan out;
  std::vector<fs::path> files;
  std::set<std::string> local;
  std::error_code ec;
  fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec), end;
  if (ec) {
    out.warnings.push_back("cannot read " + root.string() + ": " + ec.message());
    return out;
  }
  for (; it != end; it.increment(ec)) {
    if (ec) {
      out.warnings.push_back("cannot read below " + root.string() + ": " + ec.message());
      break;
    }
    const auto& p = it->path();
    if (it->is_directory(ec)) {
      if (skip_directory(p)) it.disable_recursion_pending();
      continue;
    }
    if (p.extension() == ".py") {
      files.push_back(p);
      local.insert(p.stem().string());
      if (p.parent_path() != root) local.insert(p.parent_path().filename().string());
    }
  }
  std::sort(files.begin(), files.end());

  for (const auto& f : files) {
    std::string src;
    try {
      src = text::read_file(f.string(), "project-analyzer");
    } catch (const IoError& e) {
      out.warnings.push_back(e.what());
      continue;
    }
    for (auto& name : imports_in_source(src)) {
      if (stdlib_modules().contains(name) || local.contains(name)) continue;
      out.packages.insert(name);
    }
  }
  return out;
}

const RequiredEntry* RequiredStack::find(std::string_view component) const {
  for (const auto& e : entries) {
    if (e.component == component) return &e;
  }
  return nullptr;
}

RequiredStack build_required_stack(const std::vector<RequiredEntry>& requirements, const std::set<std::string>& imports,
                                   const Lexicon& lexicon) {
  auto canonical = [&](const std::string& name) {
    if (const auto* spec = lexicon.find(name)) return spec->canonical_name;
    return normalize_package(name);
  };

  RequiredStack stack;
  for (const auto& r : requirements) {
    auto name = canonical(r.component);
    auto it = std::find_if(stack.entries.begin(), stack.entries.end(), [&](const auto& e) { return e.component == name; });
    if (it != stack.entries.end()) {
      it->constraint = intersect(it->constraint, r.constraint);
      continue;
    }
    stack.entries.push_back(RequiredEntry{name, r.constraint, r.origin});
  }

  std::set<std::string> scanned;
  for (const auto& i : imports) scanned.insert(canonical(i));
  for (const auto& name : scanned) {
    if (stack.find(name)) continue;
    stack.entries.push_back(RequiredEntry{name, VersionConstraint::unbounded(), RequirementOrigin::ImportScan});
  }
  return stack;
}

}  // namespace decide
