#include "decide/lexicon.hpp"

#include <algorithm>

#include "json.hpp"

#include "decide/config.hpp"
#include "decide/error.hpp"
#include "text.hpp"

namespace decide {

namespace {

constexpr const char* kModule = "recognizer";

// Surface forms are stored as lowercase words joined by single spaces, which
// is how the recognizer rebuilds them from token runs.
std::string normalize_surface(std::string_view s) { return text::to_lower(text::squeeze_spaces(s)); }

std::size_t word_count(std::string_view s) {
  std::size_t n = 1;
  for (char c : s) n += c == ' ';
  return n;
}

}  // namespace

Lexicon::Lexicon(std::vector<LexiconEntry> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    auto& spec = entries_[i].spec;
    spec.canonical_name = normalize_surface(spec.canonical_name);
    if (spec.canonical_name.empty()) throw ConfigError(kModule, "component with empty canonical name");

    std::set<std::string> aliases;
    for (const auto& a : spec.aliases) aliases.insert(normalize_surface(a));
    spec.aliases = std::move(aliases);
    if (spec.aliases.contains(spec.canonical_name))
      throw ConfigError(kModule, "component '" + spec.canonical_name + "' lists itself as an alias");

    auto add = [&](const std::string& form) {
      if (form.empty()) throw ConfigError(kModule, "empty alias for '" + spec.canonical_name + "'");
      auto [it, inserted] = lookup_.emplace(form, i);
      if (!inserted)
        throw ConfigError(kModule, "name '" + form + "' is used by both '" +
                                       entries_[it->second].spec.canonical_name + "' and '" +
                                       spec.canonical_name + "'");
      max_surface_tokens_ = std::max(max_surface_tokens_, word_count(form));
    };
    add(spec.canonical_name);
    for (const auto& a : spec.aliases) add(a);

    if (spec.layer != StackLayer::Hardware) {
      for (const auto& probe : entries_[i].probes) {
        if (probe.pattern.find('(') == std::string::npos)
          throw ConfigError(kModule, "probe for non-hardware component '" + spec.canonical_name +
                                         "' must capture a version group");
      }
    }
  }
}

const ComponentSpec* Lexicon::find(std::string_view name) const {
  auto key = normalize_surface(name);
  auto it = lookup_.find(key);
  if (it == lookup_.end()) {
    // Package indexes treat '_' and '-' alike.
    std::replace(key.begin(), key.end(), '_', '-');
    it = lookup_.find(key);
  }
  return it == lookup_.end() ? nullptr : &entries_[it->second].spec;
}

const LexiconEntry* Lexicon::entry(std::string_view canonical) const {
  auto it = lookup_.find(std::string(canonical));
  if (it == lookup_.end() || entries_[it->second].spec.canonical_name != canonical) return nullptr;
  return &entries_[it->second];
}

StackLayer Lexicon::layer_of(std::string_view canonical) const {
  const auto* e = entry(canonical);
  return e ? e->spec.layer : StackLayer::Library;
}

Lexicon parse_lexicon(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(kModule, std::string("components file is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw ConfigError(kModule, "components file must hold a JSON array");

  std::vector<LexiconEntry> entries;
  try {
    for (const auto& row : doc) {
      LexiconEntry e;
      e.spec.canonical_name = row.at("canonical").get<std::string>();
      for (const auto& a : row.value("aliases", nlohmann::json::array())) e.spec.aliases.insert(a.get<std::string>());
      e.spec.layer = parse_stack_layer(row.at("layer").get<std::string>());
      for (const auto& p : row.value("probes", nlohmann::json::array())) {
        ProbeSpec probe;
        probe.command = p.at("command").get<std::string>();
        probe.args = p.value("args", std::vector<std::string>{});
        probe.pattern = p.at("pattern").get<std::string>();
        e.probes.push_back(std::move(probe));
      }
      entries.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(kModule, std::string("malformed component entry: ") + e.what());
  } catch (const ParseError& e) {
    throw ConfigError(kModule, e.what());
  }
  return Lexicon(std::move(entries));
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  return parse_lexicon(text::read_file(path.string(), kModule));
}

const Lexicon& default_lexicon() {
  static const Lexicon lexicon = parse_lexicon(config::default_components_json());
  return lexicon;
}

}  // namespace decide
