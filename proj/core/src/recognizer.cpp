#include "decide/recognizer.hpp"

#include <cctype>
#include <regex>
#include <set>

#include "decide/matcher.hpp"
#include "text.hpp"

namespace decide {

namespace {

bool is_word(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// Dotted versions ("3.7", "v1.13.5") and ".x" wildcards ("1.3.x", "v2.x").
const std::regex& free_version_re() {
  static const std::regex re(R"(^v?\d+(\.\d+){1,2}$|^v?\d+(\.\d+)?\.x$)", std::regex::icase | std::regex::optimize);
  return re;
}

// Bare number allowed only right after a component name.
const std::regex& attached_version_re() {
  static const std::regex re(R"(^v?\d+$)", std::regex::icase | std::regex::optimize);
  return re;
}

bool gap_is_space(std::string_view text, const Token& a, const Token& b) {
  for (auto i = a.chars.end; i < b.chars.begin; ++i) {
    if (!std::isspace(static_cast<unsigned char>(text[i]))) return false;
  }
  return a.chars.end < b.chars.begin;
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t sentence = 0;
  std::size_t start = std::string_view::npos;

  auto close = [&](std::size_t end) {
    if (start == std::string_view::npos) return;
    if (!tokens.empty()) {
      auto gap = text.substr(tokens.back().chars.end, start - tokens.back().chars.end);
      auto stop = gap.find_first_of(".!?");
      if (stop != std::string_view::npos && gap.find_first_of(" \t\r\n", stop) != std::string_view::npos) ++sentence;
    }
    tokens.push_back(Token{Span{start, end}, std::string(text.substr(start, end - start)), sentence});
    start = std::string_view::npos;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    bool in_token = start != std::string_view::npos;
    char prev = in_token ? text[i - 1] : '\0';
    bool keep = false;
    if (is_word(c)) {
      keep = true;
    } else if ((c == '+' || c == '#') && in_token && (std::isalpha(static_cast<unsigned char>(prev)) || prev == '+')) {
      keep = true;
    } else if ((c == '.' || c == '-') && in_token && i + 1 < text.size() && is_word(text[i + 1]) && is_word(prev)) {
      keep = !(c == '-' && is_digit(prev) && is_digit(text[i + 1]));
    }
    if (keep) {
      if (!in_token) start = i;
    } else {
      close(i);
    }
  }
  close(text.size());
  return tokens;
}

Recognition recognize(const Paragraph& paragraph, const Lexicon& lexicon) {
  Recognition out;
  out.tokens = tokenize(paragraph.text);
  const auto& toks = out.tokens;
  const auto& text = paragraph.text;
  std::vector<std::string> lower;
  lower.reserve(toks.size());
  for (const auto& t : toks) lower.push_back(text::to_lower(t.text));

  auto version_mention = [&](std::size_t tok, Span chars) {
    auto surface = text.substr(chars.begin, chars.size());
    out.versions.push_back(VersionMention{parse_version(surface), Span{tok, tok + 1}, chars, surface});
  };

  std::size_t i = 0;
  while (i < toks.size()) {
    // Longest surface form starting at token i.
    const ComponentSpec* found = nullptr;
    std::size_t found_len = 0;
    std::string key;
    for (std::size_t len = 1; len <= lexicon.max_surface_tokens() && i + len <= toks.size(); ++len) {
      if (len > 1) {
        if (!gap_is_space(text, toks[i + len - 2], toks[i + len - 1])) break;
        key += ' ';
      }
      key += lower[i + len - 1];
      if (const auto* spec = lexicon.find(key)) {
        found = spec;
        found_len = len;
      }
    }
    if (found) {
      Span chars{toks[i].chars.begin, toks[i + found_len - 1].chars.end};
      out.components.push_back(ComponentMention{found->canonical_name, found->layer, Span{i, i + found_len}, chars,
                                                text.substr(chars.begin, chars.size())});
      auto next = i + found_len;
      if (next < toks.size() && gap_is_space(text, toks[next - 1], toks[next]) &&
          std::regex_match(toks[next].text, attached_version_re())) {
        version_mention(next, toks[next].chars);
        i = next + 1;
      } else {
        i = next;
      }
      continue;
    }

    const auto& tok = toks[i];
    if (std::regex_match(tok.text, free_version_re())) {
      version_mention(i, tok.chars);
      ++i;
      continue;
    }

    // "cuda-8", "python_3.6", "scikit-learn-0.24": name glued to a version.
    for (auto cut = tok.text.find_last_of("-_"); cut != std::string::npos && cut > 0;
         cut = tok.text.find_last_of("-_", cut - 1)) {
      auto suffix = tok.text.substr(cut + 1);
      if (!std::regex_match(suffix, attached_version_re()) && !std::regex_match(suffix, free_version_re())) continue;
      const auto* spec = lexicon.find(lower[i].substr(0, cut));
      if (!spec) continue;
      Span name_chars{tok.chars.begin, tok.chars.begin + cut};
      out.components.push_back(ComponentMention{spec->canonical_name, spec->layer, Span{i, i + 1}, name_chars,
                                                tok.text.substr(0, cut)});
      version_mention(i, Span{tok.chars.begin + cut + 1, tok.chars.end});
      break;
    }
    ++i;
  }
  return out;
}

bool paragraph_qualifies(const std::vector<ComponentMention>& components,
                         const std::vector<VersionMention>& /*versions*/,
                         const std::vector<MatchedPair>& matches) {
  std::set<std::string> counted;
  for (const auto& m : matches) {
    if (m.version) counted.insert(m.component.component);
  }
  for (const auto& c : components) {
    if (c.layer == StackLayer::Hardware) counted.insert(c.component);
  }
  return counted.size() >= 2;
}

}  // namespace decide
