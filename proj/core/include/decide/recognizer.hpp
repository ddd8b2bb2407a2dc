#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "decide/corpus.hpp"
#include "decide/lexicon.hpp"
#include "decide/model.hpp"
#include "decide/version.hpp"

namespace decide {

/// Half-open [begin, end) range.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const Span&, const Span&) = default;
};

struct Token {
  Span chars;
  std::string text;
  /// Sentence ordinal within the paragraph (punctuation-based split).
  std::size_t sentence = 0;
};

/// Splits on whitespace and punctuation. '.' and '-' stay inside a token when
/// both neighbours are word characters, except '-' between two digits, so
/// "1.3.x", "cuda-8" and "scikit-learn" are single tokens while "3.5-3.7"
/// becomes two.
std::vector<Token> tokenize(std::string_view text);

struct ComponentMention {
  std::string component;  ///< canonical name
  StackLayer layer = StackLayer::Library;
  Span tokens;
  Span chars;
  std::string surface;

  friend bool operator==(const ComponentMention&, const ComponentMention&) = default;
};

struct VersionMention {
  Version version;
  Span tokens;
  Span chars;
  std::string surface;

  friend bool operator==(const VersionMention&, const VersionMention&) = default;
};

struct Recognition {
  std::vector<Token> tokens;
  std::vector<ComponentMention> components;
  std::vector<VersionMention> versions;
};

/// Case-insensitive keyword matching at token boundaries (longest surface
/// form first) plus the three version patterns: dotted versions, ".x"
/// wildcards, and bare numbers directly attached to a component
/// ("python v3", "cuda-8", "windows 64").
Recognition recognize(const Paragraph& paragraph, const Lexicon& lexicon);

struct MatchedPair;

/// At least two distinct components that are either matched with a version
/// or belong to the hardware layer.
bool paragraph_qualifies(const std::vector<ComponentMention>& components,
                         const std::vector<VersionMention>& versions,
                         const std::vector<MatchedPair>& matches);

}  // namespace decide
