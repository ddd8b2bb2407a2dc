#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "decide/corpus.hpp"
#include "decide/recognizer.hpp"

namespace decide {

struct DepToken {
  std::string form;
  /// 0-based index of the head word; nullopt for the root.
  std::optional<std::size_t> head;
  std::string deprel;
};

/// A multiword token ("du" = "de" + "le"): words [first, last] share `form`
/// in the surface text.
struct MultiwordToken {
  std::size_t first = 0;
  std::size_t last = 0;
  std::string form;
};

/// One dependency-parsed sentence. The constructor validates that there is
/// exactly one root, heads are in range and the head links form a tree.
class DepTree {
 public:
  explicit DepTree(std::vector<DepToken> tokens, std::vector<MultiwordToken> multiword = {});

  std::size_t size() const { return tokens_.size(); }
  const DepToken& token(std::size_t i) const { return tokens_.at(i); }
  const std::vector<DepToken>& tokens() const { return tokens_; }
  const std::vector<MultiwordToken>& multiword() const { return multiword_; }
  std::size_t root() const { return root_; }

  /// Root has depth 0.
  std::size_t depth(std::size_t i) const;

  /// Character span of each word in the paragraph it was aligned to; empty
  /// until align_parses() succeeds.
  const std::vector<Span>& char_spans() const { return char_spans_; }
  void set_char_spans(std::vector<Span> spans);

 private:
  std::vector<DepToken> tokens_;
  std::vector<MultiwordToken> multiword_;
  std::vector<std::size_t> depth_;
  std::vector<Span> char_spans_;
  std::size_t root_ = 0;
};

/// Reads CoNLL-U: tab-separated ID FORM LEMMA UPOS XPOS FEATS HEAD DEPREL ...,
/// sentences separated by blank lines, '#' comments ignored. Multiword
/// ranges are kept for alignment only; empty nodes ("3.1") are skipped.
/// Throws FormatError naming the 1-based sentence number.
std::vector<DepTree> parse_conllu(std::string_view text);

/// Depth of the lowest common ancestor of words i and j. Throws
/// ContractViolation for out-of-range indices.
std::size_t lca_depth(const DepTree& tree, std::size_t i, std::size_t j);

/// Assigns paragraph-ordered sentences to paragraphs by locating each word
/// form in the paragraph text. On success returns, per paragraph, the trees
/// that belong to it (with char spans set). Returns nullopt when the forms
/// cannot be located, in which case callers fall back to token distance.
std::optional<std::vector<std::vector<DepTree>>> align_parses(std::vector<DepTree> trees,
                                                              const std::vector<Paragraph>& paragraphs);

}  // namespace decide
