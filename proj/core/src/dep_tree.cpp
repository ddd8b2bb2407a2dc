#include "decide/dep_tree.hpp"

#include <cctype>
#include <charconv>

#include "decide/error.hpp"
#include "text.hpp"

namespace decide {

namespace {

constexpr const char* kModule = "version-matcher";

std::optional<std::size_t> to_index(std::string_view s) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string_view> columns(std::string_view line) {
  if (line.find('\t') != std::string_view::npos) return text::split(line, '\t');
  // Hand-written fixtures sometimes use spaces.
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    auto start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace

DepTree::DepTree(std::vector<DepToken> tokens, std::vector<MultiwordToken> multiword)
    : tokens_(std::move(tokens)), multiword_(std::move(multiword)) {
  if (tokens_.empty()) throw FormatError(kModule, "empty sentence");
  std::optional<std::size_t> root;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    const auto& head = tokens_[i].head;
    if (!head) {
      if (root) throw FormatError(kModule, "more than one root");
      root = i;
    } else if (*head >= tokens_.size()) {
      throw FormatError(kModule, "head of word " + std::to_string(i + 1) + " is out of range");
    } else if (*head == i) {
      throw FormatError(kModule, "word " + std::to_string(i + 1) + " is its own head");
    }
  }
  if (!root) throw FormatError(kModule, "no root");
  root_ = *root;

  // Depth by walking to the root; a walk longer than the sentence is a cycle.
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  depth_.assign(tokens_.size(), kUnset);
  depth_[root_] = 0;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    std::vector<std::size_t> path;
    std::size_t cur = i;
    while (depth_[cur] == kUnset) {
      path.push_back(cur);
      if (path.size() > tokens_.size()) throw FormatError(kModule, "head links contain a cycle");
      cur = *tokens_[cur].head;
    }
    auto d = depth_[cur];
    for (auto it = path.rbegin(); it != path.rend(); ++it) depth_[*it] = ++d;
  }
}

std::size_t DepTree::depth(std::size_t i) const {
  if (i >= depth_.size()) throw ContractViolation(kModule, "word index out of range");
  return depth_[i];
}

void DepTree::set_char_spans(std::vector<Span> spans) {
  if (spans.size() != tokens_.size()) throw ContractViolation(kModule, "char span count differs from word count");
  char_spans_ = std::move(spans);
}

std::vector<DepTree> parse_conllu(std::string_view input) {
  std::vector<DepTree> trees;
  std::vector<DepToken> words;
  std::vector<MultiwordToken> multiword;
  std::vector<std::size_t> raw_heads;
  std::size_t sentence = 1;

  auto fail = [&](const std::string& msg) -> FormatError {
    return FormatError(kModule, "sentence " + std::to_string(sentence) + ": " + msg);
  };
  auto finish = [&] {
    if (words.empty()) return;
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (raw_heads[i] > words.size()) throw fail("head " + std::to_string(raw_heads[i]) + " is out of range");
      words[i].head = raw_heads[i] == 0 ? std::nullopt : std::optional<std::size_t>(raw_heads[i] - 1);
    }
    try {
      trees.emplace_back(std::move(words), std::move(multiword));
    } catch (const FormatError& e) {
      throw fail(e.what());
    }
    words.clear();
    multiword.clear();
    raw_heads.clear();
    ++sentence;
  };

  for (auto line : text::lines(input)) {
    auto t = text::trim(line);
    if (t.empty()) {
      finish();
      continue;
    }
    if (t.front() == '#') continue;
    auto cols = columns(line);
    if (cols.size() < 8) throw fail("expected at least 8 columns, found " + std::to_string(cols.size()));
    auto id = cols[0];
    if (id.find('.') != std::string_view::npos) continue;  // empty node
    if (auto dash = id.find('-'); dash != std::string_view::npos) {
      auto first = to_index(id.substr(0, dash));
      auto last = to_index(id.substr(dash + 1));
      if (!first || !last || *first == 0 || *last < *first) throw fail("bad multiword range '" + std::string(id) + "'");
      multiword.push_back(MultiwordToken{*first - 1, *last - 1, std::string(cols[1])});
      continue;
    }
    auto index = to_index(id);
    if (!index || *index != words.size() + 1) throw fail("word ids must run 1..n, got '" + std::string(id) + "'");
    auto head = to_index(cols[6]);
    if (!head) throw fail("word " + std::string(id) + " has no numeric head");
    words.push_back(DepToken{std::string(cols[1]), std::nullopt, std::string(cols[7])});
    raw_heads.push_back(*head);
  }
  finish();
  return trees;
}

std::size_t lca_depth(const DepTree& tree, std::size_t i, std::size_t j) {
  if (i >= tree.size() || j >= tree.size()) throw ContractViolation(kModule, "lca_depth: word index out of range");
  while (tree.depth(i) > tree.depth(j)) i = *tree.token(i).head;
  while (tree.depth(j) > tree.depth(i)) j = *tree.token(j).head;
  while (i != j) {
    i = *tree.token(i).head;
    j = *tree.token(j).head;
  }
  return tree.depth(i);
}

std::optional<std::vector<std::vector<DepTree>>> align_parses(std::vector<DepTree> trees,
                                                              const std::vector<Paragraph>& paragraphs) {
  std::vector<std::vector<DepTree>> out(paragraphs.size());
  std::size_t p = 0;
  std::size_t pos = 0;

  auto skip_space = [&] {
    const auto& s = paragraphs[p].text;
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  };

  for (auto& tree : trees) {
    if (p >= paragraphs.size()) return std::nullopt;
    skip_space();
    // A sentence never straddles paragraphs.
    while (pos >= paragraphs[p].text.size()) {
      if (++p >= paragraphs.size()) return std::nullopt;
      pos = 0;
      skip_space();
    }
    const auto& s = paragraphs[p].text;

    std::vector<Span> spans(tree.size());
    std::size_t w = 0;
    while (w < tree.size()) {
      const MultiwordToken* mwt = nullptr;
      for (const auto& m : tree.multiword()) {
        if (m.first == w) mwt = &m;
      }
      const auto& form = mwt ? mwt->form : tree.token(w).form;
      skip_space();
      if (s.compare(pos, form.size(), form) != 0) return std::nullopt;
      Span span{pos, pos + form.size()};
      pos += form.size();
      auto last = mwt ? std::min(mwt->last, tree.size() - 1) : w;
      for (auto k = w; k <= last; ++k) spans[k] = span;
      w = last + 1;
    }
    tree.set_char_spans(std::move(spans));
    out[p].push_back(std::move(tree));
  }
  return out;
}

}  // namespace decide
