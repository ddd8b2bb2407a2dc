#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace decide {

enum class PostType { Question, Answer };
enum class PostFormat { Xml, Jsonl };

/// Accepts "xml" or "jsonl"; anything else is a ConfigError.
PostFormat parse_post_format(std::string_view tag);

struct RawPost {
  std::int64_t post_id = 0;
  PostType post_type = PostType::Question;
  std::optional<std::int64_t> parent_id;
  std::int64_t score = 0;
  bool accepted = false;
  std::string body_html;
  /// Lowercase. Answers carry their question's tags as well as their own.
  std::set<std::string> tags;
};

struct Paragraph {
  std::int64_t post_id = 0;
  std::size_t index = 0;
  std::string text;

  friend bool operator==(const Paragraph&, const Paragraph&) = default;
};

struct PostStream {
  std::vector<RawPost> posts;
  /// Rows that looked like posts but could not be read.
  std::size_t malformed_rows = 0;
};

/// Reads a Posts.xml dump (one `<row .../>` per line) or JSONL with the same
/// fields. Posts come back in input order. Answers are joined with their
/// question (tags, accepted flag) when the question is in the same input.
PostStream parse_post_stream(std::istream& in, PostFormat format);

/// Tag gate, linguistic-pattern gate and quality gate for a single post.
struct RelevanceCriteria {
  std::set<std::string> dl_tags;
  std::vector<std::regex> patterns;
};

/// One case-insensitive ECMAScript regex per non-comment line.
std::vector<std::regex> compile_patterns(const std::vector<std::string>& lines);
RelevanceCriteria make_criteria(const std::vector<std::string>& tags, const std::vector<std::string>& patterns);
RelevanceCriteria default_criteria();
/// Tag and pattern lists from files (one entry per line, '#' comments);
/// a missing path falls back to the built-in list.
RelevanceCriteria load_criteria(const std::optional<std::string>& tags_path,
                                const std::optional<std::string>& patterns_path);

/// True iff the post carries a DL tag, some pattern matches its plain-text
/// body, and it is accepted or scored above one.
bool filter_relevant(const RawPost& post, const RelevanceCriteria& criteria);

/// Body text with every tag stripped and entities decoded.
std::string html_to_text(std::string_view html);

/// Drops <pre> blocks, keeps inline <code> text, splits on block boundaries
/// (<p>, <li>, <br>, headings, ...) and newlines, and decodes entities.
/// Empty paragraphs are dropped; indices count the kept paragraphs.
std::vector<Paragraph> extract_paragraphs(const RawPost& post);

}  // namespace decide
