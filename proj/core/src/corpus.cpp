#include "decide/corpus.hpp"

#include <cctype>
#include <charconv>
#include <unordered_map>

#include "decide/config.hpp"
#include "decide/error.hpp"
#include "json.hpp"
#include "text.hpp"

namespace decide {

namespace {

constexpr const char* kModule = "corpus-ingest";

std::optional<std::int64_t> to_int(std::string_view s) {
  s = text::trim(s);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// Dump tags come as "<a><b>" (older dumps) or "|a|b|" (newer ones).
std::set<std::string> parse_tag_list(std::string_view s) {
  std::set<std::string> tags;
  std::string cur;
  for (char c : s) {
    if (c == '<' || c == '>' || c == '|') {
      if (!cur.empty()) tags.insert(text::to_lower(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) tags.insert(text::to_lower(cur));
  return tags;
}

using Attributes = std::unordered_map<std::string, std::string>;

// Parses `<row A="..." B="..." />`. Returns nullopt when the row is cut off.
std::optional<Attributes> parse_row(std::string_view line) {
  Attributes attrs;
  std::size_t i = 4;  // past "<row"
  while (true) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) return std::nullopt;
    if (line.substr(i, 2) == "/>" || line[i] == '>') return attrs;
    auto eq = line.find('=', i);
    if (eq == std::string_view::npos) return std::nullopt;
    auto name = text::trim(line.substr(i, eq - i));
    auto q = eq + 1;
    while (q < line.size() && std::isspace(static_cast<unsigned char>(line[q]))) ++q;
    if (q >= line.size() || (line[q] != '"' && line[q] != '\'')) return std::nullopt;
    auto close = line.find(line[q], q + 1);
    if (close == std::string_view::npos) return std::nullopt;
    attrs.emplace(std::string(name), text::decode_entities(line.substr(q + 1, close - q - 1)));
    i = close + 1;
  }
}

struct ParentInfo {
  std::set<std::string> tags;
  std::optional<std::int64_t> accepted_answer;
};

// Rows that are well-formed but neither questions nor answers (wikis, tag
// excerpts, ...) are dropped without counting as malformed.
enum class RowOutcome { Post, Ignored, Malformed };

RowOutcome read_xml_row(std::string_view line, RawPost& post, std::optional<std::int64_t>& accepted_answer) {
  auto attrs = parse_row(line);
  if (!attrs) return RowOutcome::Malformed;
  auto get = [&](const char* key) -> const std::string* {
    auto it = attrs->find(key);
    return it == attrs->end() ? nullptr : &it->second;
  };
  const auto* id = get("Id");
  const auto* type = get("PostTypeId");
  const auto* body = get("Body");
  if (!id || !type || !body) return RowOutcome::Malformed;
  auto post_id = to_int(*id);
  auto type_id = to_int(*type);
  if (!post_id || *post_id <= 0 || !type_id) return RowOutcome::Malformed;
  if (*type_id != 1 && *type_id != 2) return RowOutcome::Ignored;

  post.post_id = *post_id;
  post.post_type = *type_id == 1 ? PostType::Question : PostType::Answer;
  post.body_html = *body;
  if (const auto* score = get("Score")) {
    auto s = to_int(*score);
    if (!s) return RowOutcome::Malformed;
    post.score = *s;
  }
  if (const auto* parent = get("ParentId")) {
    auto p = to_int(*parent);
    if (!p) return RowOutcome::Malformed;
    post.parent_id = *p;
  }
  if (post.post_type == PostType::Answer && !post.parent_id) return RowOutcome::Malformed;
  if (const auto* tags = get("Tags")) post.tags = parse_tag_list(*tags);
  if (const auto* acc = get("AcceptedAnswerId")) accepted_answer = to_int(*acc);
  return RowOutcome::Post;
}

RowOutcome read_json_row(std::string_view line, RawPost& post, std::optional<std::int64_t>& accepted_answer) {
  auto doc = nlohmann::json::parse(line, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) return RowOutcome::Malformed;
  try {
    if (!doc.contains("post_id") || !doc.contains("post_type") || !doc.contains("body_html"))
      return RowOutcome::Malformed;
    post.post_id = doc.at("post_id").get<std::int64_t>();
    if (post.post_id <= 0) return RowOutcome::Malformed;
    const auto& type = doc.at("post_type");
    if (type.is_string()) {
      auto t = text::to_lower(type.get<std::string>());
      if (t == "question") post.post_type = PostType::Question;
      else if (t == "answer") post.post_type = PostType::Answer;
      else return RowOutcome::Malformed;
    } else {
      auto t = type.get<int>();
      if (t != 1 && t != 2) return RowOutcome::Ignored;
      post.post_type = t == 1 ? PostType::Question : PostType::Answer;
    }
    post.body_html = doc.at("body_html").get<std::string>();
    if (doc.contains("parent_id") && !doc["parent_id"].is_null()) post.parent_id = doc["parent_id"].get<std::int64_t>();
    post.score = doc.value("score", std::int64_t{0});
    post.accepted = doc.value("accepted", false);
    if (doc.contains("tags")) {
      const auto& tags = doc["tags"];
      if (tags.is_string()) {
        post.tags = parse_tag_list(tags.get<std::string>());
      } else {
        for (const auto& t : tags) post.tags.insert(text::to_lower(t.get<std::string>()));
      }
    }
    if (doc.contains("accepted_answer_id") && !doc["accepted_answer_id"].is_null())
      accepted_answer = doc["accepted_answer_id"].get<std::int64_t>();
  } catch (const nlohmann::json::exception&) {
    return RowOutcome::Malformed;
  }
  if (post.post_type == PostType::Answer && !post.parent_id) return RowOutcome::Malformed;
  return RowOutcome::Post;
}

bool is_block_tag(std::string_view name) {
  static const std::set<std::string_view> kBlocks = {
      "p",  "li", "br", "ul", "ol", "div", "h1", "h2", "h3", "h4", "h5", "h6", "blockquote",
      "hr", "table", "tr", "td", "th", "dd", "dt", "dl", "section", "article"};
  return kBlocks.contains(name);
}

// Walks HTML, reporting text runs and block boundaries. <pre> content is
// either dropped or passed through as text.
template <class OnText, class OnBreak>
void scan_html(std::string_view html, bool keep_pre, OnText on_text, OnBreak on_break) {
  std::size_t i = 0;
  while (i < html.size()) {
    char c = html[i];
    if (c == '\n') {
      on_break();
      ++i;
      continue;
    }
    if (c != '<') {
      auto next = html.find_first_of("<\n", i);
      if (next == std::string_view::npos) next = html.size();
      on_text(html.substr(i, next - i));
      i = next;
      continue;
    }
    auto gt = html.find('>', i);
    if (gt == std::string_view::npos) {
      on_text(html.substr(i));
      return;
    }
    auto inner = html.substr(i + 1, gt - i - 1);
    bool closing = !inner.empty() && inner.front() == '/';
    if (closing) inner.remove_prefix(1);
    std::size_t n = 0;
    while (n < inner.size() && std::isalnum(static_cast<unsigned char>(inner[n]))) ++n;
    auto name = text::to_lower(inner.substr(0, n));

    if (name == "pre" && !closing && !keep_pre) {
      on_break();
      // Case-insensitive search for the closing tag.
      auto lower_rest = text::to_lower(html.substr(gt + 1));
      auto end = lower_rest.find("</pre");
      if (end == std::string::npos) return;
      auto close_gt = html.find('>', gt + 1 + end);
      if (close_gt == std::string_view::npos) return;
      i = close_gt + 1;
      on_break();
      continue;
    }
    if (is_block_tag(name) || name == "pre") on_break();
    i = gt + 1;
  }
}

}  // namespace

PostFormat parse_post_format(std::string_view tag) {
  auto t = text::to_lower(text::trim(tag));
  if (t == "xml") return PostFormat::Xml;
  if (t == "jsonl") return PostFormat::Jsonl;
  throw ConfigError(kModule, "unknown post format '" + std::string(tag) + "' (expected xml or jsonl)");
}

PostStream parse_post_stream(std::istream& in, PostFormat format) {
  if (!in) throw IoError(kModule, "post source is not readable");

  PostStream out;
  std::unordered_map<std::int64_t, ParentInfo> questions;
  std::string line;
  while (std::getline(in, line)) {
    auto t = text::trim(line);
    if (t.empty()) continue;
    RawPost post;
    std::optional<std::int64_t> accepted_answer;
    RowOutcome outcome;
    if (format == PostFormat::Xml) {
      if (!t.starts_with("<row")) continue;  // prolog, <posts>, </posts>
      outcome = read_xml_row(t, post, accepted_answer);
    } else {
      outcome = read_json_row(t, post, accepted_answer);
    }
    if (outcome == RowOutcome::Malformed) {
      ++out.malformed_rows;
      continue;
    }
    if (outcome == RowOutcome::Ignored) continue;
    if (post.post_type == PostType::Question) questions[post.post_id] = ParentInfo{post.tags, accepted_answer};
    out.posts.push_back(std::move(post));
  }
  if (in.bad()) throw IoError(kModule, "error while reading post source");

  for (auto& post : out.posts) {
    if (post.post_type != PostType::Answer) continue;
    auto it = questions.find(*post.parent_id);
    if (it == questions.end()) continue;
    post.tags.insert(it->second.tags.begin(), it->second.tags.end());
    if (it->second.accepted_answer == post.post_id) post.accepted = true;
  }
  return out;
}

std::vector<std::regex> compile_patterns(const std::vector<std::string>& lines) {
  std::vector<std::regex> out;
  out.reserve(lines.size());
  for (const auto& p : lines) {
    try {
      out.emplace_back(p, std::regex::ECMAScript | std::regex::icase | std::regex::optimize);
    } catch (const std::regex_error& e) {
      throw ConfigError(kModule, "invalid pattern '" + p + "': " + e.what());
    }
  }
  return out;
}

RelevanceCriteria make_criteria(const std::vector<std::string>& tags, const std::vector<std::string>& patterns) {
  RelevanceCriteria c;
  for (const auto& t : tags) c.dl_tags.insert(text::to_lower(t));
  c.patterns = compile_patterns(patterns);
  return c;
}

RelevanceCriteria default_criteria() {
  return make_criteria(text::config_lines(config::default_dl_tags()), text::config_lines(config::default_patterns()));
}

RelevanceCriteria load_criteria(const std::optional<std::string>& tags_path,
                                const std::optional<std::string>& patterns_path) {
  auto tags = tags_path ? text::config_lines(text::read_file(*tags_path, kModule))
                        : text::config_lines(config::default_dl_tags());
  auto patterns = patterns_path ? text::config_lines(text::read_file(*patterns_path, kModule))
                                : text::config_lines(config::default_patterns());
  return make_criteria(tags, patterns);
}

bool filter_relevant(const RawPost& post, const RelevanceCriteria& criteria) {
  if (!post.accepted && post.score <= 1) return false;
  bool tagged = false;
  for (const auto& t : post.tags) {
    if (criteria.dl_tags.contains(t)) {
      tagged = true;
      break;
    }
  }
  if (!tagged) return false;
  auto body = html_to_text(post.body_html);
  for (const auto& re : criteria.patterns) {
    if (std::regex_search(body, re)) return true;
  }
  return false;
}

std::string html_to_text(std::string_view html) {
  std::string raw;
  scan_html(html, true, [&](std::string_view s) { raw += s; }, [&] { raw += '\n'; });
  return text::decode_entities(raw);
}

std::vector<Paragraph> extract_paragraphs(const RawPost& post) {
  std::vector<Paragraph> out;
  std::string current;
  auto flush = [&] {
    auto cleaned = text::squeeze_spaces(text::decode_entities(current));
    current.clear();
    if (cleaned.empty()) return;
    out.push_back(Paragraph{post.post_id, out.size(), std::move(cleaned)});
  };
  scan_html(post.body_html, false, [&](std::string_view s) { current += s; }, flush);
  flush();
  return out;
}

}  // namespace decide
