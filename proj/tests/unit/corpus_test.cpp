#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "decide/corpus.hpp"
#include "decide/error.hpp"

namespace decide {
namespace {

PostStream parse(const std::string& text, PostFormat f = PostFormat::Xml) {
  std::istringstream in(text);
  return parse_post_stream(in, f);
}

TEST(Corpus, ReadsDumpRowsAndJoinsQuestions) {
  auto stream = parse(R"(<?xml version="1.0" encoding="utf-8"?>
<posts>
  <row Id="1" PostTypeId="1" AcceptedAnswerId="2" Score="5" Tags="&lt;tensorflow&gt;&lt;CUDA&gt;" Body="&lt;p&gt;q&lt;/p&gt;" />
  <row Id="2" PostTypeId="2" ParentId="1" Score="0" Body="&lt;p&gt;a&lt;/p&gt;" />
  <row Id="3" PostTypeId="2" ParentId="1" Score="4" Body="b" />
  <row Id="4" PostTypeId="5" Body="wiki" />
  <row Id="5" PostTypeId="2" Score="1" Body="orphan without parent" />
  <row Id="6" PostTypeId="1" Body="cut off
</posts>
)");
  ASSERT_EQ(stream.posts.size(), 3u);
  EXPECT_EQ(stream.malformed_rows, 2u);
  const auto& q = stream.posts[0];
  EXPECT_EQ(q.post_type, PostType::Question);
  EXPECT_EQ(q.tags, (std::set<std::string>{"tensorflow", "cuda"}));
  EXPECT_EQ(q.body_html, "<p>q</p>");
  const auto& a = stream.posts[1];
  EXPECT_TRUE(a.accepted);
  EXPECT_EQ(a.tags, q.tags);
  EXPECT_FALSE(stream.posts[2].accepted);
  EXPECT_EQ(stream.posts[2].score, 4);
}

TEST(Corpus, ReadsJsonLines) {
  auto stream = parse(
      "{\"post_id\": 7, \"post_type\": \"question\", \"body_html\": \"x\", \"tags\": [\"PyTorch\"], "
      "\"accepted_answer_id\": 8}\n"
      "{\"post_id\": 8, \"post_type\": 2, \"parent_id\": 7, \"body_html\": \"y\", \"score\": 3}\n"
      "{\"post_id\": 9, \"post_type\": \"comment\", \"body_html\": \"z\"}\n"
      "not json\n",
      PostFormat::Jsonl);
  ASSERT_EQ(stream.posts.size(), 2u);
  EXPECT_EQ(stream.malformed_rows, 2u);
  EXPECT_TRUE(stream.posts[1].accepted);
  EXPECT_TRUE(stream.posts[1].tags.contains("pytorch"));
}

TEST(Corpus, FormatNames) {
  EXPECT_EQ(parse_post_format("XML"), PostFormat::Xml);
  EXPECT_EQ(parse_post_format("jsonl"), PostFormat::Jsonl);
  EXPECT_THROW(parse_post_format("csv"), ConfigError);
}

TEST(Paragraphs, DropsCodeBlocksKeepsInlineCode) {
  RawPost p;
  p.post_id = 42;
  p.body_html =
      "<p>Use <code>tensorflow-gpu</code> 1.15 &amp; CUDA 10.0.</p>\n<pre><code>pip install tf==2.0\n</code></pre>"
      "<ul><li>first</li><li>second<br>third</li></ul><p>  </p>";
  auto paras = extract_paragraphs(p);
  ASSERT_EQ(paras.size(), 4u);
  EXPECT_EQ(paras[0].text, "Use tensorflow-gpu 1.15 & CUDA 10.0.");
  EXPECT_EQ(paras[1].text, "first");
  EXPECT_EQ(paras[2].text, "second");
  EXPECT_EQ(paras[3].text, "third");
  for (std::size_t i = 0; i < paras.size(); ++i) {
    EXPECT_EQ(paras[i].index, i);
    EXPECT_EQ(paras[i].post_id, 42);
  }
}

TEST(Paragraphs, HtmlToTextKeepsPre) {
  EXPECT_NE(html_to_text("<p>a</p><pre>b &lt; c</pre>").find("b < c"), std::string::npos);
}

RawPost answer(std::string body, std::int64_t score, bool accepted, std::set<std::string> tags) {
  RawPost p;
  p.post_id = 1;
  p.post_type = PostType::Answer;
  p.parent_id = 0;
  p.body_html = std::move(body);
  p.score = score;
  p.accepted = accepted;
  p.tags = std::move(tags);
  return p;
}

TEST(Relevance, AllThreeGates) {
  auto c = make_criteria({"tensorflow"}, {"not compatible"});
  EXPECT_TRUE(filter_relevant(answer("X is NOT compatible with Y", 0, true, {"tensorflow"}), c));
  EXPECT_TRUE(filter_relevant(answer("X is not compatible with Y", 2, false, {"tensorflow"}), c));
  EXPECT_FALSE(filter_relevant(answer("X is not compatible with Y", 1, false, {"tensorflow"}), c));
  EXPECT_FALSE(filter_relevant(answer("X is not compatible with Y", 5, true, {"javascript"}), c));
  EXPECT_FALSE(filter_relevant(answer("X works", 5, true, {"tensorflow"}), c));
}

TEST(Relevance, DefaultListsAndFiles) {
  auto c = default_criteria();
  EXPECT_TRUE(c.dl_tags.contains("tensorflow"));
  EXPECT_FALSE(c.patterns.empty());
  EXPECT_THROW(make_criteria({}, {"(unclosed"}), ConfigError);

  auto dir = std::filesystem::temp_directory_path() / "decide_corpus_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "tags.txt") << "# comment\nMyTag\n\n";
  auto loaded = load_criteria((dir / "tags.txt").string(), std::nullopt);
  EXPECT_EQ(loaded.dl_tags, (std::set<std::string>{"mytag"}));
  EXPECT_EQ(loaded.patterns.size(), c.patterns.size());
  EXPECT_THROW(load_criteria((dir / "missing.txt").string(), std::nullopt), IoError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace decide
