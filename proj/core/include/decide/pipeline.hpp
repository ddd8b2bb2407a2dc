#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "decide/corpus.hpp"
#include "decide/kg_builder.hpp"
#include "decide/lexicon.hpp"
#include "decide/matcher.hpp"
#include "decide/project.hpp"
#include "decide/qa.hpp"

namespace decide {

struct ExtractConfig {
  PostFormat format = PostFormat::Xml;
  RelevanceCriteria criteria;
  const Lexicon* lexicon = nullptr;  ///< default_lexicon() when null
  /// Directory of `<post_id>.conllu` parses; distance matching without it.
  std::optional<std::filesystem::path> parses_dir;
  std::vector<int> templates{1, 2};
  ConsolidationStrategy strategy = ConsolidationStrategy::MajorityVote;
  /// Evidence with a larger loss is dropped. Off by default.
  std::optional<double> max_loss;
  std::size_t jobs = 1;
};

struct ExtractSummary {
  std::size_t posts_read = 0;
  std::size_t malformed_rows = 0;
  std::size_t relevant = 0;
  std::size_t paragraphs = 0;
  std::size_t paragraphs_qualified = 0;
  std::size_t tree_matched_paragraphs = 0;
  std::size_t pairs_queried = 0;
  std::size_t oracle_failures = 0;
  std::size_t over_max_loss = 0;
  std::size_t evidence_discarded = 0;
  std::size_t edges_written = 0;

  std::string line() const;
};

struct ExtractResult {
  KnowledgeGraph graph;
  ExtractSummary summary;
  std::vector<std::string> warnings;
};

/// One qualifying paragraph's pair, ready to be put to the oracle.
struct PairQuery {
  Paragraph paragraph;
  VersionedComponent a;
  VersionedComponent b;
};

/// Everything up to the oracle: ingest, filter, paragraphs, recognition,
/// matching and pair enumeration. Queries come out in post, paragraph and
/// pair order.
std::vector<PairQuery> collect_queries(const PostStream& stream, const ExtractConfig& config, ExtractSummary& summary,
                                       std::vector<std::string>& warnings);

/// Full extraction. Oracle calls run on `config.jobs` threads; results are
/// merged in query order so the graph does not depend on scheduling. Oracle
/// errors skip the pair (counted and reported); protocol errors abort.
ExtractResult run_extract(std::istream& posts, const ExtractConfig& config, Oracle& oracle);

struct ProjectAnalysis {
  RequiredStack stack;
  std::vector<std::string> warnings;
};

/// Requirements file (default `<dir>/requirements.txt`, optional) plus an
/// import scan of the tree.
ProjectAnalysis analyze_project(const std::filesystem::path& project_dir,
                                const std::optional<std::filesystem::path>& requirements, const Lexicon& lexicon);

}  // namespace decide
