#include "decide/pipeline.hpp"

#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "decide/dep_tree.hpp"
#include "decide/error.hpp"
#include "decide/recognizer.hpp"
#include "text.hpp"

namespace decide {

std::string ExtractSummary::line() const {
  return "posts read: " + std::to_string(posts_read) + ", relevant: " + std::to_string(relevant) +
         ", paragraphs qualified: " + std::to_string(paragraphs_qualified) + ", pairs queried: " +
         std::to_string(pairs_queried) + ", edges written: " + std::to_string(edges_written);
}

std::vector<PairQuery> collect_queries(const PostStream& stream, const ExtractConfig& config, ExtractSummary& summary,
                                       std::vector<std::string>& warnings) {
  const Lexicon& lexicon = config.lexicon ? *config.lexicon : default_lexicon();
  std::vector<PairQuery> queries;
  summary.posts_read = stream.posts.size();
  summary.malformed_rows = stream.malformed_rows;

  for (const auto& post : stream.posts) {
    if (post.post_type != PostType::Answer || !filter_relevant(post, config.criteria)) continue;
    ++summary.relevant;
    auto paragraphs = extract_paragraphs(post);
    summary.paragraphs += paragraphs.size();

    std::optional<std::vector<std::vector<DepTree>>> parses;
    if (config.parses_dir) {
      auto path = *config.parses_dir / (std::to_string(post.post_id) + ".conllu");
      std::error_code ec;
      if (std::filesystem::exists(path, ec)) {
        try {
          parses = align_parses(parse_conllu(text::read_file(path.string(), "version-matcher")), paragraphs);
          if (!parses) warnings.push_back(path.string() + ": parse does not line up with the post text, using token distance");
        } catch (const Error& e) {
          warnings.push_back(path.string() + ": " + e.what() + "; using token distance");
        }
      }
    }

    for (std::size_t p = 0; p < paragraphs.size(); ++p) {
      const auto& paragraph = paragraphs[p];
      auto rec = recognize(paragraph, lexicon);
      if (rec.components.empty()) continue;
      const std::vector<DepTree>* trees = parses ? &(*parses)[p] : nullptr;
      if (trees && trees->empty()) trees = nullptr;
      auto matches = match_paragraph(rec, trees);
      if (!paragraph_qualifies(rec.components, rec.versions, matches)) continue;
      ++summary.paragraphs_qualified;
      if (trees) ++summary.tree_matched_paragraphs;
      for (auto& [a, b] : enumerate_pairs(extracted_components(matches))) {
        queries.push_back(PairQuery{paragraph, std::move(a), std::move(b)});
      }
    }
  }
  return queries;
}

ExtractResult run_extract(std::istream& posts, const ExtractConfig& config, Oracle& oracle) {
  ExtractResult result;
  auto stream = parse_post_stream(posts, config.format);
  auto queries = collect_queries(stream, config, result.summary, result.warnings);
  result.summary.pairs_queried = queries.size();

  struct Outcome {
    std::optional<Evidence> evidence;
    std::string failure;
    std::exception_ptr fatal;
  };
  std::vector<Outcome> outcomes(queries.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};

  auto worker = [&] {
    while (!abort.load()) {
      auto i = next.fetch_add(1);
      if (i >= queries.size()) return;
      const auto& q = queries[i];
      try {
        outcomes[i].evidence = infer_relation(q.paragraph, q.a, q.b, oracle, config.templates);
      } catch (const ProtocolError&) {
        outcomes[i].fatal = std::current_exception();
        abort.store(true);
      } catch (const OracleError& e) {
        outcomes[i].failure = e.what();
      } catch (...) {
        outcomes[i].fatal = std::current_exception();
        abort.store(true);
      }
    }
  };
  const auto jobs = std::max<std::size_t>(1, std::min(config.jobs, queries.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<Evidence> evidence;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    auto& o = outcomes[i];
    if (o.fatal) std::rethrow_exception(o.fatal);
    if (!o.failure.empty()) {
      ++result.summary.oracle_failures;
      result.warnings.push_back("post " + std::to_string(queries[i].paragraph.post_id) + ": pair skipped: " + o.failure);
      continue;
    }
    if (!o.evidence) continue;
    if (config.max_loss && o.evidence->loss > *config.max_loss) {
      ++result.summary.over_max_loss;
      continue;
    }
    evidence.push_back(std::move(*o.evidence));
  }

  std::map<std::int64_t, std::int64_t> scores;
  for (const auto& p : stream.posts) scores[p.post_id] = p.score;
  const Lexicon& lexicon = config.lexicon ? *config.lexicon : default_lexicon();
  auto consolidation = consolidate(evidence, scores, config.strategy, lexicon);
  result.summary.evidence_discarded = consolidation.discarded;
  result.summary.edges_written = consolidation.graph.edge_count();
  result.graph = std::move(consolidation.graph);
  return result;
}

ProjectAnalysis analyze_project(const std::filesystem::path& project_dir,
                                const std::optional<std::filesystem::path>& requirements, const Lexicon& lexicon) {
  ProjectAnalysis out;
  std::error_code ec;
  if (!std::filesystem::is_directory(project_dir, ec)) {
    throw IoError("project-analyzer", project_dir.string() + " is not a directory");
  }
  ParsedRequirements parsed;
  auto req_path = requirements.value_or(project_dir / "requirements.txt");
  if (std::filesystem::exists(req_path, ec)) {
    parsed = parse_requirements(text::read_file(req_path.string(), "project-analyzer"));
  } else if (requirements) {
    throw IoError("project-analyzer", "requirements file " + req_path.string() + " not found");
  }
  auto scan = scan_imports(project_dir);
  out.stack = build_required_stack(parsed.entries, scan.packages, lexicon);
  out.warnings = std::move(parsed.warnings);
  out.warnings.insert(out.warnings.end(), scan.warnings.begin(), scan.warnings.end());
  return out;
}

}  // namespace decide
