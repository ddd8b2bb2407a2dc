#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "decide/detector.hpp"
#include "decide/env.hpp"
#include "decide/error.hpp"
#include "decide/kg_builder.hpp"
#include "decide/lexicon.hpp"
#include "decide/oracles.hpp"
#include "decide/pipeline.hpp"

namespace decide::cli {

namespace {

namespace fs = std::filesystem;

// A file from $DECIDE_CONFIG, if both are present.
std::optional<std::string> config_file(const char* name) {
  const char* dir = std::getenv("DECIDE_CONFIG");
  if (!dir || !*dir) return std::nullopt;
  auto path = fs::path(dir) / name;
  std::error_code ec;
  if (!fs::exists(path, ec)) return std::nullopt;
  return path.string();
}

struct LexiconHolder {
  std::optional<Lexicon> custom;
  const Lexicon& get() const { return custom ? *custom : default_lexicon(); }
};

LexiconHolder load_lexicon_option(const std::string& flag) {
  LexiconHolder h;
  auto path = flag.empty() ? config_file("components.json") : std::optional<std::string>(flag);
  if (path) h.custom = load_lexicon(*path);
  return h;
}

VersionedComponent canonical_component(const std::string& text, const Lexicon& lexicon) {
  auto c = parse_versioned_component(text);
  if (const auto* spec = lexicon.find(c.name)) c.name = spec->canonical_name;
  return c;
}

std::string format_conf(double conf) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << conf;
  return s.str();
}

struct ExtractArgs {
  std::string posts, format, tags, patterns, lexicon, parses, oracle, oracle_url, out;
  std::string templates = "Q1+Q2";
  std::string consolidate = "majority";
  std::optional<double> max_loss;
  std::size_t jobs = 1;
};

int run_extract_command(const ExtractArgs& a, std::ostream& err) {
  ExtractConfig config;
  if (a.format.empty()) {
    config.format = fs::path(a.posts).extension() == ".jsonl" ? PostFormat::Jsonl : PostFormat::Xml;
  } else {
    config.format = parse_post_format(a.format);
  }
  auto tags = a.tags.empty() ? config_file("dl_tags.txt") : std::optional<std::string>(a.tags);
  auto patterns = a.patterns.empty() ? config_file("patterns.txt") : std::optional<std::string>(a.patterns);
  config.criteria = load_criteria(tags, patterns);
  auto lexicon = load_lexicon_option(a.lexicon);
  config.lexicon = &lexicon.get();
  if (!a.parses.empty()) {
    if (!fs::is_directory(a.parses)) throw ConfigError("cli", "--parses: " + a.parses + " is not a directory");
    config.parses_dir = a.parses;
  }
  config.templates = parse_template_strategy(a.templates);
  config.strategy = parse_consolidation_strategy(a.consolidate);
  config.max_loss = a.max_loss;
  config.jobs = a.jobs;

  std::unique_ptr<Oracle> oracle;
  if (!a.oracle.empty()) {
    if (!a.oracle.starts_with("fixture:")) throw ConfigError("cli", "--oracle expects fixture:<path>");
    oracle = std::make_unique<FixtureOracle>(FixtureOracle::from_file(a.oracle.substr(8)));
  } else {
    std::string url = a.oracle_url;
    if (url.empty()) {
      if (const char* env = std::getenv("DECIDE_ORACLE_URL")) url = env;
    }
    if (url.empty()) throw ConfigError("cli", "no oracle: pass --oracle fixture:<path>, --oracle-url or set DECIDE_ORACLE_URL");
    oracle = std::make_unique<HttpOracle>(url);
  }

  std::ifstream in(a.posts, std::ios::binary);
  if (!in) throw IoError("corpus-ingest", "cannot open " + a.posts);
  auto result = run_extract(in, config, *oracle);
  save_kg(result.graph, a.out);

  for (const auto& w : result.warnings) err << "warning: " << w << "\n";
  if (result.summary.malformed_rows) err << "skipped " << result.summary.malformed_rows << " malformed rows\n";
  if (result.summary.oracle_failures) err << result.summary.oracle_failures << " pairs skipped after oracle errors\n";
  err << result.summary.line() << "\n";
  return 0;
}

struct DetectArgs {
  std::string project, kg, env, requirements, lexicon;
  std::string format = "text";
  std::string order = "file";
  bool no_implicit = false;
};

int run_detect_command(const DetectArgs& a, std::ostream& out, std::ostream& err) {
  auto format = parse_report_format(a.format);
  DetectOptions options;
  options.order = parse_detection_order(a.order);
  options.expand_implicit = !a.no_implicit;
  auto lexicon = load_lexicon_option(a.lexicon);

  auto kg = load_kg(a.kg);
  std::optional<fs::path> requirements;
  if (!a.requirements.empty()) requirements = a.requirements;
  auto project = analyze_project(a.project, requirements, lexicon.get());
  for (const auto& w : project.warnings) err << "warning: " << w << "\n";

  EnvSnapshot env;
  if (!a.env.empty()) {
    env = load_snapshot(a.env);
  } else {
    SystemCommandRunner runner;
    env = probe_local_stack(runner, lexicon.get());
  }

  auto report = detect(project.stack, env, kg, options);
  out << render_report(report, format);
  if (!report.satisfiable) return 3;
  return report.issues.empty() ? 0 : 2;
}

struct QueryArgs {
  std::string kg, lexicon, candidates;
  std::vector<std::string> pair;
};

int run_query_command(const QueryArgs& a, std::ostream& out) {
  auto kg = load_kg(a.kg);
  auto lexicon = load_lexicon_option(a.lexicon);
  if (!a.pair.empty()) {
    auto x = canonical_component(a.pair[0], lexicon.get());
    auto y = canonical_component(a.pair[1], lexicon.get());
    auto finding = relation_between(kg, x, y);
    if (!finding) {
      out << "Unknown\n";
    } else {
      auto posts = finding->evidence_posts.size();
      out << to_string(finding->relation) << " conf=" << format_conf(finding->conf) << " (" << posts
          << (posts == 1 ? " post)\n" : " posts)\n");
    }
  }
  if (!a.candidates.empty()) {
    auto name = a.candidates;
    if (const auto* spec = lexicon.get().find(name)) name = spec->canonical_name;
    out << name << ":";
    for (const auto& v : candidate_versions(kg, name)) out << " " << v.str();
    out << "\n";
  }
  return 0;
}

struct ProbeArgs {
  std::string out, transcript, record, lexicon;
};

int run_probe_command(const ProbeArgs& a, std::ostream& out) {
  auto lexicon = load_lexicon_option(a.lexicon);
  EnvSnapshot snap;
  if (!a.transcript.empty()) {
    auto runner = ReplayRunner::from_file(a.transcript);
    snap = probe_local_stack(runner, lexicon.get());
  } else {
    SystemCommandRunner system;
    RecordingRunner runner(system);
    snap = probe_local_stack(runner, lexicon.get());
    if (!a.record.empty()) {
      std::ofstream rec(a.record, std::ios::binary | std::ios::trunc);
      if (!rec) throw IoError("env-prober", "cannot write " + a.record);
      rec << runner.transcript_json();
    }
  }
  if (a.out.empty()) {
    out << serialize_snapshot(snap);
  } else {
    save_snapshot(snap, a.out);
  }
  return 0;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Detects version incompatibilities in deep learning stacks using knowledge mined from Q&A posts.",
               "decide"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "decide 0.1.0");

  ExtractArgs ex;
  auto* extract = app.add_subcommand("extract", "Build a knowledge graph from a posts dump");
  extract->add_option("--posts", ex.posts, "Posts.xml dump or JSONL file")->required()->check(CLI::ExistingFile);
  extract->add_option("--format", ex.format, "xml or jsonl (default: from the file extension)");
  extract->add_option("--tags", ex.tags, "DL tag list")->check(CLI::ExistingFile);
  extract->add_option("--patterns", ex.patterns, "Relevance regex list")->check(CLI::ExistingFile);
  extract->add_option("--lexicon", ex.lexicon, "Component lexicon JSON")->check(CLI::ExistingFile);
  extract->add_option("--parses", ex.parses, "Directory of <post_id>.conllu dependency parses");
  auto* fixture = extract->add_option("--oracle", ex.oracle, "fixture:<path> for a scripted oracle");
  extract->add_option("--oracle-url", ex.oracle_url, "HTTP oracle base URL (default: $DECIDE_ORACLE_URL)")
      ->excludes(fixture);
  extract->add_option("--templates", ex.templates, "Q1+Q2, a single Qn, positive, negative or all")->capture_default_str();
  extract->add_option("--consolidate", ex.consolidate, "majority, weighted or loss")->capture_default_str();
  extract->add_option("--max-loss", ex.max_loss, "Drop answers with a larger loss");
  extract->add_option("--jobs", ex.jobs, "Concurrent oracle requests")->capture_default_str()->check(CLI::PositiveNumber);
  extract->add_option("--out", ex.out, "Output knowledge graph")->required();

  DetectArgs de;
  auto* det = app.add_subcommand("detect", "Check a project against the local stack");
  det->add_option("project", de.project, "Project directory")->required()->check(CLI::ExistingDirectory);
  det->add_option("--kg", de.kg, "Knowledge graph file")->required()->check(CLI::ExistingFile);
  det->add_option("--env", de.env, "Environment snapshot (default: probe this machine)")->check(CLI::ExistingFile);
  det->add_option("--requirements", de.requirements, "Requirements file (default: <project>/requirements.txt)");
  det->add_option("--format", de.format, "text or json")->capture_default_str();
  det->add_option("--order", de.order, "file or alpha")->capture_default_str();
  det->add_option("--lexicon", de.lexicon, "Component lexicon JSON")->check(CLI::ExistingFile);
  det->add_flag("--no-implicit", de.no_implicit, "Only check components the project requires");

  QueryArgs qu;
  auto* query = app.add_subcommand("query", "Look up relations in a knowledge graph");
  query->add_option("kg", qu.kg, "Knowledge graph file")->required()->check(CLI::ExistingFile);
  auto* pair = query->add_option("--pair", qu.pair, "Two components, e.g. \"tensorflow 1.15\" \"cuda 10.2\"")
                   ->expected(2);
  auto* cand = query->add_option("--candidates", qu.candidates, "List known versions of a component");
  query->add_option("--lexicon", qu.lexicon, "Component lexicon JSON")->check(CLI::ExistingFile);
  query->callback([&] {
    if (pair->count() == 0 && cand->count() == 0) throw CLI::RequiredError("--pair or --candidates");
  });

  ProbeArgs pr;
  auto* probe = app.add_subcommand("probe", "Snapshot the local stack");
  probe->add_option("--out", pr.out, "Snapshot file (default: standard output)");
  auto* transcript = probe->add_option("--transcript", pr.transcript, "Replay recorded command output")
                         ->check(CLI::ExistingFile);
  probe->add_option("--record", pr.record, "Save the command transcript")->excludes(transcript);
  probe->add_option("--lexicon", pr.lexicon, "Component lexicon JSON")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (extract->parsed()) return run_extract_command(ex, err);
    if (det->parsed()) return run_detect_command(de, out, err);
    if (query->parsed()) return run_query_command(qu, out);
    if (probe->parsed()) return run_probe_command(pr, out);
  } catch (const Error& e) {
    err << "decide: " << e.module() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "decide: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace decide::cli
