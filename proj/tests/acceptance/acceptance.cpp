// Acceptance checks. One PASS/FAIL line per criterion; exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "brute_force.hpp"
#include "cli.hpp"
#include "decide/detector.hpp"
#include "decide/env.hpp"
#include "decide/kg_builder.hpp"
#include "decide/lexicon.hpp"
#include "decide/matcher.hpp"
#include "decide/oracles.hpp"
#include "decide/pipeline.hpp"
#include "generators.hpp"

namespace {

using namespace decide;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Pinned tolerances.
constexpr double kConfTolerance = 1e-9;
constexpr double kConsolidateBudgetMs = 1.0;
constexpr double kFig3BudgetMs = 10.0;
constexpr double kMatchingBudgetMs = 10'000.0;
constexpr double kBacktrackBudgetMs = 5'000.0;

const std::string kFixtures = DECIDE_FIXTURES_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      detail = why;
    }
  }
};

int failures = 0;

void report(const std::string& id, const std::function<Outcome()>& check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS " : "FAIL ") << id << (o.detail.empty() ? "" : "  (" + o.detail + ")") << "\n";
}

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fixed2(double x) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << x;
  return s.str();
}

VersionedComponent VC(std::string_view s) { return parse_versioned_component(s); }

int run_cli(std::vector<std::string> args, std::string* err_out = nullptr) {
  args.insert(args.begin(), "decide");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (err_out) *err_out = err.str();
  return code;
}

Outcome confidence_worked_example() {
  Outcome o;
  std::vector<Evidence> in;
  for (int i = 0; i < 12; ++i) {
    in.push_back(Evidence{100 + i, VC("cuda 10.0"), VC("tensorflow 1.15"),
                          i < 10 ? Relation::Compatible : Relation::Incompatible, 0.1, 1});
  }
  auto t0 = Clock::now();
  auto c = consolidate(in, {}, ConsolidationStrategy::MajorityVote, default_lexicon());
  double ms = ms_since(t0);
  const auto* e = c.graph.find_edge(VC("tensorflow 1.15"), VC("cuda 10.0"));
  o.require(e != nullptr, "edge missing");
  if (!e) return o;
  o.require(std::abs(e->conf - 2.0 / 3.0) <= kConfTolerance, "conf " + std::to_string(e->conf));
  o.require(fixed2(e->conf) == "0.67", "displayed " + fixed2(e->conf));
  o.require(e->relation() == Relation::Compatible, "relation");
  o.require(ms < kConsolidateBudgetMs, "took " + std::to_string(ms) + " ms");
  o.detail = o.pass ? "conf=" + fixed2(e->conf) + " in " + fixed2(ms) + " ms" : o.detail;
  return o;
}

Outcome figure_three_matching() {
  Outcome o;
  Paragraph para{1, 0, "For your installation of tensorflow, 10.0 version of CUDA library should be used"};
  auto t0 = Clock::now();
  auto rec = recognize(para, default_lexicon());
  auto aligned = align_parses(parse_conllu(slurp(kFixtures + "/fig3.conllu")), {para});
  o.require(aligned.has_value(), "parse did not align");
  if (!aligned) return o;
  auto m = match_paragraph(rec, &(*aligned)[0]);
  double ms = ms_since(t0);
  o.require(m.size() == 2, "expected 2 matches");
  if (m.size() != 2) return o;
  o.require(m[0].component.component == "tensorflow" && !m[0].version, "tensorflow should stay unversioned");
  o.require(m[1].component.component == "cuda" && m[1].version && m[1].version->version.str() == "10.0",
            "cuda should take 10.0");
  o.require(m[1].mode == MatchMode::Tree && m[1].lca_depth == 1, "tree match at depth 1");
  o.require(ms < kFig3BudgetMs, "took " + std::to_string(ms) + " ms");
  return o;
}

Outcome matching_is_optimal() {
  Outcome o;
  testing::Rng rng(20240611);
  auto t0 = Clock::now();
  for (int round = 0; round < 100 && o.pass; ++round) {
    auto inst = testing::random_matching_instance(rng, 4, 4, 15);
    auto m = match_pairs(inst.components, inst.versions, &inst.tree);
    std::size_t total = 0, matched = 0;
    for (const auto& p : m) {
      if (!p.version) continue;
      ++matched;
      total += p.lca_depth;
    }
    o.require(matched == std::min(inst.components.size(), inst.versions.size()), "round " + std::to_string(round) + ": not full");
    o.require(total == testing::brute_max_lca(inst.tree, inst.components, inst.versions),
              "round " + std::to_string(round) + ": suboptimal");
  }
  double ms = ms_since(t0);
  o.require(ms < kMatchingBudgetMs, "took " + std::to_string(ms) + " ms");
  return o;
}

Outcome question_combinations() {
  Outcome o;
  Paragraph p{7, 0, "TensorFlow 1.15 with CUDA 10.2"};
  auto a = VC("cuda 10.2"), b = VC("tensorflow 1.15");
  for (bool y1 : {true, false}) {
    for (bool y2 : {true, false}) {
      for (bool q1_lower : {true, false}) {
        FixtureOracle f;
        f.script(7, a, b, 1, {y1, q1_lower ? 0.1 : 0.6});
        f.script(7, a, b, 2, {y2, q1_lower ? 0.6 : 0.1});
        auto e = infer_relation(p, a, b, f, {1, 2});
        auto expected = q1_lower ? (y1 ? Relation::Compatible : Relation::Incompatible)
                                 : (y2 ? Relation::Incompatible : Relation::Compatible);
        std::ostringstream tag;
        tag << "Q1=" << (y1 ? "yes" : "no") << " Q2=" << (y2 ? "yes" : "no") << (q1_lower ? " Q1 lower" : " Q2 lower");
        o.require(e.relation == expected, tag.str());
        o.require(e.template_used == (q1_lower ? 1 : 2), tag.str() + ": template");
      }
    }
  }
  return o;
}

Outcome motivating_example() {
  Outcome o;
  const std::string dir = kFixtures + "/motivating";
  auto kg = load_kg(dir + "/kg.json");
  auto env = load_snapshot(dir + "/env.json");
  auto project = analyze_project(dir + "/project", std::nullopt, default_lexicon());
  auto r = detect(project.stack, env, kg);
  o.require(r.issues.size() == 2, std::to_string(r.issues.size()) + " issues");
  if (r.issues.size() != 2) return o;
  const auto& cuda = r.issues[0];
  o.require(cuda.subject.component == "cuda" && cuda.conflicting && cuda.conflicting->str() == "tensorflow 1.15",
            "cuda issue");
  o.require(cuda.suggested_version && cuda.suggested_version->str() == "10.0", "cuda 10.0 not suggested");
  o.require(r.issues[1].subject.component == "numpy", "numpy issue");
  o.require(render_report(r, ReportFormat::Json) == slurp(dir + "/expected_report.json"), "report differs");
  return o;
}

Outcome backtracking_agrees_with_exhaustive_search() {
  Outcome o;
  testing::Rng rng(5150);
  int unsat = 0;
  auto t0 = Clock::now();
  for (int round = 0; round < 50 && o.pass; ++round) {
    auto inst = testing::random_detection_instance(rng);
    DetectOptions opts;
    auto r = detect(inst.required, inst.local, inst.kg, opts);
    auto entries = detection_entries(inst.required, inst.local, inst.kg, opts);
    bool expected = testing::brute_satisfiable(entries, inst.local, inst.kg);
    o.require(r.satisfiable == expected, "round " + std::to_string(round));
    unsat += expected ? 0 : 1;
  }
  double ms = ms_since(t0);
  o.require(ms < kBacktrackBudgetMs, "took " + std::to_string(ms) + " ms");
  if (o.pass) o.detail = std::to_string(unsat) + "/50 unsatisfiable";
  return o;
}

std::set<std::string> expected_edges() {
  std::set<std::string> out;
  std::istringstream in(slurp(kFixtures + "/expected_edges.tsv"));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') out.insert(line);
  }
  return out;
}

std::set<std::string> edge_lines(const KnowledgeGraph& kg) {
  std::set<std::string> out;
  for (const auto& [_, e] : kg.edges()) {
    std::ostringstream s;
    s << e.a.str() << "\t" << e.b.str() << "\t" << to_string(e.relation()) << "\t" << e.conf << "\t";
    auto posts = e.evidence_posts();
    for (std::size_t i = 0; i < posts.size(); ++i) s << (i ? "," : "") << posts[i];
    out.insert(s.str());
  }
  return out;
}

Outcome extraction_is_deterministic() {
  Outcome o;
  auto dir = fs::temp_directory_path() / "decide_acceptance";
  fs::create_directories(dir);
  std::vector<std::string> files;
  for (int i = 0; i < 2; ++i) {
    auto out = (dir / ("kg" + std::to_string(i) + ".json")).string();
    std::string err;
    int code = run_cli({"extract", "--posts", kFixtures + "/posts.xml", "--parses", kFixtures + "/parses", "--oracle",
                        "fixture:" + kFixtures + "/oracle.tsv", "--jobs", "4", "--out", out},
                       &err);
    o.require(code == 0, "extract exit " + std::to_string(code) + ": " + err);
    files.push_back(slurp(out));
  }
  fs::remove_all(dir);
  if (!o.pass) return o;
  o.require(files[0] == files[1], "runs differ");
  auto got = edge_lines(deserialize_kg(files[0]));
  o.require(got == expected_edges(), "edge set differs from expected_edges.tsv");
  return o;
}

Outcome stores_round_trip() {
  Outcome o;
  testing::Rng rng(99);
  auto kg = testing::random_kg(rng, 60, 1000);
  o.require(kg.edge_count() >= 1000, "generator produced " + std::to_string(kg.edge_count()) + " edges");
  auto text = serialize_kg(kg);
  auto back = deserialize_kg(text);
  o.require(back == kg, "graph differs after reload");
  o.require(serialize_kg(back) == text, "graph bytes differ");

  auto snap = testing::random_snapshot(rng, 50);
  o.require(snap.components.size() == 50, "snapshot has " + std::to_string(snap.components.size()) + " components");
  auto stext = serialize_snapshot(snap);
  auto sback = deserialize_snapshot(stext);
  o.require(sback == snap, "snapshot differs after reload");
  o.require(serialize_snapshot(sback) == stext, "snapshot bytes differ");
  return o;
}

}  // namespace

int main() {
  report("AC1 confidence 10 compatible + 2 incompatible = 0.67", confidence_worked_example);
  report("AC2 dependency-tree matching on the tensorflow/CUDA sentence", figure_three_matching);
  report("AC3 matching equals brute force on 100 random instances", matching_is_optimal);
  report("AC4 Q1/Q2 answer combinations resolve by lowest loss", question_combinations);
  report("AC5 motivating example reports cuda and numpy, suggests cuda 10.0", motivating_example);
  report("AC6 backtracking verdicts equal exhaustive search on 50 instances", backtracking_agrees_with_exhaustive_search);
  report("AC7 extract --jobs 4 is byte-identical across runs and matches the expected edges", extraction_is_deterministic);
  report("AC8 knowledge graph (1000 edges) and snapshot (50 components) round-trip byte-stable", stores_round_trip);
  std::cout << "NOTE AC9 corpus-scale precision/recall and user-study figures are not reproducible at desk scale; "
               "not checked\n";
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures == 0 ? 0 : 1;
}
