#include "decide/detector.hpp"

#include <algorithm>
#include <set>

#include "decide/error.hpp"

namespace decide {

namespace {

constexpr const char* kModule = "detector";

struct Option {
  /// nullopt version with source Unknown means "any version".
  std::optional<Version> version;
  AssignmentSource source = AssignmentSource::Suggested;
};

struct Slot {
  RequiredEntry entry;
  const LocalComponent* installed = nullptr;
  std::vector<Option> domain;
  std::size_t cursor = 0;
  std::optional<std::size_t> choice;
  std::optional<Issue> issue;

  std::optional<VersionedComponent> chosen() const {
    if (!choice) return std::nullopt;
    const auto& opt = domain[*choice];
    if (opt.source == AssignmentSource::Unknown) return std::nullopt;
    return VersionedComponent{entry.component, opt.version};
  }
};

struct Blocker {
  VersionedComponent other;
  RelationFinding finding;
};

bool in_constraint(const LocalComponent& installed, const VersionConstraint& c) {
  if (c.empty) return false;
  const auto& v = installed.component.version;
  if (!v) return true;  // versionless hardware
  if (v->wildcard) return false;
  return version_satisfies(*v, c);
}

void merge_posts(std::vector<std::int64_t>& into, const std::vector<std::int64_t>& posts) {
  into.insert(into.end(), posts.begin(), posts.end());
  std::sort(into.begin(), into.end());
  into.erase(std::unique(into.begin(), into.end()), into.end());
}

class Search {
 public:
  Search(std::vector<RequiredEntry> entries, const EnvSnapshot& local, const KnowledgeGraph& kg)
      : kg_(kg) {
    std::set<std::string> required;
    for (auto& e : entries) {
      required.insert(e.component);
      Slot s;
      s.installed = local.find(e.component);
      s.entry = std::move(e);
      slots_.push_back(std::move(s));
    }
    for (const auto& c : local.components) {
      if (!required.contains(c.component.name)) others_.push_back(&c);
    }
  }

  IncompatibilityReport run() {
    IncompatibilityReport report;
    const std::size_t n = slots_.size();
    bool satisfiable = true;
    if (n > 0) {
      std::size_t i = 0;
      enter(0);
      while (true) {
        bool fresh = slots_[i].cursor == 0;
        if (advance(i)) {
          if (++i == n) break;
          enter(i);
          continue;
        }
        if (fresh) note_blocked(i);
        if (i == 0) {
          satisfiable = false;
          break;
        }
        --i;
      }
    }

    report.satisfiable = satisfiable;
    if (satisfiable) {
      // Cite the whole resolved stack, not just the entries before each one.
      for (std::size_t i = 0; i < n; ++i) {
        if (slots_[i].issue) suggest(i, n);
      }
      for (const auto& s : slots_) {
        const auto& opt = s.domain[*s.choice];
        report.assignments.push_back(Assignment{s.entry.component, opt.version, opt.source});
      }
    }
    for (const auto& s : slots_) {
      if (s.issue) report.issues.push_back(*s.issue);
    }
    return report;
  }

 private:
  std::optional<Blocker> blocker(std::size_t i, const VersionedComponent& node) const {
    for (std::size_t j = 0; j < i; ++j) {
      auto other = slots_[j].chosen();
      if (!other) continue;
      auto f = relation_between(kg_, node, *other);
      if (f && f->relation == Relation::Incompatible) return Blocker{*other, *f};
    }
    return installed_blocker(node);
  }

  std::optional<Blocker> installed_blocker(const VersionedComponent& node) const {
    for (const auto* c : others_) {
      auto f = relation_between(kg_, node, c->component);
      if (f && f->relation == Relation::Incompatible) return Blocker{c->component, *f};
    }
    return std::nullopt;
  }

  std::vector<Option> graph_options(const RequiredEntry& e, const std::optional<Version>& exclude) const {
    std::vector<Option> out;
    bool known = false;
    auto versions = candidate_versions(kg_, e.component);
    for (auto it = versions.rbegin(); it != versions.rend(); ++it) {
      if (it->wildcard || !version_satisfies(*it, e.constraint)) continue;
      known = true;
      if (exclude && compare_versions(*it, *exclude) == 0) continue;
      out.push_back(Option{*it, AssignmentSource::Suggested});
    }
    if (!known) {
      if (e.constraint.is_point()) {
        const auto& pin = e.constraint.lower->version;
        if (!exclude || compare_versions(pin, *exclude) != 0) out.push_back(Option{pin, AssignmentSource::Suggested});
      } else {
        out.push_back(Option{std::nullopt, AssignmentSource::Unknown});
      }
    }
    return out;
  }

  Issue make_issue(IssueKind kind, const Slot& s) const {
    Issue issue;
    issue.kind = kind;
    issue.subject = s.entry;
    if (s.installed) issue.installed = s.installed->component;
    return issue;
  }

  void enter(std::size_t i) {
    auto& s = slots_[i];
    s.cursor = 0;
    s.choice.reset();
    s.issue.reset();
    s.domain.clear();

    const auto& c = s.entry.constraint;
    if (c.empty) {
      s.issue = make_issue(IssueKind::Unsatisfiable, s);
      return;
    }
    if (!s.installed) {
      s.domain = graph_options(s.entry, std::nullopt);
      return;
    }
    const auto& installed = s.installed->component;
    if (!in_constraint(*s.installed, c)) {
      s.issue = make_issue(IssueKind::ConstraintViolation, s);
      s.domain = installed.version ? graph_options(s.entry, std::nullopt) : std::vector<Option>{};
      return;
    }
    if (auto b = blocker(i, installed)) {
      auto issue = make_issue(IssueKind::GraphIncompatibility, s);
      issue.conflicting = b->other;
      issue.evidence_posts = b->finding.evidence_posts;
      s.issue = std::move(issue);
      // Hardware cannot be swapped for another version.
      if (installed.version) s.domain = graph_options(s.entry, installed.version);
      return;
    }
    s.domain = {Option{installed.version, AssignmentSource::Installed}};
  }

  bool admissible(std::size_t i, const Option& opt) const {
    if (opt.source == AssignmentSource::Unknown) return true;
    return !blocker(i, VersionedComponent{slots_[i].entry.component, opt.version});
  }

  bool advance(std::size_t i) {
    auto& s = slots_[i];
    s.choice.reset();
    for (auto k = s.cursor; k < s.domain.size(); ++k) {
      if (!admissible(i, s.domain[k])) continue;
      s.choice = k;
      s.cursor = k + 1;
      if (s.issue) suggest(i, i);
      return true;
    }
    s.cursor = s.domain.size();
    return false;
  }

  // Suggestion evidence: compatible edges to the choices of entries other
  // than i among the first `upto`, and to installed non-required components.
  void suggest(std::size_t i, std::size_t upto) {
    auto& s = slots_[i];
    const auto& opt = s.domain[*s.choice];
    s.issue->suggested_version.reset();
    s.issue->suggestion_evidence_posts.clear();
    if (opt.source != AssignmentSource::Suggested || !opt.version) return;
    s.issue->suggested_version = opt.version;
    VersionedComponent node{s.entry.component, opt.version};
    auto cite = [&](const VersionedComponent& other) {
      auto f = relation_between(kg_, node, other);
      if (f && f->relation == Relation::Compatible) merge_posts(s.issue->suggestion_evidence_posts, f->evidence_posts);
    };
    for (std::size_t j = 0; j < upto; ++j) {
      if (j == i) continue;
      if (auto other = slots_[j].chosen()) cite(*other);
    }
    for (const auto* c : others_) cite(c->component);
  }

  // An absent component none of whose known versions fits the installed
  // stack is worth reporting even though nothing is installed for it.
  void note_blocked(std::size_t i) {
    auto& s = slots_[i];
    if (s.issue || s.installed) return;
    for (const auto& opt : s.domain) {
      if (opt.source == AssignmentSource::Unknown) continue;
      if (auto b = installed_blocker(VersionedComponent{s.entry.component, opt.version})) {
        auto issue = make_issue(IssueKind::GraphIncompatibility, s);
        issue.conflicting = b->other;
        issue.evidence_posts = b->finding.evidence_posts;
        s.issue = std::move(issue);
        return;
      }
    }
  }

  const KnowledgeGraph& kg_;
  std::vector<Slot> slots_;
  std::vector<const LocalComponent*> others_;
};

}  // namespace

std::string_view to_string(IssueKind kind) {
  switch (kind) {
    case IssueKind::ConstraintViolation: return "constraint-violation";
    case IssueKind::GraphIncompatibility: return "graph-incompatibility";
    case IssueKind::Unsatisfiable: return "unsatisfiable";
  }
  return "graph-incompatibility";
}

IssueKind parse_issue_kind(std::string_view text) {
  if (text == "constraint-violation") return IssueKind::ConstraintViolation;
  if (text == "graph-incompatibility") return IssueKind::GraphIncompatibility;
  if (text == "unsatisfiable") return IssueKind::Unsatisfiable;
  throw FormatError(kModule, "unknown issue kind '" + std::string(text) + "'");
}

std::string_view to_string(AssignmentSource source) {
  switch (source) {
    case AssignmentSource::Installed: return "installed";
    case AssignmentSource::Suggested: return "suggested";
    case AssignmentSource::Unknown: return "unknown";
  }
  return "unknown";
}

DetectionOrder parse_detection_order(std::string_view text) {
  if (text == "file") return DetectionOrder::File;
  if (text == "alpha") return DetectionOrder::Alpha;
  throw ConfigError(kModule, "unknown order '" + std::string(text) + "' (file|alpha)");
}

std::vector<RequiredEntry> detection_entries(const RequiredStack& required, const EnvSnapshot& local,
                                             const KnowledgeGraph& kg, const DetectOptions& options) {
  std::vector<RequiredEntry> entries = required.entries;
  if (options.expand_implicit) {
    std::set<std::string> names;
    for (const auto& e : entries) names.insert(e.component);
    const std::set<std::string> explicit_names = names;
    for (const auto& c : local.components) {
      const auto& name = c.component.name;
      if (names.contains(name) || c.layer == StackLayer::Hardware || !c.component.version) continue;
      bool linked = false;
      for (const auto& node : kg.nodes_of(name)) {
        for (const auto* edge : kg.edges_of(node)) {
          const auto& other = edge->a.name == name ? edge->b : edge->a;
          if (explicit_names.contains(other.name)) linked = true;
        }
        if (linked) break;
      }
      if (!linked) continue;
      names.insert(name);
      entries.push_back(RequiredEntry{name, VersionConstraint::unbounded(), RequirementOrigin::Implicit});
    }
  }
  if (options.order == DetectionOrder::Alpha) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const RequiredEntry& a, const RequiredEntry& b) { return a.component < b.component; });
  }
  return entries;
}

IncompatibilityReport detect(const RequiredStack& required, const EnvSnapshot& local, const KnowledgeGraph& kg,
                             const DetectOptions& options) {
  return Search(detection_entries(required, local, kg, options), local, kg).run();
}

}  // namespace decide
