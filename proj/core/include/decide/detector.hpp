#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "decide/env.hpp"
#include "decide/kg_builder.hpp"
#include "decide/knowledge_graph.hpp"
#include "decide/project.hpp"

namespace decide {

enum class IssueKind { ConstraintViolation, GraphIncompatibility, Unsatisfiable };

std::string_view to_string(IssueKind kind);
IssueKind parse_issue_kind(std::string_view text);

struct Issue {
  IssueKind kind = IssueKind::GraphIncompatibility;
  RequiredEntry subject;
  /// The subject's locally installed version, if any.
  std::optional<VersionedComponent> installed;
  /// The installed or already chosen component it clashes with.
  std::optional<VersionedComponent> conflicting;
  std::optional<Version> suggested_version;
  /// Posts behind the incompatible edge (graph-incompatibility only).
  std::vector<std::int64_t> evidence_posts;
  /// Posts behind compatible edges of the suggested version.
  std::vector<std::int64_t> suggestion_evidence_posts;

  friend bool operator==(const Issue&, const Issue&) = default;
};

enum class AssignmentSource { Installed, Suggested, Unknown };

std::string_view to_string(AssignmentSource source);

struct Assignment {
  std::string component;
  /// nullopt when the graph knows no version of the component in range.
  std::optional<Version> version;
  AssignmentSource source = AssignmentSource::Suggested;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct IncompatibilityReport {
  std::vector<Issue> issues;
  bool satisfiable = true;
  /// One per processed required entry when satisfiable.
  std::vector<Assignment> assignments;

  friend bool operator==(const IncompatibilityReport&, const IncompatibilityReport&) = default;
};

enum class DetectionOrder { File, Alpha };

DetectionOrder parse_detection_order(std::string_view text);

struct DetectOptions {
  DetectionOrder order = DetectionOrder::File;
  /// Treat installed components that the graph links to a required
  /// component as required too (unbounded), so their versions can be
  /// checked and fixes suggested for them.
  bool expand_implicit = true;
};

/// Entries in processing order, after implicit expansion.
std::vector<RequiredEntry> detection_entries(const RequiredStack& required, const EnvSnapshot& local,
                                             const KnowledgeGraph& kg, const DetectOptions& options);

/// Walks the entries in order choosing a version for each:
///  - an installed version inside the constraint that clashes with nothing
///    is kept as is;
///  - otherwise the graph's versions inside the constraint are tried from
///    the latest down, skipping any with an incompatible edge to an
///    installed component or to an earlier choice;
///  - with no known version in range the entry stays unconstrained (a
///    pinned constraint uses its pin).
/// A dead end backtracks to the previous entry's next candidate; running out
/// of entries gives an unsatisfiable report. Installed versions of entries
/// not yet reached never block a candidate, and unknown relations never do.
IncompatibilityReport detect(const RequiredStack& required, const EnvSnapshot& local, const KnowledgeGraph& kg,
                             const DetectOptions& options = {});

enum class ReportFormat { Text, Json };

ReportFormat parse_report_format(std::string_view text);

std::string render_report(const IncompatibilityReport& report, ReportFormat format);
/// Inverse of the json rendering. Throws FormatError.
IncompatibilityReport report_from_json(std::string_view json_text);

std::string post_url(std::int64_t post_id);

}  // namespace decide
