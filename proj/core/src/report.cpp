#include <sstream>

#include "decide/detector.hpp"
#include "decide/error.hpp"
#include "json.hpp"

namespace decide {

namespace {

constexpr const char* kModule = "detector";

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

ordered_json bound_json(const std::optional<VersionBound>& b) {
  if (!b) return nullptr;
  return ordered_json{{"version", b->version.str()}, {"inclusive", b->inclusive}};
}

ordered_json component_json(const std::optional<VersionedComponent>& c) {
  if (!c) return nullptr;
  ordered_json j{{"name", c->name}};
  j["version"] = c->version ? ordered_json(c->version->str()) : ordered_json(nullptr);
  return j;
}

std::optional<VersionBound> bound_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return VersionBound{parse_version(j.at("version").get<std::string>()), j.at("inclusive").get<bool>()};
}

std::optional<VersionedComponent> component_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  VersionedComponent c{j.at("name").get<std::string>(), std::nullopt};
  if (!j.at("version").is_null()) c.version = parse_version(j["version"].get<std::string>());
  return c;
}

std::optional<Version> version_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return parse_version(j.get<std::string>());
}

RequirementOrigin parse_origin(std::string_view s) {
  if (s == "requirements-file") return RequirementOrigin::RequirementsFile;
  if (s == "import-scan") return RequirementOrigin::ImportScan;
  if (s == "implicit") return RequirementOrigin::Implicit;
  throw FormatError(kModule, "unknown origin '" + std::string(s) + "'");
}

AssignmentSource parse_source(std::string_view s) {
  if (s == "installed") return AssignmentSource::Installed;
  if (s == "suggested") return AssignmentSource::Suggested;
  if (s == "unknown") return AssignmentSource::Unknown;
  throw FormatError(kModule, "unknown assignment source '" + std::string(s) + "'");
}

std::string render_text(const IncompatibilityReport& report) {
  std::ostringstream out;
  if (report.issues.empty() && report.satisfiable) {
    out << "No version incompatibilities detected.\n";
    return out.str();
  }
  if (report.issues.size() == 1) {
    out << "1 potential version incompatibility found.\n";
  } else {
    out << report.issues.size() << " potential version incompatibilities found.\n";
  }
  for (const auto& issue : report.issues) {
    out << "\n[" << to_string(issue.kind) << "] " << issue.subject.component << " " << issue.subject.constraint.str()
        << " (" << to_string(issue.subject.origin) << ")\n";
    if (issue.installed) out << "  installed: " << issue.installed->str() << "\n";
    if (issue.conflicting) out << "  incompatible with: " << issue.conflicting->str() << "\n";
    for (auto post : issue.evidence_posts) out << "    " << post_url(post) << "\n";
    if (issue.suggested_version) {
      out << "  suggestion: " << issue.subject.component << " " << issue.suggested_version->str() << "\n";
      for (auto post : issue.suggestion_evidence_posts) out << "    " << post_url(post) << "\n";
    } else {
      out << "  suggestion: none found\n";
    }
  }
  out << "\n";
  if (report.satisfiable) {
    out << "Resolution:\n";
    for (const auto& a : report.assignments) {
      out << "  " << a.component << " " << (a.version ? a.version->str() : "(any)") << " [" << to_string(a.source)
          << "]\n";
    }
  } else {
    out << "Resolution: no solution can be found.\n";
  }
  return out.str();
}

std::string render_json(const IncompatibilityReport& report) {
  ordered_json doc;
  auto issues = ordered_json::array();
  for (const auto& issue : report.issues) {
    ordered_json subject{{"component", issue.subject.component},
                         {"constraint",
                          ordered_json{{"lower", bound_json(issue.subject.constraint.lower)},
                                       {"upper", bound_json(issue.subject.constraint.upper)},
                                       {"empty", issue.subject.constraint.empty}}},
                         {"origin", to_string(issue.subject.origin)}};
    ordered_json j{{"kind", to_string(issue.kind)}, {"subject", std::move(subject)}};
    j["installed"] = component_json(issue.installed);
    j["conflicting"] = component_json(issue.conflicting);
    j["suggested_version"] = issue.suggested_version ? ordered_json(issue.suggested_version->str()) : ordered_json(nullptr);
    j["evidence_posts"] = issue.evidence_posts;
    j["suggestion_evidence_posts"] = issue.suggestion_evidence_posts;
    issues.push_back(std::move(j));
  }
  doc["issues"] = std::move(issues);

  ordered_json resolution{{"status", report.satisfiable ? "satisfiable" : "no-solution"}};
  auto assignments = ordered_json::array();
  for (const auto& a : report.assignments) {
    ordered_json j{{"component", a.component}};
    j["version"] = a.version ? ordered_json(a.version->str()) : ordered_json(nullptr);
    j["source"] = to_string(a.source);
    assignments.push_back(std::move(j));
  }
  resolution["assignments"] = std::move(assignments);
  doc["resolution"] = std::move(resolution);
  return doc.dump(2) + "\n";
}

}  // namespace

std::string post_url(std::int64_t post_id) { return "https://stackoverflow.com/questions/" + std::to_string(post_id); }

ReportFormat parse_report_format(std::string_view text) {
  if (text == "text") return ReportFormat::Text;
  if (text == "json") return ReportFormat::Json;
  throw ConfigError(kModule, "unknown format '" + std::string(text) + "' (text|json)");
}

std::string render_report(const IncompatibilityReport& report, ReportFormat format) {
  return format == ReportFormat::Json ? render_json(report) : render_text(report);
}

IncompatibilityReport report_from_json(std::string_view json_text) {
  IncompatibilityReport report;
  try {
    auto doc = json::parse(json_text);
    for (const auto& j : doc.at("issues")) {
      Issue issue;
      issue.kind = parse_issue_kind(j.at("kind").get<std::string>());
      const auto& subject = j.at("subject");
      issue.subject.component = subject.at("component").get<std::string>();
      const auto& c = subject.at("constraint");
      issue.subject.constraint.lower = bound_from(c.at("lower"));
      issue.subject.constraint.upper = bound_from(c.at("upper"));
      issue.subject.constraint.empty = c.at("empty").get<bool>();
      issue.subject.origin = parse_origin(subject.at("origin").get<std::string>());
      issue.installed = component_from(j.at("installed"));
      issue.conflicting = component_from(j.at("conflicting"));
      issue.suggested_version = version_from(j.at("suggested_version"));
      issue.evidence_posts = j.at("evidence_posts").get<std::vector<std::int64_t>>();
      issue.suggestion_evidence_posts = j.at("suggestion_evidence_posts").get<std::vector<std::int64_t>>();
      report.issues.push_back(std::move(issue));
    }
    const auto& resolution = doc.at("resolution");
    auto status = resolution.at("status").get<std::string>();
    if (status != "satisfiable" && status != "no-solution") throw FormatError(kModule, "unknown status '" + status + "'");
    report.satisfiable = status == "satisfiable";
    for (const auto& a : resolution.at("assignments")) {
      report.assignments.push_back(Assignment{a.at("component").get<std::string>(), version_from(a.at("version")),
                                              parse_source(a.at("source").get<std::string>())});
    }
  } catch (const json::exception& e) {
    throw FormatError(kModule, std::string("malformed report: ") + e.what());
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(kModule, std::string("malformed report: ") + e.what());
  }
  return report;
}

}  // namespace decide
