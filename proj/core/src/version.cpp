#include "decide/version.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>

#include "decide/error.hpp"

namespace decide {

namespace {

constexpr const char* kModule = "core-model";

std::optional<std::uint32_t> parse_segment(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::uint32_t segment_at(const Version& v, std::size_t i) {
  return i < v.segments.size() ? v.segments[i] : 0;
}

}  // namespace

std::string Version::str() const {
  std::string out;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(segments[i]);
  }
  if (wildcard) out += ".x";
  return out;
}

std::optional<Version> try_parse_version(std::string_view text) {
  if (!text.empty() && (text.front() == 'v' || text.front() == 'V')) text.remove_prefix(1);
  if (text.empty()) return std::nullopt;

  Version v;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto dot = text.find('.', start);
    auto part = text.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
    bool last = dot == std::string_view::npos;
    if (last && (part == "x" || part == "X") && !v.segments.empty()) {
      v.wildcard = true;
    } else {
      auto seg = parse_segment(part);
      if (!seg) return std::nullopt;
      v.segments.push_back(*seg);
    }
    if (last) break;
    start = dot + 1;
  }
  if (v.segments.empty() || v.segments.size() > 3) return std::nullopt;
  return v;
}

Version parse_version(std::string_view text) {
  auto v = try_parse_version(text);
  if (!v) throw ParseError(kModule, "malformed version '" + std::string(text) + "'");
  return *v;
}

std::strong_ordering compare_versions(const Version& a, const Version& b) {
  auto n = std::max(a.segments.size(), b.segments.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = segment_at(a, i) <=> segment_at(b, i); c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::strong_ordering key_order(const Version& a, const Version& b) {
  if (auto c = compare_versions(a, b); c != 0) return c;
  if (auto c = a.wildcard <=> b.wildcard; c != 0) return c;
  return a.segments.size() <=> b.segments.size();
}

VersionConstraint VersionConstraint::exactly(const Version& v) {
  return VersionConstraint{VersionBound{v, true}, VersionBound{v, true}, false};
}

VersionConstraint VersionConstraint::between(const Version& lo, const Version& hi) {
  if (compare_versions(lo, hi) > 0)
    throw ContractViolation(kModule, "constraint lower bound " + lo.str() + " exceeds upper " + hi.str());
  return VersionConstraint{VersionBound{lo, true}, VersionBound{hi, true}, false};
}

VersionConstraint VersionConstraint::nothing() {
  return VersionConstraint{std::nullopt, std::nullopt, true};
}

bool VersionConstraint::is_point() const {
  return !empty && lower && upper && lower->inclusive && upper->inclusive &&
         compare_versions(lower->version, upper->version) == 0;
}

std::string VersionConstraint::str() const {
  if (empty) return "<empty>";
  if (is_unbounded()) return "*";
  if (is_point()) return "==" + lower->version.str();
  std::string out;
  if (lower) out += (lower->inclusive ? ">=" : ">") + lower->version.str();
  if (upper) {
    if (!out.empty()) out += ',';
    out += (upper->inclusive ? "<=" : "<") + upper->version.str();
  }
  return out;
}

VersionConstraint intersect(const VersionConstraint& a, const VersionConstraint& b) {
  if (a.empty || b.empty) return VersionConstraint::nothing();

  VersionConstraint out;
  out.lower = a.lower;
  if (b.lower) {
    if (!out.lower) {
      out.lower = b.lower;
    } else {
      auto c = compare_versions(b.lower->version, out.lower->version);
      if (c > 0) out.lower = b.lower;
      else if (c == 0) out.lower->inclusive = out.lower->inclusive && b.lower->inclusive;
    }
  }
  out.upper = a.upper;
  if (b.upper) {
    if (!out.upper) {
      out.upper = b.upper;
    } else {
      auto c = compare_versions(b.upper->version, out.upper->version);
      if (c < 0) out.upper = b.upper;
      else if (c == 0) out.upper->inclusive = out.upper->inclusive && b.upper->inclusive;
    }
  }
  if (out.lower && out.upper) {
    auto c = compare_versions(out.lower->version, out.upper->version);
    if (c > 0 || (c == 0 && !(out.lower->inclusive && out.upper->inclusive)))
      return VersionConstraint::nothing();
  }
  return out;
}

bool version_satisfies(const Version& v, const VersionConstraint& c) {
  if (v.wildcard)
    throw ContractViolation(kModule, "cannot test wildcard version " + v.str() + " against a constraint");
  if (c.empty) return false;
  if (c.lower) {
    auto cmp = compare_versions(v, c.lower->version);
    if (cmp < 0 || (cmp == 0 && !c.lower->inclusive)) return false;
  }
  if (c.upper) {
    auto cmp = compare_versions(v, c.upper->version);
    if (cmp > 0 || (cmp == 0 && !c.upper->inclusive)) return false;
  }
  return true;
}

bool version_unifies(const Version& concrete, const Version& pattern) {
  if (concrete.wildcard)
    return pattern.wildcard && compare_versions(concrete, pattern) == 0 &&
           concrete.segments.size() == pattern.segments.size();
  if (!pattern.wildcard) return compare_versions(concrete, pattern) == 0;
  for (std::size_t i = 0; i < pattern.segments.size(); ++i) {
    if (segment_at(concrete, i) != pattern.segments[i]) return false;
  }
  return true;
}

std::optional<LooseVersion> parse_loose_version(std::string_view text) {
  std::size_t i = 0;
  if (i < text.size() && (text[i] == 'v' || text[i] == 'V')) ++i;
  LooseVersion out;
  while (true) {
    auto start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == start) return std::nullopt;
    if (out.version.segments.size() < 3) {
      std::uint32_t value = 0;
      auto [ptr, ec] = std::from_chars(text.data() + start, text.data() + i, value);
      if (ec != std::errc{} || ptr != text.data() + i) return std::nullopt;
      out.version.segments.push_back(value);
    } else {
      out.truncated = true;
    }
    if (i + 1 < text.size() && text[i] == '.' && std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
      ++i;
      continue;
    }
    break;
  }
  out.suffix = std::string(text.substr(i));
  return out;
}

}  // namespace decide
