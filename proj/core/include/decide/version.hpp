#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace decide {

/// A dotted numeric version such as `1.13`, `2.4.3` or the wildcard `1.3.x`.
///
/// Segments hold only concrete numbers; a trailing `.x` sets `wildcard` and
/// is not stored as a segment. Between one and three segments.
struct Version {
  std::vector<std::uint32_t> segments;
  bool wildcard = false;

  /// Normalized text: segments joined by '.', plus ".x" for wildcards.
  std::string str() const;

  friend bool operator==(const Version&, const Version&) = default;
};

/// Parses `v2.3`, `3`, `1.3.x`, ... Throws ParseError on anything else.
Version parse_version(std::string_view text);

/// Non-throwing variant of parse_version.
std::optional<Version> try_parse_version(std::string_view text);

/// Numeric segment comparison with missing trailing segments read as zero.
/// The wildcard flag does not participate.
std::strong_ordering compare_versions(const Version& a, const Version& b);

/// Total order used for storage keys: compare_versions, then concrete before
/// wildcard, then fewer segments first. Distinguishes `2.0` from `2.0.0`.
std::strong_ordering key_order(const Version& a, const Version& b);

struct VersionBound {
  Version version;
  bool inclusive = true;

  friend bool operator==(const VersionBound&, const VersionBound&) = default;
};

/// Interval of acceptable versions. Absent bounds are unbounded. An `empty`
/// constraint admits nothing; it is what conflicting specifiers collapse to.
struct VersionConstraint {
  std::optional<VersionBound> lower;
  std::optional<VersionBound> upper;
  bool empty = false;

  static VersionConstraint unbounded() { return {}; }
  static VersionConstraint exactly(const Version& v);
  static VersionConstraint between(const Version& lo, const Version& hi);
  static VersionConstraint nothing();

  bool is_unbounded() const { return !empty && !lower && !upper; }
  /// True when the constraint pins a single version ([v, v]).
  bool is_point() const;

  /// Specifier-style rendering: `==1.15`, `>=1.14,<2.0`, `*`, `<empty>`.
  std::string str() const;

  friend bool operator==(const VersionConstraint&, const VersionConstraint&) = default;
};

/// Intersection of two constraints. Collapses to `nothing()` when the result
/// would have lower > upper (or an open point interval).
VersionConstraint intersect(const VersionConstraint& a, const VersionConstraint& b);

/// Range membership honoring the inclusivity flags. Throws
/// ContractViolation when `v` is a wildcard.
bool version_satisfies(const Version& v, const VersionConstraint& c);

/// Leading numeric release of a package version string ("1.15.0+cu101",
/// "2.0.0rc1", "2022.10.31.1"). `suffix` is what followed the release and
/// `truncated` is set when segments past the third were dropped.
struct LooseVersion {
  Version version;
  std::string suffix;
  bool truncated = false;
};
std::optional<LooseVersion> parse_loose_version(std::string_view text);

/// True when the concrete version `concrete` is an instance of `pattern`:
/// prefix match for wildcard patterns, zero-padded equality otherwise.
bool version_unifies(const Version& concrete, const Version& pattern);

}  // namespace decide
