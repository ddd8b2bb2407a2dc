#pragma once

// Small string helpers shared by the parsers. Not part of the public API.

#include <string>
#include <string_view>
#include <vector>

namespace decide::text {

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);
/// Lines without their terminators; a trailing '\r' is dropped.
std::vector<std::string_view> lines(std::string_view s);
bool starts_with_icase(std::string_view s, std::string_view prefix);

/// Decodes named (&lt; &gt; &amp; &quot; &apos; &nbsp;) and numeric character
/// references. Unknown entities are kept verbatim.
std::string decode_entities(std::string_view s);

/// Collapses whitespace runs to one space and trims the ends.
std::string squeeze_spaces(std::string_view s);

/// Reads a whole file; throws IoError naming `module` on failure.
std::string read_file(const std::string& path, const char* module);

/// Config list files: one item per line, '#' comments and blanks skipped.
std::vector<std::string> config_lines(std::string_view s);

}  // namespace decide::text
