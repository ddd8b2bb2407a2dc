#pragma once

#include <string_view>

// Default configuration files compiled into the library.
namespace decide::config {

std::string_view default_components_json();
std::string_view default_dl_tags();
std::string_view default_patterns();
std::string_view python_stdlib_modules();

}  // namespace decide::config
