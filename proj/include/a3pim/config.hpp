#pragma once

#include <string>
#include <string_view>

#include "a3pim/scheduler.hpp"

namespace a3pim {

/// Flat key=value config text, one pair per line, '#' comments. Every key is
/// optional and falls back to its default; unknown keys or bad values throw
/// ParseError. See dump_config() for the full key list.
ToolkitConfig parse_config(std::string_view text);

/// Serializes every setting in a fixed order; output parses back to an
/// identical config.
std::string dump_config(const ToolkitConfig& cfg);

}  // namespace a3pim
