#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "iwasawa/growth.hpp"
#include "iwasawa/report.hpp"
#include "iwasawa/scenarios.hpp"

// Tower description files. TOML is the primary syntax; a JSON document with
// the same structure is accepted too. Exactly one of [tower] or [scenario]
// must be present.
//
//   [tower]      p, d, lambda0, s_cyc, levels, mu0_zero
//   [[steps]]    level, deltas | (h1, h2), ram (one list of e(w) per sub-step)
//   [[tree]]     layers = ["s", "rri", ...]  (one table per prime of S(F^cyc))
//   [scenario]   kind = false_tate | elliptic_gamma | random, plus parameters
//   [output]     format = table | json | csv, path

namespace iwasawa::specfile {

enum class Syntax { Toml, Json };

struct SpecFile {
  scenarios::ScenarioSpec scenario;  // kind Custom when the file has [tower]
  std::optional<report::Format> format;
  std::optional<std::string> output_path;
};

/// Throws ParseError naming the key (and line for TOML) on malformed input.
SpecFile parse(std::string_view text, Syntax syntax, const std::string& origin = "<input>");

/// Picks the syntax from the extension (.json) and reads the file.
SpecFile load(const std::string& path);

}  // namespace iwasawa::specfile
