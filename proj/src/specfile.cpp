#include "iwasawa/specfile.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>
#include <toml.hpp>

#include "iwasawa/error.hpp"

namespace iwasawa::specfile {

namespace {

using nlohmann::json;
using LineMap = std::map<std::string, std::size_t>;

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

json from_toml(const toml::node& node, const std::string& path, LineMap& lines,
               const std::string& origin) {
  lines[path] = node.source().begin.line;
  if (const auto* table = node.as_table()) {
    json obj = json::object();
    for (const auto& [key, value] : *table) {
      const std::string name(key.str());
      obj[name] = from_toml(value, join(path, name), lines, origin);
    }
    return obj;
  }
  if (const auto* arr = node.as_array()) {
    json out = json::array();
    for (std::size_t i = 0; i < arr->size(); ++i) {
      out.push_back(from_toml(*arr->get(i), path + "[" + std::to_string(i) + "]", lines, origin));
    }
    return out;
  }
  if (const auto* v = node.as_integer()) return v->get();
  if (const auto* v = node.as_floating_point()) return v->get();
  if (const auto* v = node.as_boolean()) return v->get();
  if (const auto* v = node.as_string()) return v->get();
  fail(ErrorCode::ParseError, origin + ":" + std::to_string(node.source().begin.line) + ": key '" +
                                  path + "': date and time values are not supported");
}

struct Context {
  std::string origin;
  LineMap lines;

  [[noreturn]] void error(const std::string& path, const std::string& message) const {
    std::string where = origin;
    if (auto it = lines.find(path); it != lines.end()) where += ":" + std::to_string(it->second);
    fail(ErrorCode::ParseError, where + ": key '" + path + "': " + message);
  }
};

// Typed access to one table; every key read is recorded so leftovers can be
// reported as unknown.
class Table {
 public:
  Table(const json& obj, std::string path, const Context& ctx)
      : obj_(obj), path_(std::move(path)), ctx_(ctx) {
    if (!obj_.is_object()) ctx_.error(path_, "expected a table");
  }

  const std::string& path() const { return path_; }
  std::string key_path(const std::string& key) const { return join(path_, key); }
  bool has(const std::string& key) const { return obj_.contains(key); }

  const json* find(const std::string& key) {
    used_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  const json& require(const std::string& key) {
    const json* v = find(key);
    if (!v) ctx_.error(key_path(key), "required key is missing");
    return *v;
  }

  std::int64_t integer(const std::string& key) { return as_integer(require(key), key_path(key)); }

  std::optional<std::int64_t> opt_integer(const std::string& key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    return as_integer(*v, key_path(key));
  }

  std::uint64_t natural(const std::string& key) { return as_natural(require(key), key_path(key)); }

  std::optional<std::uint64_t> opt_natural(const std::string& key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    return as_natural(*v, key_path(key));
  }

  bool boolean(const std::string& key, bool fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_boolean()) ctx_.error(key_path(key), "expected true or false");
    return v->get<bool>();
  }

  std::optional<std::string> opt_string(const std::string& key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    if (!v->is_string()) ctx_.error(key_path(key), "expected a string");
    return v->get<std::string>();
  }

  std::vector<std::int64_t> integers(const json& v, const std::string& path) const {
    if (!v.is_array()) ctx_.error(path, "expected a list of integers");
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_integer(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
  }

  std::int64_t as_integer(const json& v, const std::string& path) const {
    if (!v.is_number_integer()) ctx_.error(path, "expected an integer");
    return v.get<std::int64_t>();
  }

  std::uint64_t as_natural(const json& v, const std::string& path) const {
    const std::int64_t x = as_integer(v, path);
    if (x < 0) ctx_.error(path, "must be nonnegative");
    return static_cast<std::uint64_t>(x);
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!used_.count(it.key())) ctx_.error(key_path(it.key()), "unknown key");
    }
  }

  const Context& ctx() const { return ctx_; }

 private:
  const json& obj_;
  std::string path_;
  const Context& ctx_;
  std::set<std::string> used_;
};

std::vector<const json*> table_array(const json* v, const std::string& path, const Context& ctx) {
  std::vector<const json*> out;
  if (!v) return out;
  if (!v->is_array()) ctx.error(path, "expected an array of tables");
  for (const auto& item : *v) out.push_back(&item);
  return out;
}

template <class F>
auto with_context(const Context& ctx, const std::string& path, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    std::string where = ctx.origin;
    if (auto it = ctx.lines.find(path); it != ctx.lines.end()) where += ":" + std::to_string(it->second);
    fail(e.code(), where + ": [" + path + "]: " + e.what());
  }
}

growth::TowerData decode_tower(Table& t, const json* steps_node, const json* trees_node) {
  const Context& ctx = t.ctx();
  growth::TowerData tower;
  tower.p = t.natural("p");
  const std::uint64_t d = t.natural("d");
  if (d < 2 || d > 64) ctx.error(t.key_path("d"), "must lie in [2, 64]");
  tower.d = static_cast<unsigned>(d);
  tower.lambda0 = t.opt_integer("lambda0").value_or(0);
  tower.s_cyc = t.natural("s_cyc");
  const std::uint64_t levels = t.natural("levels");
  if (levels < 1 || levels > 1000) ctx.error(t.key_path("levels"), "must lie in [1, 1000]");
  tower.levels = static_cast<unsigned>(levels);
  tower.mu0_zero = t.boolean("mu0_zero", true);
  t.finish();

  const std::size_t per_level = tower.d - 1;
  tower.steps.assign(tower.levels, std::vector<growth::StepData>(per_level));
  std::vector<bool> seen(tower.levels, false);
  bool any_ram = false;

  const auto step_tables = table_array(steps_node, "steps", ctx);
  for (std::size_t i = 0; i < step_tables.size(); ++i) {
    Table s(*step_tables[i], "steps[" + std::to_string(i) + "]", ctx);
    const std::uint64_t level = s.natural("level");
    if (level >= tower.levels) ctx.error(s.key_path("level"), "must be below levels = " + std::to_string(tower.levels));
    if (seen[level]) ctx.error(s.key_path("level"), "level " + std::to_string(level) + " given twice");
    seen[level] = true;
    auto& row = tower.steps[level];

    const json* deltas = s.find("deltas");
    const json* h1 = s.find("h1");
    const json* h2 = s.find("h2");
    if (deltas && (h1 || h2)) ctx.error(s.key_path("deltas"), "give either deltas or h1/h2, not both");
    if (!deltas && (!h1 || !h2)) {
      ctx.error(s.key_path(h1 ? "h2" : h2 ? "h1" : "deltas"), "required key is missing");
    }
    std::vector<std::int64_t> values;
    if (deltas) {
      values = s.integers(*deltas, s.key_path("deltas"));
    } else {
      const auto a = s.integers(*h1, s.key_path("h1"));
      const auto b = s.integers(*h2, s.key_path("h2"));
      if (a.size() != b.size()) ctx.error(s.key_path("h2"), "h1 and h2 differ in length");
      for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j] < 0 || b[j] < 0) ctx.error(s.key_path(a[j] < 0 ? "h1" : "h2"), "entries must be nonnegative");
        values.push_back(b[j] - a[j]);
      }
    }
    if (values.size() != per_level) {
      ctx.error(s.key_path(deltas ? "deltas" : "h1"),
                "needs d - 1 = " + std::to_string(per_level) + " entries, got " + std::to_string(values.size()));
    }
    for (std::size_t j = 0; j < per_level; ++j) row[j].delta = values[j];

    if (const json* ram = s.find("ram")) {
      any_ram = true;
      const std::string path = s.key_path("ram");
      if (!ram->is_array() || ram->size() != per_level) {
        ctx.error(path, "needs one list of ramification indices per sub-step (" + std::to_string(per_level) + ")");
      }
      for (std::size_t j = 0; j < per_level; ++j) {
        std::vector<std::uint64_t> events;
        const std::string sub = path + "[" + std::to_string(j) + "]";
        for (std::int64_t e : s.integers((*ram)[j], sub)) {
          if (e < 1) ctx.error(sub, "ramification indices are positive");
          events.push_back(static_cast<std::uint64_t>(e));
        }
        row[j].ram_events = std::move(events);
      }
    }
    s.finish();
  }

  const auto tree_tables = table_array(trees_node, "tree", ctx);
  if (trees_node) {
    if (any_ram) ctx.error("tree", "ramification is given both in [[steps]] and [[tree]]");
    std::vector<growth::RamTree> trees;
    for (std::size_t i = 0; i < tree_tables.size(); ++i) {
      Table tt(*tree_tables[i], "tree[" + std::to_string(i) + "]", ctx);
      const json& layers = tt.require("layers");
      const std::string path = tt.key_path("layers");
      if (!layers.is_array()) ctx.error(path, "expected a list of strings");
      std::vector<std::string> strings;
      for (const auto& l : layers) {
        if (!l.is_string()) ctx.error(path, "expected a list of strings");
        strings.push_back(l.get<std::string>());
      }
      trees.push_back(with_context(ctx, path, [&] { return growth::tree_from_strings(strings); }));
      tt.finish();
    }
    tower.trees = std::move(trees);
  } else if (tower.s_cyc == 0) {
    // No primes to track: every step has an empty ramification list.
    for (std::size_t n = 0; n < tower.levels; ++n) {
      for (auto& step : tower.steps[n]) {
        if (!step.ram_events) step.ram_events = std::vector<std::uint64_t>{};
      }
    }
  }

  with_context(ctx, "tower", [&] {
    growth::validate(tower);
    return 0;
  });
  return tower;
}

scenarios::DeltaPolicy decode_delta_policy(Table& t) {
  const std::string kind = t.opt_string("delta_policy").value_or("zero");
  const std::string path = t.key_path("delta_policy");
  if (kind == "zero") return scenarios::DeltaPolicy::zero();
  if (kind == "constant") return scenarios::DeltaPolicy::constant_value(t.integer("delta"));
  if (kind == "list") return scenarios::DeltaPolicy::list(t.integers(t.require("deltas"), t.key_path("deltas")));
  if (kind == "uniform") {
    const auto range = t.integers(t.require("delta_range"), t.key_path("delta_range"));
    if (range.size() != 2 || range[0] > range[1]) {
      t.ctx().error(t.key_path("delta_range"), "expected [lo, hi] with lo <= hi");
    }
    return scenarios::DeltaPolicy::uniform(range[0], range[1]);
  }
  t.ctx().error(path, "unknown policy '" + kind + "' (expected zero, constant, list or uniform)");
}

scenarios::ScenarioSpec decode_scenario(Table& t) {
  const Context& ctx = t.ctx();
  scenarios::ScenarioSpec spec;
  const auto kind = t.opt_string("kind");
  if (!kind) ctx.error(t.key_path("kind"), "required key is missing");
  if (*kind == "false_tate") {
    spec.kind = scenarios::ScenarioSpec::Kind::FalseTate;
  } else if (*kind == "elliptic_gamma") {
    spec.kind = scenarios::ScenarioSpec::Kind::EllipticGamma;
  } else if (*kind == "random") {
    spec.kind = scenarios::ScenarioSpec::Kind::Random;
  } else {
    ctx.error(t.key_path("kind"), "unknown kind '" + *kind + "' (expected false_tate, elliptic_gamma or random)");
  }

  spec.p = t.opt_natural("p").value_or(3);
  const std::uint64_t levels = t.opt_natural("levels").value_or(3);
  if (levels < 1 || levels > 1000) ctx.error(t.key_path("levels"), "must lie in [1, 1000]");
  spec.levels = static_cast<unsigned>(levels);
  spec.options.seed = t.opt_natural("seed").value_or(0);
  spec.deltas = decode_delta_policy(t);

  using Kind = scenarios::ScenarioSpec::Kind;
  if (spec.kind != Kind::Random) {
    spec.options.lambda0 = t.opt_integer("lambda0").value_or(0);
    spec.s_cyc = t.opt_natural("s_cyc");
    if (auto ram = t.opt_string("ram")) {
      try {
        spec.options.ram = scenarios::ram_policy_from_string(*ram);
      } catch (const Error& e) {
        ctx.error(t.key_path("ram"), e.what());
      }
    }
  }
  if (spec.kind == Kind::FalseTate) {
    spec.ell = t.natural("ell");
    spec.reference_s_cyc = t.opt_natural("reference_s_cyc");
  }
  if (spec.kind == Kind::EllipticGamma) {
    if (const json* bad = t.find("bad_primes")) {
      for (std::int64_t v : t.integers(*bad, t.key_path("bad_primes"))) {
        if (v < 2) ctx.error(t.key_path("bad_primes"), "entries must be primes");
        spec.bad_primes.push_back(static_cast<std::uint64_t>(v));
      }
    }
    if (!spec.s_cyc) ctx.error(t.key_path("s_cyc"), "required for elliptic_gamma (splitting in Q(E[p]) is not computed)");
  }
  if (spec.kind == Kind::Random) {
    const std::uint64_t d = t.opt_natural("d").value_or(2);
    if (d < 2 || d > 64) ctx.error(t.key_path("d"), "must lie in [2, 64]");
    spec.d = static_cast<unsigned>(d);
    if (spec.deltas.kind == scenarios::DeltaPolicy::Kind::List) {
      ctx.error(t.key_path("delta_policy"), "random towers take zero, constant or uniform");
    }
  }
  t.finish();
  return spec;
}

}  // namespace

SpecFile parse(std::string_view text, Syntax syntax, const std::string& origin) {
  Context ctx;
  ctx.origin = origin;
  json doc;
  if (syntax == Syntax::Toml) {
    try {
      const toml::table table = toml::parse(text, origin);
      doc = from_toml(table, "", ctx.lines, origin);
    } catch (const toml::parse_error& e) {
      fail(ErrorCode::ParseError, origin + ":" + std::to_string(e.source().begin.line) + ": " +
                                      std::string(e.description()));
    }
  } else {
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      fail(ErrorCode::ParseError, origin + ": " + e.what());
    }
  }

  Table root(doc, "", ctx);
  SpecFile spec;
  const json* tower = root.find("tower");
  const json* scenario = root.find("scenario");
  const json* steps = root.find("steps");
  const json* trees = root.find("tree");
  if (tower && scenario) ctx.error("scenario", "give either [tower] or [scenario], not both");
  if (!tower && !scenario) ctx.error("tower", "one of [tower] or [scenario] is required");
  if (scenario && (steps || trees)) {
    ctx.error(steps ? "steps" : "tree", "only allowed together with [tower]");
  }

  if (tower) {
    Table t(*tower, "tower", ctx);
    spec.scenario.kind = scenarios::ScenarioSpec::Kind::Custom;
    spec.scenario.custom = decode_tower(t, steps, trees);
  } else {
    Table t(*scenario, "scenario", ctx);
    spec.scenario = decode_scenario(t);
  }

  if (const json* output = root.find("output")) {
    Table o(*output, "output", ctx);
    if (auto format = o.opt_string("format")) {
      try {
        spec.format = report::format_from_string(*format);
      } catch (const Error& e) {
        ctx.error(o.key_path("format"), e.what());
      }
    }
    spec.output_path = o.opt_string("path");
    o.finish();
  }
  root.finish();
  return spec;
}

SpecFile load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::InvalidArgument, "cannot read spec file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const bool is_json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  return parse(buf.str(), is_json ? Syntax::Json : Syntax::Toml, path);
}

}  // namespace iwasawa::specfile
