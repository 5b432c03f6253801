#include "iwasawa/report.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include <json.hpp>

#include "iwasawa/error.hpp"

namespace iwasawa::report {

using growth::BigInt;
using growth::GrowthReport;
using growth::ReportRow;

Format format_from_string(std::string_view name) {
  if (name == "table") return Format::Table;
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  fail(ErrorCode::InvalidArgument, "unknown format '" + std::string(name) + "' (expected table, json or csv)");
}

std::string to_string(Format format) {
  switch (format) {
    case Format::Table: return "table";
    case Format::Json: return "json";
    case Format::Csv: return "csv";
  }
  return "?";
}

const std::vector<std::string>& column_names() {
  static const std::vector<std::string> names{
      "n",       "lambda_exact", "B_n",         "C_n",         "xi_minus",    "xi_plus",
      "bound_lower", "bound_upper", "proof_lower", "proof_upper", "ratio"};
  return names;
}

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

// Cells of one row in column order; nullopt marks a missing value.
std::vector<std::optional<std::string>> cells(const ReportRow& row) {
  auto big = [](const std::optional<BigInt>& v) -> std::optional<std::string> {
    if (!v) return std::nullopt;
    return v->get_str();
  };
  return {std::to_string(row.n),
          big(row.lambda_exact),
          big(row.B_n),
          row.C_n.get_str(),
          std::to_string(row.xi_minus),
          std::to_string(row.xi_plus),
          row.bound_lower.get_str(),
          row.bound_upper.get_str(),
          row.proof_lower.get_str(),
          row.proof_upper.get_str(),
          row.ratio ? std::optional<std::string>(format_double(*row.ratio)) : std::nullopt};
}

std::string quote(const std::string& s) { return nlohmann::json(s).dump(); }

}  // namespace

std::string render_table(const GrowthReport& report) {
  std::ostringstream out;
  out << "# p = " << report.p << ", d = " << report.d << ", lambda0 = " << report.lambda0
      << ", s_cyc = " << report.s_cyc << ", levels = " << report.levels << "\n";
  out << "# ramification: " << (report.ram_from_trees ? "from trees" : "as given") << "\n";
  for (const auto& [key, value] : report.notes) out << "# " << key << ": " << value << "\n";
  out << "# mu = 0 assumed, so A_n is (Q_p/Z_p)^lambda_n with no bounded part\n";

  const auto& names = column_names();
  std::vector<std::vector<std::string>> grid;
  grid.push_back(names);
  for (const auto& row : report.rows) {
    std::vector<std::string> line;
    for (const auto& cell : cells(row)) line.push_back(cell.value_or("-"));
    grid.push_back(std::move(line));
  }
  std::vector<std::size_t> width(names.size(), 0);
  for (const auto& line : grid) {
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  }
  for (const auto& line : grid) {
    std::string text;
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c) text += "  ";
      text += std::string(width[c] - line[c].size(), ' ') + line[c];
    }
    out << text << "\n";
  }
  if (report.violations.empty()) {
    out << "# violations: none\n";
  } else {
    for (const auto& v : report.violations) out << "# VIOLATION " << v << "\n";
  }
  return out.str();
}

std::string render_json(const GrowthReport& report) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"p\": " << report.p << ",\n";
  out << "  \"d\": " << report.d << ",\n";
  out << "  \"lambda0\": " << report.lambda0 << ",\n";
  out << "  \"s_cyc\": " << report.s_cyc << ",\n";
  out << "  \"levels\": " << report.levels << ",\n";
  out << "  \"ram_from_trees\": " << (report.ram_from_trees ? "true" : "false") << ",\n";
  out << "  \"notes\": [";
  for (std::size_t i = 0; i < report.notes.size(); ++i) {
    out << (i ? ",\n    " : "\n    ") << "[" << quote(report.notes[i].first) << ", "
        << quote(report.notes[i].second) << "]";
  }
  out << (report.notes.empty() ? "],\n" : "\n  ],\n");
  out << "  \"rows\": [";
  const auto& names = column_names();
  for (std::size_t r = 0; r < report.rows.size(); ++r) {
    out << (r ? ",\n    {" : "\n    {");
    const auto row = cells(report.rows[r]);
    for (std::size_t c = 0; c < names.size(); ++c) {
      out << (c ? ", " : "") << quote(names[c]) << ": " << row[c].value_or("null");
    }
    out << "}";
  }
  out << (report.rows.empty() ? "],\n" : "\n  ],\n");
  out << "  \"violations\": [";
  for (std::size_t i = 0; i < report.violations.size(); ++i) {
    out << (i ? ", " : "") << quote(report.violations[i]);
  }
  out << "]\n}\n";
  return out.str();
}

std::string render_csv(const GrowthReport& report) {
  std::string out;
  const auto& names = column_names();
  for (std::size_t c = 0; c < names.size(); ++c) out += (c ? "," : "") + names[c];
  out += "\n";
  for (const auto& row : report.rows) {
    const auto line = cells(row);
    for (std::size_t c = 0; c < line.size(); ++c) out += (c ? "," : "") + line[c].value_or("null");
    out += "\n";
  }
  return out;
}

std::string render(const GrowthReport& report, Format format) {
  switch (format) {
    case Format::Table: return render_table(report);
    case Format::Json: return render_json(report);
    case Format::Csv: return render_csv(report);
  }
  return {};
}

namespace {

// Minimal document tree that keeps numbers as their source text.
struct Node {
  enum class Kind { Null, Bool, Number, String, Array, Object };
  Kind kind = Kind::Null;
  bool flag = false;
  std::string text;
  std::vector<Node> items;
  std::vector<std::pair<std::string, Node>> members;

  const Node& at(const std::string& key) const {
    for (const auto& [k, v] : members) {
      if (k == key) return v;
    }
    fail(ErrorCode::ParseError, "missing key '" + key + "'");
  }
};

class RawSax : public nlohmann::json_sax<nlohmann::json> {
 public:
  Node root;

  bool null() override { return put(Node{}); }
  bool boolean(bool val) override {
    Node n;
    n.kind = Node::Kind::Bool;
    n.flag = val;
    return put(std::move(n));
  }
  bool number_integer(number_integer_t val) override { return number(std::to_string(val)); }
  bool number_unsigned(number_unsigned_t val) override { return number(std::to_string(val)); }
  bool number_float(number_float_t, const string_t& s) override { return number(s); }
  bool string(string_t& val) override {
    Node n;
    n.kind = Node::Kind::String;
    n.text = val;
    return put(std::move(n));
  }
  bool binary(binary_t&) override { return false; }
  bool start_object(std::size_t) override {
    Node n;
    n.kind = Node::Kind::Object;
    put(std::move(n));
    stack_.push_back(last_);
    return true;
  }
  bool key(string_t& val) override {
    pending_key_ = val;
    return true;
  }
  bool end_object() override {
    stack_.pop_back();
    return true;
  }
  bool start_array(std::size_t) override {
    Node n;
    n.kind = Node::Kind::Array;
    put(std::move(n));
    stack_.push_back(last_);
    return true;
  }
  bool end_array() override {
    stack_.pop_back();
    return true;
  }
  bool parse_error(std::size_t position, const std::string& last_token,
                   const nlohmann::detail::exception& ex) override {
    fail(ErrorCode::ParseError, "invalid JSON near byte " + std::to_string(position) + " ('" +
                                    last_token + "'): " + ex.what());
  }

 private:
  std::vector<Node*> stack_;
  Node* last_ = nullptr;
  std::string pending_key_;

  bool number(const std::string& text) {
    Node n;
    n.kind = Node::Kind::Number;
    n.text = text;
    return put(std::move(n));
  }

  // Children are appended to vectors that never reallocate while a pointer to
  // one of their elements is on the stack: only the innermost container grows.
  bool put(Node n) {
    if (stack_.empty()) {
      root = std::move(n);
      last_ = &root;
    } else if (stack_.back()->kind == Node::Kind::Array) {
      stack_.back()->items.push_back(std::move(n));
      last_ = &stack_.back()->items.back();
    } else {
      stack_.back()->members.emplace_back(pending_key_, std::move(n));
      last_ = &stack_.back()->members.back().second;
    }
    return true;
  }
};

BigInt big(const Node& n, const std::string& what) {
  if (n.kind != Node::Kind::Number) fail(ErrorCode::ParseError, what + " is not a number");
  BigInt out;
  if (out.set_str(n.text, 10) != 0) fail(ErrorCode::ParseError, what + " is not an integer: " + n.text);
  return out;
}

std::optional<BigInt> big_or_null(const Node& n, const std::string& what) {
  if (n.kind == Node::Kind::Null) return std::nullopt;
  return big(n, what);
}

std::int64_t small(const Node& n, const std::string& what) {
  const BigInt v = big(n, what);
  if (!v.fits_slong_p()) fail(ErrorCode::ParseError, what + " out of range");
  return v.get_si();
}

std::string text(const Node& n, const std::string& what) {
  if (n.kind != Node::Kind::String) fail(ErrorCode::ParseError, what + " is not a string");
  return n.text;
}

const std::vector<Node>& array(const Node& n, const std::string& what) {
  if (n.kind != Node::Kind::Array) fail(ErrorCode::ParseError, what + " is not an array");
  return n.items;
}

}  // namespace

GrowthReport parse_json(std::string_view input) {
  RawSax sax;
  nlohmann::json::sax_parse(input.begin(), input.end(), &sax);
  const Node& doc = sax.root;
  if (doc.kind != Node::Kind::Object) fail(ErrorCode::ParseError, "report must be a JSON object");

  GrowthReport report;
  report.p = static_cast<std::uint64_t>(small(doc.at("p"), "p"));
  report.d = static_cast<unsigned>(small(doc.at("d"), "d"));
  report.lambda0 = small(doc.at("lambda0"), "lambda0");
  report.s_cyc = static_cast<std::uint64_t>(small(doc.at("s_cyc"), "s_cyc"));
  report.levels = static_cast<unsigned>(small(doc.at("levels"), "levels"));
  const Node& trees = doc.at("ram_from_trees");
  if (trees.kind != Node::Kind::Bool) fail(ErrorCode::ParseError, "ram_from_trees is not a boolean");
  report.ram_from_trees = trees.flag;
  for (const Node& pair : array(doc.at("notes"), "notes")) {
    const auto& kv = array(pair, "note");
    if (kv.size() != 2) fail(ErrorCode::ParseError, "note must be a [key, value] pair");
    report.notes.emplace_back(text(kv[0], "note key"), text(kv[1], "note value"));
  }
  for (const Node& r : array(doc.at("rows"), "rows")) {
    ReportRow row;
    row.n = static_cast<unsigned>(small(r.at("n"), "n"));
    row.lambda_exact = big_or_null(r.at("lambda_exact"), "lambda_exact");
    row.B_n = big_or_null(r.at("B_n"), "B_n");
    row.C_n = big(r.at("C_n"), "C_n");
    row.xi_minus = small(r.at("xi_minus"), "xi_minus");
    row.xi_plus = small(r.at("xi_plus"), "xi_plus");
    row.bound_lower = big(r.at("bound_lower"), "bound_lower");
    row.bound_upper = big(r.at("bound_upper"), "bound_upper");
    row.proof_lower = big(r.at("proof_lower"), "proof_lower");
    row.proof_upper = big(r.at("proof_upper"), "proof_upper");
    const Node& ratio = r.at("ratio");
    if (ratio.kind == Node::Kind::Number) {
      double v = 0;
      auto res = std::from_chars(ratio.text.data(), ratio.text.data() + ratio.text.size(), v);
      if (res.ec != std::errc{}) fail(ErrorCode::ParseError, "ratio is not a number");
      row.ratio = v;
    } else if (ratio.kind != Node::Kind::Null) {
      fail(ErrorCode::ParseError, "ratio is not a number");
    }
    report.rows.push_back(std::move(row));
  }
  for (const Node& v : array(doc.at("violations"), "violations")) {
    report.violations.push_back(text(v, "violation"));
  }
  return report;
}

}  // namespace iwasawa::report
