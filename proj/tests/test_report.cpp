#include <gtest/gtest.h>

#include "iwasawa/error.hpp"
#include "iwasawa/report.hpp"
#include "iwasawa/scenarios.hpp"

using namespace iwasawa;

namespace {

growth::GrowthReport sample(std::uint64_t seed) {
  return growth::simulate(scenarios::random_tower(5, 4, 4, -3, 3, seed));
}

void expect_same(const growth::GrowthReport& a, const growth::GrowthReport& b) {
  EXPECT_EQ(a.p, b.p);
  EXPECT_EQ(a.d, b.d);
  EXPECT_EQ(a.lambda0, b.lambda0);
  EXPECT_EQ(a.s_cyc, b.s_cyc);
  EXPECT_EQ(a.levels, b.levels);
  EXPECT_EQ(a.ram_from_trees, b.ram_from_trees);
  EXPECT_EQ(a.notes, b.notes);
  EXPECT_EQ(a.rows, b.rows);
  EXPECT_EQ(a.violations, b.violations);
}

}  // namespace

TEST(ReportJson, RoundTripsExactly) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto rep = sample(seed);
    const auto back = report::parse_json(report::render_json(rep));
    expect_same(rep, back);
  }
}

TEST(ReportJson, BigIntegersStayExact) {
  // 5^36 and beyond do not fit in 64 bits.
  auto t = scenarios::elliptic_gamma(5, {}, 0, 12, scenarios::DeltaPolicy::zero(), {7});
  const auto rep = growth::simulate(t);
  const auto text = report::render_json(rep);
  EXPECT_NE(text.find(rep.rows.back().lambda_exact->get_str()), std::string::npos);
  expect_same(rep, report::parse_json(text));
}

TEST(ReportJson, NullsAndNotes) {
  scenarios::TowerOptions opts;
  opts.lambda0 = 1;
  const auto rep = growth::simulate(
      scenarios::false_tate(3, 5, 2, scenarios::DeltaPolicy::zero(), opts, 2, 2));
  const auto text = report::render_json(rep);
  EXPECT_NE(text.find("\"lambda_exact\": null"), std::string::npos);
  EXPECT_NE(text.find("\"s_cyc reference\""), std::string::npos);
  expect_same(rep, report::parse_json(text));
}

TEST(ReportJson, ParseErrors) {
  EXPECT_THROW(report::parse_json("{"), Error);
  EXPECT_THROW(report::parse_json("[]"), Error);
  EXPECT_THROW(report::parse_json("{\"p\": 3}"), Error);
}

TEST(ReportCsv, ColumnOrderAndNullMarker) {
  scenarios::TowerOptions opts;
  const auto rep = growth::simulate(scenarios::false_tate(3, 7, 2, scenarios::DeltaPolicy::zero(), opts));
  const auto csv = report::render_csv(rep);
  const std::string header = csv.substr(0, csv.find('\n'));
  EXPECT_EQ(header, "n,lambda_exact,B_n,C_n,xi_minus,xi_plus,bound_lower,bound_upper,proof_lower,proof_upper,ratio");
  EXPECT_NE(csv.find("\n1,null,"), std::string::npos);
}

TEST(ReportRender, Deterministic) {
  for (auto format : {report::Format::Table, report::Format::Json, report::Format::Csv}) {
    EXPECT_EQ(report::render(sample(3), format), report::render(sample(3), format));
  }
}

TEST(ReportTable, ListsViolations) {
  growth::TowerData t;
  t.p = 3;
  t.d = 2;
  t.levels = 1;
  t.steps = {{growth::StepData{0, std::vector<std::uint64_t>{3}}}};
  const auto text = report::render_table(growth::simulate(t));
  EXPECT_NE(text.find("VIOLATION"), std::string::npos);
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(report::format_double(0.5), "0.5");
  EXPECT_EQ(report::format_double(2.0), "2");
  const double third = 1.0 / 3.0;
  EXPECT_EQ(std::stod(report::format_double(third)), third);
  EXPECT_EQ(report::format_from_string("csv"), report::Format::Csv);
  EXPECT_THROW(report::format_from_string("xml"), Error);
}
