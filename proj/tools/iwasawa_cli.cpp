// iwasawa: lambda-growth reports for uniform p-adic Lie towers, plus front
// ends to the group, cyclotomic and power-series routines.
//
// Exit codes: 0 success, 1 input or validation error, 2 bound violation.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "iwasawa/arith.hpp"
#include "iwasawa/cyclotomic.hpp"
#include "iwasawa/error.hpp"
#include "iwasawa/growth.hpp"
#include "iwasawa/padic.hpp"
#include "iwasawa/progroup.hpp"
#include "iwasawa/report.hpp"
#include "iwasawa/scenarios.hpp"
#include "iwasawa/specfile.hpp"

namespace {

using namespace iwasawa;
using nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kViolation = 2;

struct Globals {
  std::string format = "table";
  bool format_given = false;
  std::string output;
  std::optional<std::uint64_t> seed;
};

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  out << text;
}

std::string join_csv(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
  return out + "\n";
}

// tower ---------------------------------------------------------------------

struct TowerArgs {
  std::string spec_path;
};

int run_tower(const Globals& g, const TowerArgs& a) {
  auto spec = specfile::load(a.spec_path);
  if (g.seed) spec.scenario.options.seed = *g.seed;
  const growth::TowerData tower = scenarios::build(spec.scenario);
  const growth::GrowthReport rep = growth::simulate(tower);

  const report::Format format =
      g.format_given ? report::format_from_string(g.format) : spec.format.value_or(report::Format::Table);
  const std::string path = !g.output.empty() ? g.output : spec.output_path.value_or("");
  emit(report::render(rep, format), path);
  if (!rep.violations.empty()) {
    for (const auto& v : rep.violations) std::cerr << "violation: " << v << "\n";
    return kViolation;
  }
  return kOk;
}

// group ---------------------------------------------------------------------

struct GroupArgs {
  std::uint32_t p = 3;
  std::uint32_t K = 3;
  std::vector<std::string> gens;
  std::string preset;
  std::uint32_t m = 2;
  unsigned depth = 1;
  std::size_t cap = progroup::kDefaultCap;
};

int run_group(const Globals& g, const GroupArgs& a) {
  if (a.gens.empty() == a.preset.empty()) {
    fail(ErrorCode::InvalidArgument, "give either --gen matrices or --preset");
  }
  std::vector<std::vector<std::vector<std::int64_t>>> rows;
  for (const auto& text : a.gens) rows.push_back(progroup::parse_matrix_rows(text));
  const std::uint32_t m = rows.empty() ? a.m : static_cast<std::uint32_t>(rows.front().size());
  for (const auto& r : rows) {
    if (r.size() != m) fail(ErrorCode::ParameterMismatch, "generators differ in size");
  }
  const progroup::MatrixRing ring(a.p, a.K, m);
  std::vector<progroup::MatElem> gens;
  if (a.preset == "gamma") {
    gens = progroup::congruence_kernel_generators(ring);
  } else if (a.preset == "false_tate") {
    gens = progroup::false_tate_generators(ring);
  } else if (!a.preset.empty()) {
    fail(ErrorCode::InvalidArgument, "unknown preset '" + a.preset + "' (expected gamma or false_tate)");
  }
  for (const auto& r : rows) gens.push_back(progroup::make_matrix(ring, r));

  const auto G = progroup::closure(ring, gens, a.cap);
  const auto partial = progroup::p_central_series_partial(G, a.depth, a.cap);
  if (partial.floor_at) {
    fail(ErrorCode::PrecisionFloor,
         "index [G_" + std::to_string(*partial.floor_at) + " : G_" + std::to_string(*partial.floor_at + 1) +
             "] is not determined modulo " + std::to_string(a.p) + "^" + std::to_string(a.K) +
             "; raise --K");
  }
  const auto& chain = partial.chain;
  const bool powerful = progroup::is_powerful(G);
  bool uniform = powerful;
  for (auto idx : chain.indices) uniform = uniform && idx == chain.indices.front();
  std::optional<unsigned> dim;
  if (uniform && a.depth >= 1) {
    unsigned d = 0;
    for (std::uint64_t x = chain.indices.front(); x > 1; x /= a.p) ++d;
    dim = d;
  }

  const auto format = report::format_from_string(g.format);
  std::ostringstream out;
  if (format == report::Format::Json) {
    ordered_json j;
    j["p"] = a.p;
    j["K"] = a.K;
    j["m"] = m;
    j["order"] = G.order();
    j["depth"] = a.depth;
    ordered_json terms = ordered_json::array();
    for (std::size_t n = 0; n < chain.terms.size(); ++n) {
      ordered_json t;
      t["n"] = n;
      t["order"] = chain.terms[n].order();
      if (n < chain.indices.size()) {
        t["index"] = chain.indices[n];
      } else {
        t["index"] = nullptr;
      }
      terms.push_back(t);
    }
    j["series"] = terms;
    j["powerful"] = powerful;
    j["uniform"] = uniform;
    j["dimension"] = dim ? ordered_json(*dim) : ordered_json(nullptr);
    out << j.dump(2) << "\n";
  } else if (format == report::Format::Csv) {
    out << join_csv({"n", "order", "index"});
    for (std::size_t n = 0; n < chain.terms.size(); ++n) {
      out << join_csv({std::to_string(n), std::to_string(chain.terms[n].order()),
                       n < chain.indices.size() ? std::to_string(chain.indices[n]) : "null"});
    }
  } else {
    out << "GL_" << m << "(Z/" << a.p << "^" << a.K << "), " << gens.size() << " generators, |G| = " << G.order()
        << "\n";
    out << "n  |G_n|  [G_n : G_n+1]\n";
    for (std::size_t n = 0; n < chain.terms.size(); ++n) {
      out << n << "  " << chain.terms[n].order() << "  "
          << (n < chain.indices.size() ? std::to_string(chain.indices[n]) : "-") << "\n";
    }
    out << "powerful: " << (powerful ? "yes" : "no") << "\n";
    out << "uniform to depth " << a.depth << ": " << (uniform ? "yes" : "no") << "\n";
    out << "dimension: " << (dim ? std::to_string(*dim) : "-") << "\n";
  }
  emit(out.str(), g.output);
  return kOk;
}

// cyclo ---------------------------------------------------------------------

struct CycloArgs {
  std::uint64_t p = 3;
  std::vector<std::uint64_t> ells;
  unsigned n_max = 0;  // 0: grow until stable
  bool oracle = false;
};

cyclotomic::SplitProfile profile_for(const CycloArgs& a, std::uint64_t ell) {
  if (a.n_max) return cyclotomic::split_profile(a.p, ell, a.n_max);
  for (unsigned n = 2;; ++n) {
    auto profile = cyclotomic::split_profile(a.p, ell, n);
    if (profile.stabilized_g) return profile;
    if (!arith::checked_pow(a.p, n + 1)) return profile;
  }
}

int run_cyclo(const Globals& g, const CycloArgs& a) {
  std::vector<cyclotomic::SplitProfile> profiles;
  for (std::size_t i = 0; i < a.ells.size(); ++i) {
    if (std::find(a.ells.begin(), a.ells.begin() + i, a.ells[i]) != a.ells.begin() + i) {
      fail(ErrorCode::InvalidArgument, "duplicate prime " + std::to_string(a.ells[i]));
    }
    profiles.push_back(profile_for(a, a.ells[i]));
  }
  // Total only when every profile has stabilized.
  std::uint64_t sum = 0;
  bool all_stable = true;
  for (const auto& pr : profiles) {
    all_stable = all_stable && pr.stabilized_g.has_value();
    sum += pr.stabilized_g.value_or(0);
  }
  auto oracle_g = [&](std::uint64_t ell, unsigned n) -> std::optional<std::uint64_t> {
    if (!a.oracle) return std::nullopt;
    return cyclotomic::split_oracle(a.p, n, ell);
  };

  const auto format = report::format_from_string(g.format);
  std::ostringstream out;
  if (format == report::Format::Json) {
    ordered_json j;
    j["p"] = a.p;
    ordered_json list = ordered_json::array();
    for (const auto& pr : profiles) {
      ordered_json e;
      e["ell"] = pr.ell;
      ordered_json levels = ordered_json::array();
      for (const auto& lv : pr.levels) {
        ordered_json l{{"n", lv.n}, {"e", lv.e}, {"f", lv.f}, {"g", lv.g}};
        if (auto o = oracle_g(pr.ell, lv.n)) l["factor_count"] = *o;
        levels.push_back(l);
      }
      e["levels"] = levels;
      e["stabilized_g"] = pr.stabilized_g ? ordered_json(*pr.stabilized_g) : ordered_json(nullptr);
      e["stable_from"] = pr.stable_from ? ordered_json(*pr.stable_from) : ordered_json(nullptr);
      list.push_back(e);
    }
    j["primes"] = list;
    j["s_cyc"] = all_stable ? ordered_json(sum) : ordered_json(nullptr);
    out << j.dump(2) << "\n";
  } else if (format == report::Format::Csv) {
    std::vector<std::string> head{"ell", "n", "e", "f", "g"};
    if (a.oracle) head.push_back("factor_count");
    out << join_csv(head);
    for (const auto& pr : profiles) {
      for (const auto& lv : pr.levels) {
        std::vector<std::string> row{std::to_string(pr.ell), std::to_string(lv.n), std::to_string(lv.e),
                                     std::to_string(lv.f), std::to_string(lv.g)};
        if (auto o = oracle_g(pr.ell, lv.n)) row.push_back(std::to_string(*o));
        out << join_csv(row);
      }
    }
  } else {
    for (const auto& pr : profiles) {
      out << "ell = " << pr.ell << " in Q(mu_" << a.p << "^n)\n";
      out << "n  e  f  g" << (a.oracle ? "  factors" : "") << "\n";
      for (const auto& lv : pr.levels) {
        out << lv.n << "  " << lv.e << "  " << lv.f << "  " << lv.g;
        if (auto o = oracle_g(pr.ell, lv.n)) out << "  " << *o;
        out << "\n";
      }
      if (pr.stabilized_g) {
        out << "stabilized g = " << *pr.stabilized_g << " from n = " << *pr.stable_from << "\n";
      } else {
        out << "not stabilized within the computed layers\n";
      }
    }
    out << "s_cyc = " << (all_stable ? std::to_string(sum) : "-") << "\n";
  }
  emit(out.str(), g.output);
  return all_stable || a.n_max ? kOk : kInputError;
}

// padic ---------------------------------------------------------------------

struct PadicArgs {
  std::string series;
  std::uint32_t p = 3;
  std::uint32_t K = 12;
  unsigned D = 24;
};

std::vector<std::uint64_t> residues_of(const std::vector<padic::PAdicInt>& poly) {
  std::vector<std::uint64_t> out;
  for (const auto& c : poly) out.push_back(c.value());
  return out;
}

int run_padic(const Globals& g, const PadicArgs& a, bool prep) {
  const padic::Precision prec(a.p, a.K);
  const auto f = padic::parse_series(a.series, prec, a.D);
  const auto format = report::format_from_string(g.format);
  std::ostringstream out;

  if (!prep) {
    const auto inv = padic::series_invariants(f);
    if (format == report::Format::Json) {
      out << ordered_json{{"p", a.p}, {"K", a.K}, {"D", a.D}, {"mu", inv.mu}, {"lambda", inv.lambda}}.dump(2) << "\n";
    } else if (format == report::Format::Csv) {
      out << join_csv({"mu", "lambda"}) << join_csv({std::to_string(inv.mu), std::to_string(inv.lambda)});
    } else {
      out << "mu = " << inv.mu << "\nlambda = " << inv.lambda << "\n";
    }
    emit(out.str(), g.output);
    return kOk;
  }

  const auto res = padic::weierstrass_prepare(f);
  const std::string P = padic::format_series(residues_of(res.distinguished));
  const std::string u = padic::format_series(res.unit.residues());
  if (format == report::Format::Json) {
    ordered_json j{{"p", a.p}, {"K", a.K}, {"D", a.D}, {"mu", res.mu}, {"lambda", res.lambda},
                   {"effective_precision", res.effective_precision}, {"distinguished", P}, {"unit", u}};
    out << j.dump(2) << "\n";
  } else if (format == report::Format::Csv) {
    out << join_csv({"mu", "lambda", "effective_precision", "distinguished", "unit"})
        << join_csv({std::to_string(res.mu), std::to_string(res.lambda), std::to_string(res.effective_precision),
                     "\"" + P + "\"", "\"" + u + "\""});
  } else {
    out << "mu = " << res.mu << "\nlambda = " << res.lambda << "\n";
    out << "P(T) = " << P << "\n";
    out << "u(T) = " << u << "  (mod T^" << a.D + 1 << ")\n";
    out << "P and u are exact modulo " << a.p << "^" << res.effective_precision << "\n";
  }
  emit(out.str(), g.output);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iwasawa lambda-invariant growth in uniform p-adic Lie towers"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  app.add_option("--output", g.output, "Write output to this file instead of stdout");
  app.add_option("--seed", g.seed, "Seed for random delta and ramification policies");

  TowerArgs tower_args;
  auto* tower = app.add_subcommand("tower", "Run a tower or scenario spec file (TOML or JSON)");
  tower->add_option("spec", tower_args.spec_path, "Spec file path")->required();

  GroupArgs group_args;
  auto* group = app.add_subcommand("group", "Descending p-central series of a matrix group mod p^K");
  group->add_option("--p", group_args.p, "Odd prime")->required();
  group->add_option("--K", group_args.K, "Work modulo p^K")->required();
  group->add_option("--gen", group_args.gens, "Generator matrix as 'a,b;c,d' (repeatable)");
  group->add_option("--preset", group_args.preset, "Named group: gamma (kernel of reduction mod p) or false_tate")
      ->check(CLI::IsMember({"gamma", "false_tate"}));
  group->add_option("--m", group_args.m, "Matrix size for the gamma preset")->capture_default_str();
  group->add_option("--depth", group_args.depth, "Last index n of [G_n : G_n+1]")->capture_default_str();
  group->add_option("--cap", group_args.cap, "Maximum group order enumerated")->capture_default_str();

  CycloArgs cyclo_args;
  auto* cyclo = app.add_subcommand("cyclo", "Splitting of primes ell in the cyclotomic p-tower");
  cyclo->add_option("--p", cyclo_args.p, "Odd prime")->required();
  cyclo->add_option("--ell", cyclo_args.ells, "Prime ell != p (repeatable)")->required();
  cyclo->add_option("--levels,--n-max", cyclo_args.n_max, "Number of layers n = 1..levels (default: until stable)");
  cyclo->add_flag("--oracle", cyclo_args.oracle, "Cross-check g with a factor count of the cyclotomic polynomial");

  PadicArgs padic_args;
  auto* padic = app.add_subcommand("padic", "Power series over Z_p");
  padic->require_subcommand(1);
  auto add_series_opts = [&](CLI::App* sub) {
    sub->add_option("series", padic_args.series, "Series such as '3 + 3*T + T^2'")->required();
    sub->add_option("--p", padic_args.p, "Odd prime")->required();
    sub->add_option("--K", padic_args.K, "Coefficient precision p^K")->capture_default_str();
    sub->add_option("--D", padic_args.D, "Truncation degree")->capture_default_str();
  };
  auto* prep = padic->add_subcommand("prep", "Weierstrass preparation f = p^mu P u");
  add_series_opts(prep);
  auto* invariants = padic->add_subcommand("invariants", "mu and lambda of a series");
  add_series_opts(invariants);

  try {
    app.parse(argc, argv);
    g.format_given = app.count("--format") > 0;
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (tower->parsed()) return run_tower(g, tower_args);
    if (group->parsed()) return run_group(g, group_args);
    if (cyclo->parsed()) return run_cyclo(g, cyclo_args);
    if (prep->parsed()) return run_padic(g, padic_args, true);
    if (invariants->parsed()) return run_padic(g, padic_args, false);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
