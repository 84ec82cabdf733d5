// amatch: verification suites, witness certificates and bounded searches.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "amatch/certificate.hpp"
#include "amatch/constructions.hpp"
#include "amatch/linear.hpp"
#include "amatch/matching.hpp"
#include "amatch/suite.hpp"

namespace {

using namespace amatch;

enum Exit : int { ok = 0, failed = 1, usage = 2, unknown = 3 };

struct Options {
  std::string suite;
  std::uint64_t max_p = suite::exhaustive_ceiling;
  std::uint64_t seed = 42;
  bool timing = false;

  std::string kind;
  std::string target;
  std::string path;
  std::uint64_t p = 0;
  std::uint64_t k = 0;
  unsigned m = 1;
  unsigned n = 0;
  std::string group;
  std::string tower;
  std::size_t order = 0;
  std::int64_t window = 200;
  std::optional<std::uint64_t> budget;
  std::string out;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Budget budget_of(const Options& o) { return o.budget ? Budget(*o.budget) : Budget{}; }

/// Writes text to --out, or stdout when no path was given.
void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream f(o.out, std::ios::binary | std::ios::trunc);
  if (!f) throw UsageError("cannot write '" + o.out + "'");
  f << text << '\n';
  if (!f.flush()) throw UsageError("cannot write '" + o.out + "'");
}

int exit_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::construction_unavailable:
      return failed;
    case ErrorCode::budget_exceeded:
      return unknown;
    default:
      return usage;
  }
}

int cmd_verify(const Options& o) {
  if (o.suite != "group" && o.suite != "linear" && o.suite != "all")
    throw UsageError("unknown suite '" + o.suite + "' (expected group, linear or all)");
  if (o.max_p > suite::exhaustive_ceiling)
    throw UsageError("--max-p above the exhaustive ceiling " + std::to_string(suite::exhaustive_ceiling));
  if (o.max_p < 5) throw UsageError("--max-p must be at least 5");
  if (!o.out.empty()) {
    std::ofstream probe(o.out, std::ios::app);
    if (!probe) throw UsageError("cannot write '" + o.out + "'");
  }
  const auto report = run_suite(o.suite, o.max_p, o.seed, o.timing);
  emit(o, to_json(report).dump(2));
  for (const auto& c : report.checks)
    std::cerr << to_string(c.status) << "  " << c.id << (c.detail.empty() ? "" : "  (" + c.detail + ")") << '\n';
  switch (report.overall()) {
    case CheckStatus::pass: return ok;
    case CheckStatus::fail: return failed;
    case CheckStatus::unknown: return unknown;
  }
  return failed;
}

Json build_witness(const Options& o) {
  if (o.kind == "qr") return to_json(qr_witness(o.p));
  if (o.kind == "cycle") return to_json(cycle_witness(o.p, o.k, budget_of(o)).certificate);
  if (o.kind == "window") {
    auto model = WindowModel::even_integers;
    if (!o.group.empty()) model = window_model_for(kind_of(parse_group_spec(o.group)));
    return to_json(window_witness(model, o.window));
  }
  if (o.kind == "failure") {
    const auto grp = parse_group_spec(o.group.empty() ? "z:" + std::to_string(o.p) : o.group);
    if (kind_of(grp) != CarrierKind::finite) throw UsageError("failure witnesses need a finite group");
    SearchStatus st{};
    auto c = failure_certificate(std::get<FiniteGroup>(grp), o.order, budget_of(o), st);
    if (st == SearchStatus::unknown) throw Error(ErrorCode::budget_exceeded, "search budget exhausted");
    if (!c) throw Error(ErrorCode::construction_unavailable, "no failure at order " + std::to_string(o.order));
    return to_json(*c);
  }
  if (o.kind == "linear") {
    const auto t = o.tower.empty() ? FiniteTower(o.p, o.n) : parse_finite_tower(o.tower);
    return to_json(linear_witness(t, o.m));
  }
  if (o.kind == "transcendental") return to_json(transcendental_witness(o.m));
  throw UsageError("unknown witness kind '" + o.kind + "'");
}

int cmd_witness(const Options& o) {
  const auto j = build_witness(o);
  const auto text = j.dump(2);
  const auto self = check_certificate_text(text);
  if (!self.pass) {
    std::cerr << "error: emitted certificate does not validate: " << self.message << '\n';
    return failed;
  }
  emit(o, text);
  return ok;
}

int cmd_check(const Options& o) {
  std::ifstream f(o.path, std::ios::binary);
  if (!f) throw UsageError("cannot read '" + o.path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  const auto r = check_certificate_text(ss.str());
  for (const auto& [name, value] : r.claims) std::cout << (value ? "true " : "false") << "  " << name << '\n';
  if (!r.pass) {
    std::cout << "FAIL " << r.kind << (r.message.empty() ? "" : ": " + r.message) << '\n';
    return failed;
  }
  std::cout << "PASS " << r.kind << '\n';
  return ok;
}

int cmd_search(const Options& o) {
  if (o.target == "fails-at-order") {
    const auto grp = parse_group_spec(o.group);
    if (kind_of(grp) != CarrierKind::finite) throw UsageError("fails-at-order searches finite groups");
    SearchStatus st{};
    auto c = failure_certificate(std::get<FiniteGroup>(grp), o.order, budget_of(o), st);
    if (st == SearchStatus::unknown) {
      std::cerr << "unknown: budget exhausted\n";
      return unknown;
    }
    if (!c) {
      std::cerr << "absent: no failure at order " << o.order << " in " << o.group << '\n';
      return failed;
    }
    emit(o, to_json(*c).dump(2));
    return ok;
  }
  if (o.target == "matching-property") {
    const auto grp = parse_group_spec(o.group);
    if (kind_of(grp) != CarrierKind::finite) throw UsageError("matching-property searches finite groups");
    const auto& g = std::get<FiniteGroup>(grp);
    const auto r = matching_property_upto(g, o.order ? o.order : g.size() - 1);
    if (r.pass) {
      std::cerr << "absent: every pair up to size " << (o.order ? o.order : g.size() - 1) << " admits a matching ("
                << r.pairs_checked << " pairs)\n";
      return failed;
    }
    Json j;
    j["schema_version"] = schema_version;
    j["kind"] = "matching-property-counterexample";
    j["carrier"] = g.descriptor();
    Json a = Json::array(), b = Json::array();
    for (auto x : r.counterexample->first) a.push_back(g.format(x));
    for (auto x : r.counterexample->second) b.push_back(g.format(x));
    j["A"] = a;
    j["B"] = b;
    j["pairs_checked"] = r.pairs_checked;
    emit(o, j.dump(2));
    return ok;
  }
  if (o.target == "lmp-counterexample") {
    const auto t = o.tower.empty() ? FiniteTower(o.p, o.n) : parse_finite_tower(o.tower);
    const auto c = lmp_counterexample_search(t, budget_of(o));
    if (c.status == SearchStatus::unknown) {
      std::cerr << "unknown: budget exhausted after " << c.nodes << " nodes\n";
      return unknown;
    }
    if (c.status == SearchStatus::absent) {
      std::cerr << "absent: no counterexample up to dimension 2 in " << t.descriptor() << '\n';
      return failed;
    }
    emit(o, to_json(t, c).dump(2));
    return ok;
  }
  throw UsageError("unknown search target '" + o.target + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acyclic matchings in abelian groups and field extensions"};
  app.require_subcommand(1);
  Options o;

  auto* verify = app.add_subcommand("verify", "run a verification suite and write a report");
  verify->add_option("--suite", o.suite, "group, linear or all")->required();
  verify->add_option("--max-p", o.max_p, "largest prime for the exhaustive checks");
  verify->add_option("--seed", o.seed, "seed for sampled checks");
  verify->add_option("--out", o.out, "report path (default stdout)");
  verify->add_flag("--timing", o.timing, "record elapsed time per check");

  auto* witness = app.add_subcommand("witness", "emit a witness certificate");
  witness->add_option("kind", o.kind, "qr, cycle, window, failure, linear or transcendental")->required();
  witness->add_option("--p", o.p, "prime");
  witness->add_option("--k", o.k, "cycle witness order");
  witness->add_option("--m", o.m, "subspace dimension");
  witness->add_option("--n", o.n, "extension degree");
  witness->add_option("--group", o.group, "group spec");
  witness->add_option("--tower", o.tower, "tower spec gf:p^n[:c0,...,cn]");
  witness->add_option("--order", o.order, "failure order");
  witness->add_option("--window", o.window, "window half-width");
  witness->add_option("--budget", o.budget, "search node budget");
  witness->add_option("--out", o.out, "certificate path (default stdout)");

  auto* check = app.add_subcommand("check", "re-derive the claims of a certificate");
  check->add_option("path", o.path, "certificate file")->required();

  auto* search = app.add_subcommand("search", "bounded search");
  search->add_option("target", o.target, "fails-at-order, matching-property or lmp-counterexample")->required();
  search->add_option("--group", o.group, "group spec");
  search->add_option("--tower", o.tower, "tower spec");
  search->add_option("--p", o.p, "prime");
  search->add_option("--n", o.n, "extension degree");
  search->add_option("--order", o.order, "order or size bound");
  search->add_option("--budget", o.budget, "search node budget");
  search->add_option("--seed", o.seed, "unused by exhaustive searches");
  search->add_option("--out", o.out, "certificate path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : usage;
  }

  try {
    if (*verify) return cmd_verify(o);
    if (*witness) return cmd_witness(o);
    if (*check) return cmd_check(o);
    if (*search) return cmd_search(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  }
  return usage;
}
