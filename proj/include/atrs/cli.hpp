#pragma once

// Command dispatch for the `atrs` tool. Every command produces a Report;
// the exit code depends only on the report status:
//   0 ok / property holds, 1 refuted or check failed,
//   2 resource exhausted or undecided, 3 input error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "atrs/complexity.hpp"
#include "atrs/oracles.hpp"
#include "atrs/syntax.hpp"
#include "atrs/uncurrying.hpp"

namespace atrs::cli {

enum class Status { Ok, Refuted, Undecided, InputError };

inline int exit_code(Status s) {
  switch (s) {
    case Status::Ok: return 0;
    case Status::Refuted: return 1;
    case Status::Undecided: return 2;
    case Status::InputError: return 3;
  }
  return 3;
}

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::Ok: return "ok";
    case Status::Refuted: return "refuted";
    case Status::Undecided: return "undecided";
    case Status::InputError: return "input-error";
  }
  return "?";
}

struct Report {
  std::string command;
  Status status = Status::Ok;
  nlohmann::json data = nlohmann::json::object();
  std::string text{};
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct Loaded {
  InputProblem problem;
  Trs trs;      ///< the system to work on (uncurried when requested)
  Symbol app = default_app();
  std::optional<TransformResult> transformed{};
};

inline Loaded load(const std::string& path, bool uncurry, const std::optional<std::string>& app_hint,
                   std::ostream& err) {
  Loaded out{parse_trs(read_file(path), path), {}};
  for (const auto& w : out.problem.warnings) err << "warning: " << path << ": " << w << "\n";
  out.trs = out.problem.trs;
  const auto hint = app_hint ? app_hint : out.problem.app_hint;
  if (hint) out.app = Symbol{*hint, 2};
  if (uncurry) {
    out.transformed = transform(out.problem.trs, hint);
    out.app = out.transformed->context.app();
    out.trs = out.transformed->combined;
  }
  return out;
}

inline Strategy parse_strategy(const std::string& s) {
  if (s == "full") return Strategy::Full;
  if (s == "innermost") return Strategy::Innermost;
  if (s == "ri" || s == "rightmost-innermost") return Strategy::RightmostInnermost;
  throw Error(ErrorKind::InvalidArgument, "unknown strategy " + s);
}

inline nlohmann::json rules_json(const Trs& trs, const Symbol& app) {
  auto out = nlohmann::json::array();
  for (const Rule& r : trs.rules()) out.push_back(to_string(r, app));
  return out;
}

inline void describe_witness(const LoopWitness& w, const Symbol& app, Report& report) {
  report.text += "loop: " + to_string(w.start, app) + "\n";
  auto steps = nlohmann::json::array();
  for (const RewriteStep& s : w.trace) {
    std::string line = "  -> " + to_string(s.result, app);
    if (s.rule_index != kRelativeStep) {
      line += "   [rule " + std::to_string(s.rule_index + 1) + " at " + to_string(s.position) + "]";
    }
    report.text += line + "\n";
    steps.push_back({{"term", to_string(s.result, app)},
                     {"rule", s.rule_index == kRelativeStep ? nlohmann::json(nullptr)
                                                            : nlohmann::json(s.rule_index + 1)},
                     {"position", to_string(s.position)}});
  }
  report.data["loop"] = {{"start", to_string(w.start, app)}, {"trace", steps}};
}

}  // namespace detail

struct Options {
  std::string file;
  std::optional<std::string> app;
  std::string emit = "combined";
  bool show_arities = false;
  std::string term;
  std::string strategy = "full";
  std::optional<std::size_t> steps;
  bool normalize = false;
  std::size_t fuel = 10000;
  std::size_t max_size = 5;
  std::optional<std::string> relative_to;
  std::size_t max_vars = 2;
  std::string tmi;
  std::size_t dim = 1;
  Natural max_coeff = 1;
  std::size_t budget = 10000000;
  std::string property;
  bool uncurry = false;
};

inline Report cmd_uncurry(const Options& o, std::ostream& err) {
  Report r{"uncurry"};
  auto loaded = detail::load(o.file, false, o.app, err);
  const auto hint = o.app ? o.app : loaded.problem.app_hint;
  const TransformResult tr = transform(loaded.problem.trs, hint);
  const Symbol& app = tr.context.app();

  if (o.show_arities) {
    r.text += "applicative arities:\n";
    for (const Symbol& c : tr.context.constants()) {
      r.text += "  aa(" + c.name + ") = " + std::to_string(tr.context.aa(c.name)) + "\n";
      r.data["arities"][c.name] = tr.context.aa(c.name);
    }
  }

  const std::vector<std::pair<std::string, const Trs*>> all = {
      {"original", &loaded.problem.trs}, {"u", &tr.u_rules},     {"uncurried", &tr.uncurried},
      {"eta", &tr.eta},                  {"eta-uncurried", &tr.uncurried_eta}};
  std::vector<std::pair<std::string, const Trs*>> chosen;
  if (o.emit == "all") {
    chosen = all;
  } else if (o.emit == "combined") {
    chosen = {{"combined", &tr.combined}};
  } else {
    for (const auto& entry : all) {
      if (entry.first == o.emit) chosen.push_back(entry);
    }
    if (chosen.empty()) throw Error(ErrorKind::InvalidArgument, "unknown rule set " + o.emit);
  }
  for (const auto& [name, trs] : chosen) {
    if (chosen.size() > 1) r.text += "== " + name + " ==\n";
    r.text += print_trs(*trs, app);
    r.data["sets"][name] = detail::rules_json(*trs, app);
  }
  return r;
}

inline Report cmd_rewrite(const Options& o, std::ostream& err) {
  Report r{"rewrite"};
  auto loaded = detail::load(o.file, o.uncurry, o.app, err);
  const Strategy strategy = detail::parse_strategy(o.strategy);
  const Term t = parse_term(o.term, rule_variables(loaded.trs.rules()), loaded.trs.signature());
  const Symbol& app = loaded.app;
  r.data["term"] = to_string(t, app);

  if (o.normalize) {
    auto result = normalize(loaded.trs, t, strategy, o.fuel);
    if (result.finished()) {
      r.text = "normal form: " + to_string(result.value(), app) + "\n";
      r.data["normal_form"] = to_string(result.value(), app);
    } else if (result.loop()) {
      r.status = Status::Refuted;
      detail::describe_witness(result.witness(), app, r);
    } else {
      r.status = Status::Undecided;
      r.text = "fuel exhausted after " + std::to_string(o.fuel) + " steps\n";
    }
    return r;
  }

  const Rewriter rewriter(loaded.trs);
  if (o.steps) {
    Term cur = t;
    auto trace = nlohmann::json::array();
    r.text = to_string(cur, app) + "\n";
    for (std::size_t i = 0; i < *o.steps; ++i) {
      auto steps = rewriter.steps(cur, strategy);
      if (steps.empty()) {
        r.text += "normal form reached\n";
        break;
      }
      const RewriteStep& s = steps.front();
      cur = s.result;
      r.text += "-> " + to_string(cur, app) + "   [rule " + std::to_string(s.rule_index + 1) + " at " +
                to_string(s.position) + "]\n";
      trace.push_back({{"term", to_string(cur, app)}, {"rule", s.rule_index + 1},
                       {"position", to_string(s.position)}});
    }
    r.data["trace"] = trace;
    return r;
  }

  auto steps = nlohmann::json::array();
  for (const RewriteStep& s : rewriter.steps(t, strategy)) {
    r.text += "rule " + std::to_string(s.rule_index + 1) + " at " + to_string(s.position) + ": " +
              to_string(s.result, app) + "\n";
    steps.push_back({{"term", to_string(s.result, app)}, {"rule", s.rule_index + 1},
                     {"position", to_string(s.position)}});
  }
  if (steps.empty()) r.text = "normal form\n";
  r.data["steps"] = steps;
  return r;
}

inline Report cmd_dh(const Options& o, std::ostream& err) {
  Report r{"dh"};
  auto loaded = detail::load(o.file, o.uncurry, o.app, err);
  const Strategy strategy = detail::parse_strategy(o.strategy);
  const Term t = parse_term(o.term, rule_variables(loaded.trs.rules()), loaded.trs.signature());
  auto h = derivation_height(loaded.trs, t, strategy, o.fuel);
  r.data["term"] = to_string(t, loaded.app);
  r.data["strategy"] = std::string(to_string(strategy));
  if (h.finished()) {
    r.text = "dh = " + std::to_string(h.value()) + "\n";
    r.data["dh"] = h.value();
  } else if (h.loop()) {
    r.status = Status::Refuted;
    detail::describe_witness(h.witness(), loaded.app, r);
  } else {
    r.status = Status::Undecided;
    r.text = "fuel exhausted: more than " + std::to_string(o.fuel) + " terms explored\n";
  }
  return r;
}

inline Report cmd_dc(const Options& o, std::ostream& err) {
  Report r{"dc"};
  auto loaded = detail::load(o.file, o.uncurry, o.app, err);
  ComplexityTable table;
  if (o.relative_to) {
    auto free = detail::load(*o.relative_to, false, o.app, err);
    table = dc_relative_table(loaded.trs, free.trs, o.max_size, o.fuel, o.max_vars);
  } else {
    table = dc_table(loaded.trs, o.max_size, detail::parse_strategy(o.strategy), o.fuel, o.max_vars);
  }
  r.data["relation"] = table.relation;
  auto rows = nlohmann::json::array();
  r.text = "n\tvalue\twitness\n";
  for (const ComplexityRow& row : table.rows) {
    r.text += std::to_string(row.n) + "\t" + std::to_string(row.value) + "\t" +
              to_string(row.witness, loaded.app) + "\n";
    rows.push_back({{"n", row.n}, {"value", row.value}, {"witness", to_string(row.witness, loaded.app)}});
  }
  r.data["rows"] = rows;
  r.data["terms_checked"] = table.terms_checked;
  if (table.loop) {
    r.status = Status::Refuted;
    r.text += "incomplete at n = " + std::to_string(*table.incomplete_at) + ": non-terminating\n";
    detail::describe_witness(*table.loop, loaded.app, r);
  } else if (table.fuel_exhausted) {
    r.status = Status::Undecided;
    r.text += "incomplete at n = " + std::to_string(*table.incomplete_at) + ": fuel exhausted\n";
  }
  if (table.incomplete_at) r.data["incomplete_at"] = *table.incomplete_at;
  return r;
}

inline nlohmann::json vector_json(const Vector& v) { return nlohmann::json(v); }

inline Report cmd_check_tmi(const Options& o, std::ostream& err) {
  Report r{"check-tmi"};
  auto loaded = detail::load(o.file, o.uncurry, o.app, err);
  const MatrixInterp m = parse_tmi(detail::read_file(o.tmi), loaded.trs.signature());
  const Certificate cert = check_tmi(m, loaded.trs);
  r.text += std::string("monotone: ") + (cert.monotone ? "yes" : "no") + "\n";
  r.text += std::string("triangular: ") + (cert.triangular ? "yes" : "no") + "\n";
  auto rules = nlohmann::json::array();
  for (std::size_t i = 0; i < loaded.trs.size(); ++i) {
    const OrientationReport& o_r = cert.orientation[i];
    r.text += std::string(o_r.strict ? "strict     " : "not strict ") + to_string(loaded.trs[i], loaded.app) +
              "   [" + print_vector(o_r.lhs_constant) + " vs " + print_vector(o_r.rhs_constant) + "]\n";
    rules.push_back({{"rule", to_string(loaded.trs[i], loaded.app)}, {"strict", o_r.strict},
                     {"lhs_constant", vector_json(o_r.lhs_constant)},
                     {"rhs_constant", vector_json(o_r.rhs_constant)}});
  }
  r.data = {{"monotone", cert.monotone}, {"triangular", cert.triangular}, {"rules", rules}};
  if (cert.kind == CertificateKind::UpperBound) {
    r.text += "dc in O(n^" + std::to_string(cert.degree) + ")\n";
    r.data["upper_bound_degree"] = cert.degree;
  } else {
    r.status = Status::Refuted;
    r.text += "no certificate: " + cert.failure + "\n";
    r.data["failure"] = cert.failure;
  }
  return r;
}

inline Report cmd_search_tmi(const Options& o, std::ostream& err) {
  Report r{"search-tmi"};
  auto loaded = detail::load(o.file, o.uncurry, o.app, err);
  const TmiSearchResult result = search_tmi(loaded.trs, o.dim, o.max_coeff, o.budget);
  r.data["assignments"] = result.assignments;
  switch (result.status) {
    case SearchStatus::Found: {
      const Certificate cert = check_tmi(*result.interp, loaded.trs);
      r.text = print_tmi(*result.interp);
      if (cert.kind != CertificateKind::UpperBound) {
        throw std::logic_error("search returned an interpretation that fails the check");
      }
      r.text += "dc in O(n^" + std::to_string(cert.degree) + ")\n";
      r.data["interpretation"] = print_tmi(*result.interp);
      r.data["upper_bound_degree"] = cert.degree;
      break;
    }
    case SearchStatus::SpaceExhausted:
      r.status = Status::Refuted;
      r.text = "no interpretation of dimension " + std::to_string(o.dim) + " with entries <= " +
               std::to_string(o.max_coeff) + "\n";
      break;
    case SearchStatus::BudgetExhausted:
      r.status = Status::Undecided;
      r.text = "budget of " + std::to_string(o.budget) + " assignments exhausted\n";
      break;
  }
  r.text += "assignments: " + std::to_string(result.assignments) + "\n";
  return r;
}

inline Report verification_report(const VerificationReport& v, const Symbol& app) {
  Report r{"verify"};
  r.data = {{"property", v.property},
            {"instances", v.instances_checked},
            {"exhausted", v.exhausted},
            {"result", std::string(to_string(v.status()))}};
  r.text = v.property + ": " + std::string(to_string(v.status())) + " (" + std::to_string(v.instances_checked) +
           " instances, " + std::to_string(v.exhausted) + " exhausted, " + std::to_string(v.failures.size()) +
           " failures)\n";
  auto failures = nlohmann::json::array();
  for (const VerificationFailure& f : v.failures) {
    std::vector<std::string> inputs;
    for (const Term& t : f.inputs) inputs.push_back(to_string(t, app));
    r.text += "  failed: " + f.expected + "\n";
    failures.push_back({{"inputs", inputs}, {"expected", f.expected}, {"observed", f.observed}});
  }
  r.data["failures"] = failures;
  switch (v.status()) {
    case VerificationStatus::Holds: r.status = Status::Ok; break;
    case VerificationStatus::Refuted: r.status = Status::Refuted; break;
    case VerificationStatus::Undecided:
    case VerificationStatus::Vacuous: r.status = Status::Undecided; break;
  }
  return r;
}

inline Report cmd_verify(const Options& o, std::ostream& err) {
  if (o.property == "innermost-loop") {
    Report r{"verify"};
    auto loaded = detail::load(o.file, o.uncurry, o.app, err);
    const LoopSearch search = detect_innermost_nontermination(loaded.trs, o.max_size, o.fuel, o.max_vars);
    r.data = {{"property", o.property}, {"terms_checked", search.terms_checked}, {"exhausted", search.exhausted}};
    if (search.witness) {
      r.status = Status::Refuted;
      r.text = "innermost loop found\n";
      detail::describe_witness(*search.witness, loaded.app, r);
    } else if (search.exhausted > 0) {
      r.status = Status::Undecided;
      r.text = "no loop found; " + std::to_string(search.exhausted) + " terms exhausted the fuel\n";
    } else {
      r.text = "no loop (" + std::to_string(search.terms_checked) + " terms of size <= " +
               std::to_string(o.max_size) + ")\n";
    }
    return r;
  }

  auto loaded = detail::load(o.file, false, o.app, err);
  const auto hint = o.app ? o.app : loaded.problem.app_hint;
  const TransformResult tr = transform(loaded.problem.trs, hint);
  const Trs& trs = loaded.problem.trs;
  VerificationReport v;
  if (o.property == "uncurried-step") {
    v = verify_uncurried_step(trs, o.max_size, o.fuel, o.max_vars);
  } else if (o.property == "ri-sim") {
    v = verify_rightmost_simulation(trs, o.max_size, o.fuel, o.max_vars);
  } else if (o.property == "nf-preservation") {
    v = verify_nf_preservation(trs, o.max_size, o.max_vars, o.fuel);
  } else if (o.property == "subterm-commutation") {
    v = verify_subterm_commutation(tr.context, o.max_size, o.max_vars, o.fuel);
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown property " + o.property);
  }
  return verification_report(v, tr.context.app());
}

/// Runs one command line (without the program name). Reports go to `out`,
/// warnings and errors to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Uncurrying, rewriting strategies and complexity certificates for applicative TRSs", "atrs"};
  app.require_subcommand(1);
  Options o;
  bool json = false;
  app.add_flag("--json", json, "Emit one JSON object per run");

  auto file_arg = [&](CLI::App* sub) { sub->add_option("FILE", o.file, "TRS file")->required(); };
  auto strategy_opt = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--strategy", o.strategy, "full | innermost | ri")
                    ->check(CLI::IsMember({"full", "innermost", "ri", "rightmost-innermost"}));
    if (required) opt->required();
  };
  auto common = [&](CLI::App* sub) {
    sub->add_option("--app", o.app, "Application symbol");
    sub->add_flag("--uncurry", o.uncurry, "Work on the uncurried system");
    sub->add_flag("--json", json, "Emit one JSON object");
  };

  auto* uncurry = app.add_subcommand("uncurry", "Uncurry an applicative TRS");
  file_arg(uncurry);
  uncurry->add_option("--app", o.app, "Application symbol");
  uncurry->add_option("--emit", o.emit, "eta | u | uncurried | eta-uncurried | combined | original | all")
      ->check(CLI::IsMember({"eta", "u", "uncurried", "eta-uncurried", "combined", "original", "all"}));
  uncurry->add_flag("--show-arities", o.show_arities, "Print applicative arities");
  uncurry->add_flag("--json", json, "Emit one JSON object");

  auto* rewrite = app.add_subcommand("rewrite", "Rewrite a term");
  file_arg(rewrite);
  rewrite->add_option("--term", o.term, "Start term")->required();
  strategy_opt(rewrite, true);
  auto* steps_opt = rewrite->add_option("--steps", o.steps, "Perform up to K steps");
  rewrite->add_flag("--normalize", o.normalize, "Rewrite to normal form")->excludes(steps_opt);
  rewrite->add_option("--fuel", o.fuel, "Step bound for --normalize");
  common(rewrite);

  auto* dh = app.add_subcommand("dh", "Derivation height of a term");
  file_arg(dh);
  dh->add_option("--term", o.term, "Start term")->required();
  strategy_opt(dh, true);
  dh->add_option("--fuel", o.fuel, "Bound on explored terms");
  common(dh);

  auto* dc = app.add_subcommand("dc", "Derivational complexity table");
  file_arg(dc);
  dc->add_option("--max-size", o.max_size, "Largest start term size")->required();
  strategy_opt(dc, false);
  dc->add_option("--relative-to", o.relative_to, "TRS whose steps are not counted");
  dc->add_option("--fuel", o.fuel, "Bound on explored terms per start term");
  dc->add_option("--max-vars", o.max_vars, "Distinct variables in start terms");
  common(dc);

  auto* check = app.add_subcommand("check-tmi", "Check a triangular matrix interpretation");
  file_arg(check);
  check->add_option("--tmi", o.tmi, "Interpretation file")->required();
  common(check);

  auto* search = app.add_subcommand("search-tmi", "Search for a triangular matrix interpretation");
  file_arg(search);
  search->add_option("--dim", o.dim, "Dimension")->required()->check(CLI::PositiveNumber);
  search->add_option("--max-coeff", o.max_coeff, "Largest entry")->required()->check(CLI::PositiveNumber);
  search->add_option("--budget", o.budget, "Maximum number of symbol assignments");
  common(search);

  auto* verify = app.add_subcommand("verify", "Check a simulation property on enumerated terms");
  file_arg(verify);
  verify->add_option("--property", o.property,
                     "uncurried-step | ri-sim | nf-preservation | subterm-commutation | innermost-loop")
      ->required()
      ->check(CLI::IsMember({"uncurried-step", "ri-sim", "nf-preservation", "subterm-commutation", "innermost-loop"}));
  verify->add_option("--max-size", o.max_size, "Largest enumerated term size")->required();
  verify->add_option("--fuel", o.fuel, "Bound for each search")->required();
  verify->add_option("--max-vars", o.max_vars, "Distinct variables in enumerated terms");
  common(verify);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  Report report;
  try {
    app.parse(reversed);
    if (uncurry->parsed()) report = cmd_uncurry(o, err);
    else if (rewrite->parsed()) report = cmd_rewrite(o, err);
    else if (dh->parsed()) report = cmd_dh(o, err);
    else if (dc->parsed()) report = cmd_dc(o, err);
    else if (check->parsed()) report = cmd_check_tmi(o, err);
    else if (search->parsed()) report = cmd_search_tmi(o, err);
    else if (verify->parsed()) report = cmd_verify(o, err);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    report = Report{"", Status::InputError, {{"error", e.what()}}, ""};
    err << "error: " << e.what() << "\n";
  } catch (const Error& e) {
    const bool resource = e.kind() == ErrorKind::FuelExhausted || e.kind() == ErrorKind::Overflow;
    report.status = resource ? Status::Undecided : Status::InputError;
    report.data = {{"error", e.what()}, {"kind", std::string(to_string(e.kind()))}};
    report.text.clear();
    err << "error: " << e.what() << "\n";
  }

  if (json) {
    nlohmann::json j{{"command", report.command}, {"status", std::string(to_string(report.status))},
                     {"data", report.data}};
    out << j.dump(2) << "\n";
  } else {
    out << report.text;
  }
  return exit_code(report.status);
}

}  // namespace atrs::cli
