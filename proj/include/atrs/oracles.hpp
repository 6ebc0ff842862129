#pragma once

// Executable checks of the simulation properties of uncurrying over
// enumerated terms. Each check reports the instances it examined and the
// instances refuted by a complete bounded search; searches that run out of
// fuel are counted separately and never reported as refutations.

#include <deque>
#include <string>
#include <unordered_set>
#include <vector>

#include "atrs/enumerate.hpp"
#include "atrs/strategies.hpp"
#include "atrs/uncurrying.hpp"

namespace atrs {

struct VerificationFailure {
  std::vector<Term> inputs;
  std::string expected;
  std::vector<std::string> observed;
};

enum class VerificationStatus { Holds, Refuted, Undecided, Vacuous };

inline std::string_view to_string(VerificationStatus s) {
  switch (s) {
    case VerificationStatus::Holds: return "holds";
    case VerificationStatus::Refuted: return "refuted";
    case VerificationStatus::Undecided: return "undecided";
    case VerificationStatus::Vacuous: return "vacuous";
  }
  return "?";
}

struct VerificationReport {
  std::string property;
  std::size_t instances_checked = 0;
  std::size_t exhausted = 0;
  std::vector<VerificationFailure> failures{};

  VerificationStatus status() const {
    if (!failures.empty()) return VerificationStatus::Refuted;
    if (instances_checked == 0) return VerificationStatus::Vacuous;
    if (exhausted > 0) return VerificationStatus::Undecided;
    return VerificationStatus::Holds;
  }
};

enum class SearchOutcome { Found, NotFound, Exhausted };

/// Breadth-first search for a term satisfying `goal` reachable from `from`
/// in one or more steps. `visited` receives every term explored.
template <typename Goal>
SearchOutcome reaches_plus(const Rewriter& rewriter, Strategy strategy, const Term& from, Goal goal,
                           std::size_t fuel, std::vector<Term>* visited = nullptr) {
  std::unordered_set<Term, TermHash> seen;
  std::deque<Term> queue;
  auto discover = [&](const Term& t) {
    if (!seen.insert(t).second) return false;
    if (visited) visited->push_back(t);
    queue.push_back(t);
    return true;
  };
  for (const RewriteStep& s : rewriter.steps(from, strategy)) {
    if (goal(s.result)) return SearchOutcome::Found;
    discover(s.result);
  }
  while (!queue.empty()) {
    if (seen.size() > fuel) return SearchOutcome::Exhausted;
    const Term t = queue.front();
    queue.pop_front();
    for (const RewriteStep& s : rewriter.steps(t, strategy)) {
      if (goal(s.result)) return SearchOutcome::Found;
      discover(s.result);
    }
  }
  return SearchOutcome::NotFound;
}

namespace detail {

inline std::vector<std::string> render(const std::vector<Term>& terms, const Symbol& app) {
  std::vector<std::string> out;
  for (const Term& t : terms) out.push_back(to_string(t, app));
  return out;
}

struct Uncurried {
  TransformResult tr;
  Rewriter source;
  Rewriter combined;
  Rewriter u;
  Rewriter uncurried_eta;

  explicit Uncurried(const Trs& trs)
      : tr(transform(trs)),
        source(trs),
        combined(tr.combined),
        u(tr.u_rules),
        uncurried_eta(tr.uncurried_eta) {}
};

}  // namespace detail

/// For every enumerated s over the ATRS signature and every full step
/// s -> t: uncurry_nf(s) reaches uncurry_nf(t) in one or more steps of the
/// combined system.
inline VerificationReport verify_uncurried_step(const Trs& trs, std::size_t max_size, std::size_t fuel,
                                                std::size_t max_vars = 2) {
  VerificationReport report{"uncurried-step"};
  if (trs.empty()) return report;
  const detail::Uncurried sys(trs);
  const AtrsContext& ctx = sys.tr.context;
  for (const Term& s : enumerate_terms(applicative_signature(ctx), max_size, max_vars)) {
    for (const RewriteStep& step : sys.source.steps(s, Strategy::Full)) {
      ++report.instances_checked;
      const Term from = uncurry_nf(ctx, s);
      const Term target = uncurry_nf(ctx, step.result);
      std::vector<Term> visited;
      auto r = reaches_plus(sys.combined, Strategy::Full, from,
                            [&](const Term& x) { return x == target; }, fuel, &visited);
      if (r == SearchOutcome::Exhausted) {
        ++report.exhausted;
      } else if (r == SearchOutcome::NotFound) {
        report.failures.push_back(VerificationFailure{
            {s, step.result},
            to_string(from, ctx.app()) + " ->+ " + to_string(target, ctx.app()),
            detail::render(visited, ctx.app())});
      }
    }
  }
  return report;
}

/// Checks s ->i+ s' <-U* u for one source term t, one U-reduct s of t, and
/// every step t -> u of `strategy` in the source system.
inline void check_simulation(const detail::Uncurried& sys, const Term& t, const Term& s,
                             Strategy strategy, std::size_t fuel, VerificationReport& report) {
  const AtrsContext& ctx = sys.tr.context;
  for (const RewriteStep& step : sys.source.steps(t, strategy)) {
    ++report.instances_checked;
    std::vector<Term> targets;
    try {
      targets = reachable_closure(sys.u, step.result, fuel);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::FuelExhausted) throw;
      ++report.exhausted;
      continue;
    }
    const std::unordered_set<Term, TermHash> target_set(targets.begin(), targets.end());
    std::vector<Term> visited;
    auto r = reaches_plus(sys.combined, Strategy::Innermost, s,
                          [&](const Term& x) { return target_set.count(x) > 0; }, fuel, &visited);
    if (r == SearchOutcome::Exhausted) {
      ++report.exhausted;
    } else if (r == SearchOutcome::NotFound) {
      std::vector<std::string> observed{"targets: "};
      for (const Term& x : targets) observed.front() += to_string(x, ctx.app()) + "; ";
      std::string reached = "reached: ";
      for (const Term& x : visited) reached += to_string(x, ctx.app()) + "; ";
      observed.push_back(std::move(reached));
      report.failures.push_back(VerificationFailure{
          {s, t, step.result},
          to_string(s, ctx.app()) + " i->+ . <-U* " + to_string(step.result, ctx.app()),
          std::move(observed)});
    }
  }
}

/// For every enumerated t, every U-reduct s of t and every rightmost
/// innermost step t -> u: some s' has s ->i+ s' (combined system) and
/// u ->U* s'.
inline VerificationReport verify_rightmost_simulation(const Trs& trs, std::size_t max_size,
                                                      std::size_t fuel, std::size_t max_vars = 2) {
  VerificationReport report{"ri-sim"};
  if (trs.empty()) return report;
  const detail::Uncurried sys(trs);
  for (const Term& t : enumerate_terms(applicative_signature(sys.tr.context), max_size, max_vars)) {
    if (sys.source.is_normal_form(t)) continue;
    for (const Term& s : reachable_closure(sys.u, t, fuel)) {
      check_simulation(sys, t, s, Strategy::RightmostInnermost, fuel, report);
    }
  }
  return report;
}

/// The innermost variant of the simulation check on a single instance:
/// source term `t`, U-reduct `s`. Failures list the unsimulated steps.
inline VerificationReport verify_simulation_instance(const Trs& trs, const Term& t, const Term& s,
                                                     Strategy strategy, std::size_t fuel) {
  VerificationReport report{strategy == Strategy::Innermost ? "innermost-sim-instance"
                                                            : "ri-sim-instance"};
  const detail::Uncurried sys(trs);
  check_simulation(sys, t, s, strategy, fuel, report);
  return report;
}

/// The system {f -> g, f @ x -> g @ x, a -> b}.
inline Trs weakening_counterexample_system() {
  const Symbol app = default_app();
  const Term f = Term::constant("f"), g = Term::constant("g"), a = Term::constant("a"),
             b = Term::constant("b"), x = Term::variable("x");
  return Trs({Rule(f, g), Rule(Term::function(app, {f, x}), Term::function(app, {g, x})), Rule(a, b)});
}

/// Reproduces the failure of the simulation property once rightmost
/// innermost steps are weakened to innermost ones: f#1(a) <-U* f @ a ->i
/// g @ a, yet f#1(a) reaches neither g @ a nor g#1(a) innermost. The
/// report's failures hold exactly that instance.
inline VerificationReport verify_innermost_weakening_fails(std::size_t fuel = 10000) {
  const Trs trs = weakening_counterexample_system();
  const Symbol app = default_app();
  const Term source = Term::function(app, {Term::constant("f"), Term::constant("a")});
  const Term uncurried = Term::function(Symbol{"f#1", 1}, {Term::constant("a")});
  auto report = verify_simulation_instance(trs, source, uncurried, Strategy::Innermost, fuel);
  report.property = "innermost-weakening";
  return report;
}

/// For every enumerated normal form s over the ATRS signature and every
/// U-reduct t of s: t is a normal form of the uncurried eta-saturated rules.
inline VerificationReport verify_nf_preservation(const Trs& trs, std::size_t max_size,
                                                 std::size_t max_vars = 2, std::size_t fuel = 10000) {
  VerificationReport report{"nf-preservation"};
  const detail::Uncurried sys(trs);
  const AtrsContext& ctx = sys.tr.context;
  for (const Term& s : enumerate_terms(applicative_signature(ctx), max_size, max_vars)) {
    if (!sys.source.is_normal_form(s)) continue;
    for (const Term& t : reachable_closure(sys.u, s, fuel)) {
      ++report.instances_checked;
      if (!sys.uncurried_eta.is_normal_form(t)) {
        report.failures.push_back(VerificationFailure{
            {s, t}, to_string(t, ctx.app()) + " in NF(R_eta uncurried)",
            {"redex found in " + to_string(t, ctx.app())}});
      }
    }
  }
  return report;
}

/// For every enumerated s over the uncurried signature and every proper
/// subterm u of a U-reduct of s: some proper subterm v of s has v ->U* u.
inline VerificationReport verify_subterm_commutation(const AtrsContext& ctx, std::size_t max_size,
                                                     std::size_t max_vars = 2, std::size_t fuel = 10000) {
  VerificationReport report{"subterm-commutation"};
  const Rewriter u(uncurrying_system(ctx));
  for (const Term& s : enumerate_terms(uncurried_signature(ctx), max_size, max_vars)) {
    std::unordered_set<Term, TermHash> below;
    for (const Term& v : proper_subterms(s)) {
      for (const Term& w : reachable_closure(u, v, fuel)) below.insert(w);
    }
    for (const Term& t : reachable_closure(u, s, fuel)) {
      for (const Term& sub : proper_subterms(t)) {
        ++report.instances_checked;
        if (!below.count(sub)) {
          report.failures.push_back(VerificationFailure{
              {s, t, sub}, "a proper subterm of " + to_string(s, ctx.app()) + " U-reduces to " +
                               to_string(sub, ctx.app()),
              {}});
        }
      }
    }
  }
  return report;
}

}  // namespace atrs
