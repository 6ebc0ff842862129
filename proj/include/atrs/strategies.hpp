#pragma once

// Rewrite steps under full, innermost and rightmost-innermost strategies,
// relative rewriting, normalisation and derivation heights.

#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include "atrs/enumerate.hpp"
#include "atrs/trs.hpp"

namespace atrs {

enum class Strategy { Full, Innermost, RightmostInnermost };

inline std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Full: return "full";
    case Strategy::Innermost: return "innermost";
    case Strategy::RightmostInnermost: return "ri";
  }
  return "?";
}

struct RewriteStep {
  Position position;
  std::size_t rule_index = 0;
  Substitution matcher;
  Term result;
};

/// Rule index recorded for steps of a relative relation, which have no
/// single contracted rule.
inline constexpr std::size_t kRelativeStep = std::numeric_limits<std::size_t>::max();

/// Evidence of non-termination: the trace leads from `start` back to `start`.
struct LoopWitness {
  Term start;
  std::vector<RewriteStep> trace;
};

struct FuelExhausted {};

template <typename T>
struct Finished {
  T value;
};

/// Outcome of a fuel-bounded computation; exactly one alternative holds.
template <typename T>
class FuelOutcome {
 public:
  FuelOutcome(Finished<T> v) : v_(std::move(v)) {}
  FuelOutcome(FuelExhausted v) : v_(v) {}
  FuelOutcome(LoopWitness v) : v_(std::move(v)) {}

  bool finished() const { return std::holds_alternative<Finished<T>>(v_); }
  bool exhausted() const { return std::holds_alternative<FuelExhausted>(v_); }
  bool loop() const { return std::holds_alternative<LoopWitness>(v_); }

  const T& value() const { return std::get<Finished<T>>(v_).value; }
  const LoopWitness& witness() const { return std::get<LoopWitness>(v_); }

 private:
  std::variant<Finished<T>, FuelExhausted, LoopWitness> v_;
};

/// Rules of a TRS indexed by the head symbol of their left-hand side.
class Rewriter {
 public:
  explicit Rewriter(const Trs& trs) : trs_(trs) {
    for (std::size_t i = 0; i < trs.size(); ++i) by_head_[trs[i].lhs().symbol()].push_back(i);
  }

  const Trs& trs() const { return trs_; }

  /// Applicable rules at the root of `t`, with their matchers.
  std::vector<std::pair<std::size_t, Substitution>> root_matches(const Term& t) const {
    std::vector<std::pair<std::size_t, Substitution>> out;
    if (t.is_variable()) return out;
    auto it = by_head_.find(t.symbol());
    if (it == by_head_.end()) return out;
    for (std::size_t i : it->second) {
      if (auto sigma = match(trs_[i].lhs(), t)) out.emplace_back(i, std::move(*sigma));
    }
    return out;
  }

  bool is_redex(const Term& t) const {
    if (t.is_variable()) return false;
    auto it = by_head_.find(t.symbol());
    if (it == by_head_.end()) return false;
    for (std::size_t i : it->second) {
      if (match(trs_[i].lhs(), t)) return true;
    }
    return false;
  }

  bool is_normal_form(const Term& t) const {
    if (is_redex(t)) return false;
    for (const Term& a : t.args()) {
      if (!is_normal_form(a)) return false;
    }
    return true;
  }

  /// Steps of `t` under `strategy`, ordered by position (pre-order) and
  /// then rule index.
  std::vector<RewriteStep> steps(const Term& t, Strategy strategy) const {
    std::vector<Candidate> found;
    std::vector<std::size_t> path;
    collect(t, path, strategy != Strategy::Full, found);
    if (strategy == Strategy::RightmostInnermost && !found.empty()) {
      // Innermost redex positions are pairwise parallel, so the rightmost
      // one is the lexicographically greatest.
      Position rightmost = found.front().position;
      for (const auto& c : found) rightmost = std::max(rightmost, c.position);
      std::erase_if(found, [&](const Candidate& c) { return c.position != rightmost; });
    }
    std::sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) {
      return std::tie(a.position, a.rule_index) < std::tie(b.position, b.rule_index);
    });
    std::vector<RewriteStep> out;
    out.reserve(found.size());
    for (auto& c : found) {
      const Term contractum = substitute(trs_[c.rule_index].rhs(), c.matcher);
      Term result = replace(t, c.position, contractum);
      out.push_back(RewriteStep{std::move(c.position), c.rule_index, std::move(c.matcher),
                                std::move(result)});
    }
    return out;
  }

 private:
  struct Candidate {
    Position position;
    std::size_t rule_index;
    Substitution matcher;
  };

  // Returns whether the subtree rooted at `t` contains a redex.
  bool collect(const Term& t, std::vector<std::size_t>& path, bool innermost,
               std::vector<Candidate>& out) const {
    bool below = false;
    for (std::size_t i = 0; i < t.arity(); ++i) {
      path.push_back(i + 1);
      below = collect(t.arg(i), path, innermost, out) || below;
      path.pop_back();
    }
    auto matches = root_matches(t);
    if (matches.empty()) return below;
    if (!innermost || !below) {
      for (auto& [index, sigma] : matches) {
        out.push_back(Candidate{Position(path), index, std::move(sigma)});
      }
    }
    return true;
  }

  Trs trs_;
  std::map<Symbol, std::vector<std::size_t>> by_head_;
};

inline std::vector<RewriteStep> redexes(const Trs& trs, const Term& t, Strategy strategy) {
  return Rewriter(trs).steps(t, strategy);
}

inline std::optional<Position> rightmost_innermost_position(const Trs& trs, const Term& t) {
  auto steps = redexes(trs, t, Strategy::RightmostInnermost);
  if (steps.empty()) return std::nullopt;
  return steps.front().position;
}

namespace detail {

inline std::vector<Term> distinct_results(const std::vector<RewriteStep>& steps) {
  std::vector<Term> out;
  std::unordered_set<Term, TermHash> seen;
  for (const RewriteStep& s : steps) {
    if (seen.insert(s.result).second) out.push_back(s.result);
  }
  return out;
}

}  // namespace detail

/// One-step reducts of `t`, deduplicated, in step order.
inline std::vector<Term> successors(const Trs& trs, const Term& t, Strategy strategy) {
  return detail::distinct_results(redexes(trs, t, strategy));
}

/// All terms reachable from `t` in zero or more full steps of `rewriter`,
/// `t` first, in breadth-first order. Throws fuel-exhausted when more than
/// `fuel` distinct terms are reachable.
inline std::vector<Term> reachable_closure(const Rewriter& rewriter, const Term& t,
                                           std::size_t fuel, Strategy strategy = Strategy::Full) {
  std::vector<Term> out{t};
  std::unordered_set<Term, TermHash> seen{t};
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (const RewriteStep& s : rewriter.steps(out[i], strategy)) {
      if (!seen.insert(s.result).second) continue;
      if (out.size() >= fuel) {
        throw Error(ErrorKind::FuelExhausted,
                    "more than " + std::to_string(fuel) + " terms reachable from " + to_string(t));
      }
      out.push_back(s.result);
    }
  }
  return out;
}

/// Relative successors: all u with t ->S* . ->R . ->S* u, full rewriting.
class RelativeRewriter {
 public:
  RelativeRewriter(const Trs& counted, const Trs& free) : counted_(counted), free_(free) {}

  std::vector<Term> successors(const Term& t, std::size_t fuel) const {
    std::vector<Term> out;
    std::unordered_set<Term, TermHash> seen;
    for (const Term& u : reachable_closure(free_, t, fuel)) {
      for (const RewriteStep& step : counted_.steps(u, Strategy::Full)) {
        for (const Term& w : reachable_closure(free_, step.result, fuel)) {
          if (seen.insert(w).second) out.push_back(w);
        }
      }
    }
    return out;
  }

 private:
  Rewriter counted_;
  Rewriter free_;
};

inline std::vector<Term> relative_successors(const Trs& counted, const Trs& free, const Term& t,
                                             std::size_t fuel) {
  return RelativeRewriter(counted, free).successors(t, fuel);
}

/// Follows the first step of each term until a normal form, a repeated
/// term on the path, or `fuel` steps.
inline FuelOutcome<Term> normalize(const Trs& trs, const Term& t, Strategy strategy,
                                   std::size_t fuel) {
  const Rewriter rewriter(trs);
  std::vector<Term> path{t};
  std::vector<RewriteStep> trace;
  TermMap<std::size_t> index{{t, 0}};
  for (std::size_t n = 0;; ++n) {
    auto steps = rewriter.steps(path.back(), strategy);
    if (steps.empty()) return Finished<Term>{path.back()};
    if (n == fuel) return FuelExhausted{};
    RewriteStep step = std::move(steps.front());
    const Term next = step.result;
    trace.push_back(std::move(step));
    if (auto it = index.find(next); it != index.end()) {
      return LoopWitness{next, std::vector<RewriteStep>(trace.begin() + it->second, trace.end())};
    }
    index.emplace(next, path.size());
    path.push_back(next);
  }
}

namespace detail {

/// Exact innermost heights by structure. A root step needs every argument in
/// normal form, so each argument contributes the length of its longest path
/// to whichever normal form it ends in. The profile of t maps every normal
/// form reachable innermost from t to the longest such path.
class InnermostProfiles {
 public:
  using Profile = std::vector<std::pair<Term, std::size_t>>;

  explicit InnermostProfiles(std::shared_ptr<Rewriter> rewriter) : rewriter_(std::move(rewriter)) {}

  /// nullopt on a cycle, unbounded growth or spent budget; the caller then
  /// falls back to explicit search.
  std::optional<std::size_t> height(const Term& t, std::size_t budget) {
    budget_ = budget;
    depth_ = 0;
    active_.clear();
    try {
      std::size_t best = 0;
      for (const auto& [nf, len] : profile(t)) best = std::max(best, len);
      return best;
    } catch (const GiveUp&) {
      return std::nullopt;
    }
  }

 private:
  struct GiveUp {};
  static constexpr std::size_t kMaxDepth = 20000;

  void spend() {
    if (budget_ == 0) throw GiveUp{};
    --budget_;
  }

  const Profile& profile(const Term& t) {
    if (auto it = memo_.find(t); it != memo_.end()) return it->second;
    if (!active_.emplace(t, true).second || depth_ == kMaxDepth) throw GiveUp{};
    spend();
    ++depth_;
    struct Leave {
      InnermostProfiles& self;
      const Term& t;
      ~Leave() {
        --self.depth_;
        self.active_.erase(t);
      }
    } leave{*this, t};

    TermMap<std::size_t> out;
    auto record = [&](const Term& nf, std::size_t len) {
      auto [it, fresh] = out.emplace(nf, len);
      if (!fresh) it->second = std::max(it->second, len);
    };
    if (t.is_variable()) {
      record(t, 0);
    } else {
      std::vector<const Profile*> args;
      for (const Term& a : t.args()) args.push_back(&profile(a));
      std::vector<std::size_t> pick(args.size(), 0);
      for (;;) {
        spend();
        std::vector<Term> nfs;
        std::size_t base = 0;
        for (std::size_t i = 0; i < args.size(); ++i) {
          nfs.push_back((*args[i])[pick[i]].first);
          base += (*args[i])[pick[i]].second;
        }
        // Arguments are normal forms, so only the root can be a redex.
        const Term s = intern(Term::function(t.symbol(), std::move(nfs)));
        std::vector<Term> results;
        for (const auto& [index, sigma] : rewriter_->root_matches(s)) {
          Term r = intern(substitute(rewriter_->trs()[index].rhs(), sigma));
          if (std::find(results.begin(), results.end(), r) == results.end()) results.push_back(std::move(r));
        }
        if (results.empty()) record(s, base);
        for (const Term& r : results) {
          for (const auto& [nf, len] : profile(r)) record(nf, base + 1 + len);
        }
        std::size_t i = 0;
        while (i < pick.size() && ++pick[i] == args[i]->size()) pick[i++] = 0;
        if (i == pick.size()) break;
      }
    }
    return memo_.emplace(t, Profile(out.begin(), out.end())).first->second;
  }

  // Shared nodes keep equality tests on large normal forms shallow.
  Term intern(Term t) { return *pool_.insert(std::move(t)).first; }

  std::shared_ptr<Rewriter> rewriter_;
  std::unordered_set<Term, TermHash> pool_;
  TermMap<Profile> memo_;
  TermMap<bool> active_;
  std::size_t budget_ = 0;
  std::size_t depth_ = 0;
};

}  // namespace detail

/// Memoised derivation heights over a successor relation.
///
/// The memo survives between calls, so heights of terms already explored
/// are free. Fuel bounds the number of terms newly expanded per call. A
/// cycle reachable from the start term yields a loop witness.
class HeightSolver {
 public:
  using StepFn = std::function<std::vector<RewriteStep>(const Term&)>;

  explicit HeightSolver(StepFn steps) : steps_(std::move(steps)) {}

  static HeightSolver for_strategy(const Trs& trs, Strategy strategy) {
    auto rewriter = std::make_shared<Rewriter>(trs);
    HeightSolver solver([rewriter, strategy](const Term& t) { return rewriter->steps(t, strategy); });
    if (strategy == Strategy::Innermost) solver.profiles_ = std::make_shared<detail::InnermostProfiles>(rewriter);
    return solver;
  }

  /// Steps counted modulo free steps of `free`; successor computations
  /// that exceed `closure_fuel` report exhaustion.
  static HeightSolver for_relative(const Trs& counted, const Trs& free, std::size_t closure_fuel) {
    auto rel = std::make_shared<RelativeRewriter>(counted, free);
    return HeightSolver([rel, closure_fuel](const Term& t) {
      std::vector<RewriteStep> out;
      for (Term& u : rel->successors(t, closure_fuel)) {
        out.push_back(RewriteStep{Position{}, kRelativeStep, {}, std::move(u)});
      }
      return out;
    });
  }

  FuelOutcome<std::size_t> height(const Term& start, std::size_t fuel) {
    if (auto it = memo_.find(start); it != memo_.end()) return Finished<std::size_t>{it->second};
    if (profiles_) {
      if (auto h = profiles_->height(start, fuel)) {
        memo_.emplace(start, *h);
        return Finished<std::size_t>{*h};
      }
    }

    struct Frame {
      Term term;
      std::vector<RewriteStep> steps;
      std::size_t next = 0;
      std::size_t best = 0;
    };
    std::vector<Frame> stack;
    TermMap<std::size_t> on_path;
    std::size_t expanded = 0;

    auto push = [&](const Term& t) -> bool {
      if (expanded++ == fuel) return false;
      std::vector<RewriteStep> steps;
      try {
        steps = steps_(t);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::FuelExhausted) return false;
        throw;
      }
      on_path.emplace(t, stack.size());
      stack.push_back(Frame{t, std::move(steps)});
      return true;
    };

    if (!push(start)) return FuelExhausted{};
    while (!stack.empty()) {
      Frame& top = stack.back();
      if (top.next == top.steps.size()) {
        const std::size_t h = top.best;
        memo_.emplace(top.term, h);
        on_path.erase(top.term);
        stack.pop_back();
        if (!stack.empty()) stack.back().best = std::max(stack.back().best, h + 1);
        continue;
      }
      const RewriteStep& step = top.steps[top.next++];
      if (auto it = memo_.find(step.result); it != memo_.end()) {
        top.best = std::max(top.best, it->second + 1);
        continue;
      }
      if (auto it = on_path.find(step.result); it != on_path.end()) {
        LoopWitness w{step.result, {}};
        for (std::size_t k = it->second; k < stack.size(); ++k) {
          w.trace.push_back(stack[k].steps[stack[k].next - 1]);
        }
        return w;
      }
      const Term next = step.result;
      if (!push(next)) return FuelExhausted{};
    }
    return Finished<std::size_t>{memo_.at(start)};
  }

  std::size_t memo_size() const { return memo_.size(); }

 private:
  StepFn steps_;
  TermMap<std::size_t> memo_;
  std::shared_ptr<detail::InnermostProfiles> profiles_;
};

inline FuelOutcome<std::size_t> derivation_height(const Trs& trs, const Term& t, Strategy strategy,
                                                  std::size_t fuel) {
  return HeightSolver::for_strategy(trs, strategy).height(t, fuel);
}

/// Result of searching enumerated terms for an innermost cycle.
struct LoopSearch {
  std::optional<LoopWitness> witness;
  std::size_t terms_checked = 0;
  std::size_t exhausted = 0;  ///< terms whose exploration ran out of fuel
};

/// Looks for an exact innermost cycle reachable from any term of size
/// ≤ max_size over the signature of `trs`.
inline LoopSearch detect_innermost_nontermination(const Trs& trs, std::size_t max_size,
                                                  std::size_t fuel, std::size_t max_vars = 2) {
  LoopSearch out;
  if (trs.empty()) return out;
  auto solver = HeightSolver::for_strategy(trs, Strategy::Innermost);
  TermEnumerator terms(trs.signature(), max_vars);
  for (std::size_t n = 1; n <= max_size; ++n) {
    for (const Term& t : terms.of_size(n)) {
      ++out.terms_checked;
      auto r = solver.height(t, fuel);
      if (r.loop()) {
        out.witness = r.witness();
        return out;
      }
      if (r.exhausted()) ++out.exhausted;
    }
  }
  return out;
}

}  // namespace atrs
