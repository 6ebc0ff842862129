#pragma once

// Shared fixtures and reference implementations. The reference code here is
// deliberately naive and shares no logic with the library beyond the term
// data structure.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "atrs/atrs.hpp"

namespace atrs::testing {

inline Trs trs(const std::string& text) { return parse_trs(text).trs; }

/// Parses a term whose variables are exactly the listed names.
inline Term term(const std::string& text, std::vector<std::string> vars = {"x", "y", "z"}) {
  return parse_term(text, vars);
}

inline Term term_over(const std::string& text, const Trs& r, std::vector<std::string> vars = {"x", "y", "z"}) {
  return parse_term(text, vars, r.signature());
}

// Sample systems.
inline Trs r_id() { return trs("(VAR x) (RULES id @ x -> x  f @ x -> id @ f @ x)"); }
inline Trs r_ex3() { return trs("(VAR x) (RULES f @ x -> f @ x  f -> g)"); }
inline Trs r_ex4() { return trs("(VAR x) (RULES f -> g  a -> b  g @ x -> h)"); }
inline Trs r_ex5() { return trs("(VAR x) (RULES f -> g  f @ x -> g @ x  a -> b)"); }
inline Trs r_add() {
  return trs("(VAR x y) (RULES add @ x @ 0 -> x  add @ x @ (s @ y) -> s @ (add @ x @ y))");
}
inline Trs r_exp() { return trs("(VAR x) (RULES f @ (s @ x) -> s @ (s @ (f @ x))  f -> s)"); }

inline std::vector<std::string> rendered(const Trs& r) {
  std::vector<std::string> out;
  for (const Rule& rule : r.rules()) out.push_back(to_string(rule.canonical()));
  return out;
}

inline std::vector<std::string> rendered(const std::vector<std::string>& rules) {
  std::vector<std::string> out;
  for (const std::string& text : rules) {
    const Trs r = trs("(VAR x y z x1 x2 _eta0) (RULES " + text + ")");
    out.push_back(to_string(r[0].canonical()));
  }
  return out;
}

/// Rule sets as sorted canonical strings, for comparison modulo renaming
/// and order.
inline std::vector<std::string> rule_set(const Trs& r) {
  auto out = rendered(r);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::string> rule_set(const std::vector<std::string>& rules) {
  auto out = rendered(rules);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Reference enumeration: all terms up to a size over a signature, with
// variables drawn from a fixed pool, then deduplicated modulo renaming and
// filtered by the number of distinct variables.

inline std::vector<Term> brute_terms(const std::vector<Symbol>& sig, std::size_t max_size, std::size_t max_vars) {
  std::vector<std::string> pool;
  for (std::size_t i = 0; i < max_vars; ++i) pool.push_back("_v" + std::to_string(i));
  std::vector<std::vector<Term>> by_size(max_size + 1);
  for (std::size_t n = 1; n <= max_size; ++n) {
    if (n == 1) {
      for (const auto& v : pool) by_size[1].push_back(Term::variable(v));
    }
    for (const Symbol& f : sig) {
      if (f.arity == 0) {
        if (n == 1) by_size[1].push_back(Term::constant(f.name));
        continue;
      }
      // Distribute n - 1 over the arguments.
      std::vector<Term> args;
      std::function<void(std::size_t, std::size_t)> fill = [&](std::size_t i, std::size_t left) {
        if (i == f.arity) {
          if (left == 0) by_size[n].push_back(Term::function(f, args));
          return;
        }
        for (std::size_t k = 1; k <= left; ++k) {
          for (const Term& a : by_size[k]) {
            args.push_back(a);
            fill(i + 1, left - k);
            args.pop_back();
          }
        }
      };
      fill(0, n - 1);
    }
  }
  std::set<std::string> seen;
  std::vector<Term> out;
  for (std::size_t n = 1; n <= max_size; ++n) {
    for (const Term& t : by_size[n]) {
      if (seen.insert(to_string(canonical(t))).second) out.push_back(t);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reference rewriting: one-step reducts by trying every rule at every
// subterm, computed by plain recursion.

inline std::optional<std::map<std::string, Term>> naive_match(const Term& l, const Term& t,
                                                             std::map<std::string, Term> sigma = {}) {
  if (l.is_variable()) {
    auto it = sigma.find(l.name());
    if (it == sigma.end()) {
      sigma.emplace(l.name(), t);
      return sigma;
    }
    if (it->second == t) return sigma;
    return std::nullopt;
  }
  if (t.is_variable() || l.symbol() != t.symbol()) return std::nullopt;
  for (std::size_t i = 0; i < l.arity(); ++i) {
    auto next = naive_match(l.arg(i), t.arg(i), sigma);
    if (!next) return std::nullopt;
    sigma = std::move(*next);
  }
  return sigma;
}

inline Term naive_apply(const Term& t, const std::map<std::string, Term>& sigma) {
  if (t.is_variable()) {
    auto it = sigma.find(t.name());
    return it == sigma.end() ? t : it->second;
  }
  std::vector<Term> args;
  for (const Term& a : t.args()) args.push_back(naive_apply(a, sigma));
  return Term::function(t.symbol(), args);
}

inline bool naive_redex(const Trs& r, const Term& t) {
  for (const Rule& rule : r.rules()) {
    if (naive_match(rule.lhs(), t)) return true;
  }
  return false;
}

inline bool naive_nf(const Trs& r, const Term& t) {
  if (naive_redex(r, t)) return false;
  if (t.is_variable()) return true;
  for (const Term& a : t.args()) {
    if (!naive_nf(r, a)) return false;
  }
  return true;
}

/// Reducts in a set; `innermost` restricts to redexes whose arguments are
/// normal forms.
inline std::set<Term> naive_reducts(const Trs& r, const Term& t, bool innermost) {
  std::set<Term> out;
  if (t.is_variable()) return out;
  const bool args_nf = std::all_of(t.args().begin(), t.args().end(), [&](const Term& a) { return naive_nf(r, a); });
  if (!innermost || args_nf) {
    for (const Rule& rule : r.rules()) {
      if (auto sigma = naive_match(rule.lhs(), t)) out.insert(naive_apply(rule.rhs(), *sigma));
    }
  }
  for (std::size_t i = 0; i < t.arity(); ++i) {
    for (const Term& s : naive_reducts(r, t.arg(i), innermost)) {
      std::vector<Term> args(t.args().begin(), t.args().end());
      args[i] = s;
      out.insert(Term::function(t.symbol(), args));
    }
  }
  return out;
}

/// Derivation height by unmemoized recursion; only for terminating terms
/// with small derivation trees.
inline std::size_t naive_dh(const Trs& r, const Term& t, bool innermost) {
  std::size_t best = 0;
  for (const Term& s : naive_reducts(r, t, innermost)) best = std::max(best, 1 + naive_dh(r, s, innermost));
  return best;
}

/// All normal forms reachable from t (for terminating systems).
inline std::set<Term> naive_normal_forms(const Trs& r, const Term& t) {
  const auto next = naive_reducts(r, t, false);
  if (next.empty()) return {t};
  std::set<Term> out;
  for (const Term& s : next) {
    auto nfs = naive_normal_forms(r, s);
    out.insert(nfs.begin(), nfs.end());
  }
  return out;
}

inline std::size_t value(const FuelOutcome<std::size_t>& h) {
  if (!h.finished()) throw std::runtime_error("derivation height did not finish");
  return h.value();
}

}  // namespace atrs::testing
