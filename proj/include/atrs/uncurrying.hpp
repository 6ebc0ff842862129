#pragma once

// Applicative term rewrite systems and the uncurrying transformation.
//
// An ATRS is a TRS whose signature has constants plus one binary
// application symbol. Uncurrying replaces application spines
// f @ t1 @ ... @ ti by fresh symbols f#i(t1, ..., ti), up to the
// applicative arity aa(f) observed in the rules. The combined system
// (uncurried eta-saturated rules plus the uncurrying rules) simulates the
// original one.

#include <charconv>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "atrs/trs.hpp"

namespace atrs {

/// Application symbol, constants, and applicative arities of an ATRS.
/// Family symbols f_i are rendered `f#i` with arity i; f_0 is the constant f.
class AtrsContext {
 public:
  AtrsContext() : app_(default_app()) {}
  AtrsContext(Symbol app, std::vector<Symbol> constants, std::map<std::string, std::size_t> aa)
      : app_(std::move(app)), constants_(std::move(constants)), aa_(std::move(aa)) {}

  const Symbol& app() const { return app_; }
  const std::vector<Symbol>& constants() const { return constants_; }
  const std::map<std::string, std::size_t>& arities() const { return aa_; }

  bool is_constant(const std::string& name) const { return aa_.count(name) > 0; }

  /// aa(f); constants that never occur in the rules have arity 0.
  std::size_t aa(const std::string& f) const {
    auto it = aa_.find(f);
    return it == aa_.end() ? 0 : it->second;
  }

  /// The family symbol f_i.
  Symbol family(const std::string& f, std::size_t i) const {
    if (i == 0) return Symbol{f, 0};
    return Symbol{f + "#" + std::to_string(i), i};
  }

  /// Recognises f_i (including f_0 = f) for source constants f with
  /// 0 ≤ i ≤ aa(f); returns (f, i).
  std::optional<std::pair<std::string, std::size_t>> family_member(const Symbol& s) const {
    if (s.arity == 0 && is_constant(s.name)) return std::make_pair(s.name, std::size_t{0});
    const auto hash = s.name.rfind('#');
    if (hash == std::string::npos || hash == 0 || hash + 1 == s.name.size()) return std::nullopt;
    std::size_t index = 0;
    const char* first = s.name.data() + hash + 1;
    const char* last = s.name.data() + s.name.size();
    auto [ptr, ec] = std::from_chars(first, last, index);
    if (ec != std::errc() || ptr != last || *first == '0') return std::nullopt;
    std::string base = s.name.substr(0, hash);
    if (!is_constant(base) || index != s.arity || index > aa(base)) return std::nullopt;
    return std::make_pair(std::move(base), index);
  }

 private:
  Symbol app_;
  std::vector<Symbol> constants_;
  std::map<std::string, std::size_t> aa_;
};

namespace detail {

// Head constant and argument count of an application spine, if the head
// is a constant.
inline std::optional<std::pair<std::string, std::size_t>> spine_head(const Term& t,
                                                                    const Symbol& app) {
  std::size_t n = 0;
  const Term* cur = &t;
  while (cur->is_function() && cur->symbol() == app) {
    cur = &cur->arg(0);
    ++n;
  }
  if (cur->is_variable() || cur->arity() != 0) return std::nullopt;
  return std::make_pair(cur->name(), n);
}

inline void scan_arities(const Term& t, const Symbol& app, std::map<std::string, std::size_t>& aa) {
  if (t.is_variable()) return;
  if (auto head = spine_head(t, app)) {
    auto& slot = aa[head->first];
    slot = std::max(slot, head->second);
  }
  for (const Term& a : t.args()) scan_arities(a, app, aa);
}

inline Term spine(Term head, std::vector<Term> args, const Symbol& app) {
  for (Term& a : args) head = Term::function(app, {std::move(head), std::move(a)});
  return head;
}

}  // namespace detail

/// Classifies `trs` as an ATRS and computes applicative arities.
///
/// With no hint, the unique binary symbol is the application symbol; a
/// system without binary symbols uses the builtin `app`.
inline AtrsContext detect_atrs(const Trs& trs, const std::optional<std::string>& app_hint = {}) {
  std::optional<Symbol> app;
  if (app_hint) {
    for (const Symbol& f : trs.signature()) {
      if (f.name == *app_hint && f.arity != 2) {
        throw Error(ErrorKind::NotApplicative, "hinted application symbol " + to_string(f) +
                                                   " is not binary");
      }
    }
    app = Symbol{*app_hint, 2};
  } else {
    for (const Symbol& f : trs.signature()) {
      if (f.arity != 2) continue;
      if (app) {
        throw Error(ErrorKind::AmbiguousApp,
                    "binary symbols " + to_string(*app) + " and " + to_string(f));
      }
      app = f;
    }
    if (!app) app = default_app();
  }

  std::vector<Symbol> constants;
  for (const Symbol& f : trs.signature()) {
    if (f == *app) continue;
    if (f.arity != 0) {
      throw Error(ErrorKind::NotApplicative, "symbol " + to_string(f) +
                                                 " is neither a constant nor the application symbol");
    }
    constants.push_back(f);
  }

  std::map<std::string, std::size_t> aa;
  for (const Symbol& c : constants) aa[c.name] = 0;
  for (const Rule& r : trs.rules()) {
    detail::scan_arities(r.lhs(), *app, aa);
    detail::scan_arities(r.rhs(), *app, aa);
  }

  AtrsContext ctx(*app, constants, aa);
  for (const Symbol& c : constants) {
    for (std::size_t i = 1; i <= ctx.aa(c.name); ++i) {
      const Symbol fresh = ctx.family(c.name, i);
      for (const Symbol& f : trs.signature()) {
        if (f.name == fresh.name) {
          throw Error(ErrorKind::NameClash, "uncurried symbol " + fresh.name +
                                                " collides with " + to_string(f));
        }
      }
    }
  }
  return ctx;
}

/// aa(t): aa(f) for a constant, aa(t1) - 1 for t1 @ t2. Undefined for a
/// variable head and where the result would be negative. Family terms
/// f_i(...) count as f applied to i arguments.
inline std::optional<std::size_t> applicative_arity_of_term(const AtrsContext& ctx, const Term& t) {
  if (t.is_variable()) return std::nullopt;
  if (t.symbol() == ctx.app()) {
    auto left = applicative_arity_of_term(ctx, t.arg(0));
    if (!left || *left == 0) return std::nullopt;
    return *left - 1;
  }
  if (auto member = ctx.family_member(t.symbol())) return ctx.aa(member->first) - member->second;
  return std::nullopt;
}

inline bool is_head_variable_free(const AtrsContext& ctx, const Term& t) {
  if (t.is_variable()) return true;
  if (t.symbol() == ctx.app() && t.arg(0).is_variable()) return false;
  return std::all_of(t.args().begin(), t.args().end(),
                     [&](const Term& a) { return is_head_variable_free(ctx, a); });
}

inline bool is_left_head_variable_free(const AtrsContext& ctx, const Trs& trs) {
  return std::all_of(trs.rules().begin(), trs.rules().end(),
                     [&](const Rule& r) { return is_head_variable_free(ctx, r.lhs()); });
}

/// Rules f_{i+1}(x1, ..., xi, y) -> f_i(x1, ..., xi) @ y for each n-ary f
/// and 0 ≤ i < n, where f_n is f itself and f_0 the constant named f.
inline Trs currying_system(const std::vector<Symbol>& signature, const Symbol& app = default_app()) {
  std::vector<Rule> rules;
  for (const Symbol& f : signature) {
    if (f == app) continue;
    for (std::size_t i = 0; i < f.arity; ++i) {
      std::vector<Term> xs;
      for (std::size_t k = 1; k <= i; ++k) xs.push_back(Term::variable("x" + std::to_string(k)));
      const Term y = Term::variable("y");
      const Symbol next = (i + 1 == f.arity) ? f : Symbol{f.name + "#" + std::to_string(i + 1), i + 1};
      const Symbol cur = (i == 0) ? Symbol{f.name, 0} : Symbol{f.name + "#" + std::to_string(i), i};
      std::vector<Term> lhs_args = xs;
      lhs_args.push_back(y);
      rules.emplace_back(Term::function(next, std::move(lhs_args)),
                         Term::function(app, {Term::function(cur, xs), y}));
    }
  }
  return Trs(std::move(rules));
}

/// The normal form of `t` under the currying system of `signature`: every
/// non-application symbol with arguments becomes a spine over its constant.
inline Term curry_nf(const std::vector<Symbol>& signature, const Term& t,
                     const Symbol& app = default_app()) {
  if (t.is_variable() || t.arity() == 0) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const Term& a : t.args()) args.push_back(curry_nf(signature, a, app));
  if (t.symbol() == app) return Term::function(app, std::move(args));

  std::string base = t.name();
  bool curried = std::find(signature.begin(), signature.end(), t.symbol()) != signature.end();
  if (!curried) {
    // Intermediate symbol f#k of some n-ary f with k < n.
    const auto hash = base.rfind('#');
    if (hash != std::string::npos) {
      const std::string f = base.substr(0, hash);
      for (const Symbol& g : signature) {
        if (g.name == f && g.arity > t.arity() && g != app &&
            base.substr(hash + 1) == std::to_string(t.arity())) {
          curried = true;
          base = f;
          break;
        }
      }
    }
  }
  if (!curried) return Term::function(t.symbol(), std::move(args));
  return detail::spine(Term::constant(base), std::move(args), app);
}

/// Rules f_i(x1, ..., xi) @ y -> f_{i+1}(x1, ..., xi, y) for every constant
/// f and 0 ≤ i < aa(f).
inline Trs uncurrying_system(const AtrsContext& ctx) {
  std::vector<Rule> rules;
  for (const Symbol& c : ctx.constants()) {
    const std::size_t n = ctx.aa(c.name);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Term> xs;
      for (std::size_t k = 1; k <= i; ++k) xs.push_back(Term::variable("x" + std::to_string(k)));
      const Term y = Term::variable("y");
      std::vector<Term> rhs_args = xs;
      rhs_args.push_back(y);
      rules.emplace_back(Term::function(ctx.app(), {Term::function(ctx.family(c.name, i), xs), y}),
                         Term::function(ctx.family(c.name, i + 1), std::move(rhs_args)));
    }
  }
  return Trs(std::move(rules));
}

/// The uncurrying normal form, computed bottom-up: after normalising both
/// sides of an application, a head f_i(...) with i < aa(f) absorbs the
/// argument.
inline Term uncurry_nf(const AtrsContext& ctx, const Term& t) {
  if (t.is_variable() || t.arity() == 0) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  bool changed = false;
  for (const Term& a : t.args()) {
    args.push_back(uncurry_nf(ctx, a));
    changed = changed || !args.back().same_node(a);
  }
  if (t.symbol() == ctx.app() && args[0].is_function()) {
    if (auto member = ctx.family_member(args[0].symbol());
        member && member->second < ctx.aa(member->first)) {
      std::vector<Term> absorbed(args[0].args().begin(), args[0].args().end());
      absorbed.push_back(std::move(args[1]));
      return Term::function(ctx.family(member->first, member->second + 1), std::move(absorbed));
    }
  }
  return changed ? Term::function(t.symbol(), std::move(args)) : t;
}

inline void require_left_head_variable_free(const AtrsContext& ctx, const Trs& trs) {
  for (const Rule& r : trs.rules()) {
    if (!is_head_variable_free(ctx, r.lhs())) {
      throw Error(ErrorKind::NotLeftHeadVariableFree,
                  "left-hand side " + to_string(r.lhs(), ctx.app()) +
                      " applies a variable");
    }
  }
}

/// The least extension of `trs` containing l @ x -> r @ x whenever l -> r
/// is in it and aa(l) > 0. Fresh variables are `_eta0`, `_eta1`, ...;
/// derived rules follow the original ones, duplicates (modulo renaming)
/// are dropped.
inline Trs eta_saturate(const AtrsContext& ctx, const Trs& trs) {
  require_left_head_variable_free(ctx, trs);
  Trs out(trs.rules());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Rule rule = out[i];
    const auto k = applicative_arity_of_term(ctx, rule.lhs());
    if (!k || *k == 0) continue;
    const auto vars = variables(rule.lhs());
    std::string fresh;
    for (std::size_t n = 0;; ++n) {
      fresh = "_eta" + std::to_string(n);
      if (std::find(vars.begin(), vars.end(), fresh) == vars.end()) break;
    }
    const Term x = Term::variable(fresh);
    out.add_rule_unique(Rule(Term::function(ctx.app(), {rule.lhs(), x}),
                             Term::function(ctx.app(), {rule.rhs(), x})));
  }
  return out;
}

/// l↓ -> r↓ for every rule l -> r.
inline Trs uncurried_trs(const AtrsContext& ctx, const Trs& trs) {
  require_left_head_variable_free(ctx, trs);
  std::vector<Rule> rules;
  rules.reserve(trs.size());
  for (const Rule& r : trs.rules()) {
    rules.emplace_back(uncurry_nf(ctx, r.lhs()), uncurry_nf(ctx, r.rhs()));
  }
  return Trs(std::move(rules));
}

enum class RuleOrigin { UncurriedEta, Uncurrying };

struct TransformResult {
  AtrsContext context;
  Trs uncurried;       ///< R↓, without eta-saturation
  Trs eta;             ///< R_η
  Trs u_rules;         ///< U(R)
  Trs uncurried_eta;   ///< R_η↓
  Trs combined;        ///< R_η↓ followed by U(R)
  std::vector<RuleOrigin> origin;  ///< parallel to combined.rules()
};

/// Full uncurrying of a left head variable free ATRS. Applicative arities
/// are those of the input, computed before eta-saturation.
inline TransformResult transform(const Trs& trs, const std::optional<std::string>& app_hint = {}) {
  TransformResult out;
  out.context = detect_atrs(trs, app_hint);
  require_left_head_variable_free(out.context, trs);
  out.uncurried = uncurried_trs(out.context, trs);
  out.eta = eta_saturate(out.context, trs);
  out.u_rules = uncurrying_system(out.context);
  out.uncurried_eta = uncurried_trs(out.context, out.eta);
  std::vector<Rule> rules = out.uncurried_eta.rules();
  out.origin.assign(rules.size(), RuleOrigin::UncurriedEta);
  for (const Rule& r : out.u_rules.rules()) {
    rules.push_back(r);
    out.origin.push_back(RuleOrigin::Uncurrying);
  }
  out.combined = Trs(std::move(rules));
  return out;
}

/// t↓C': curries every family symbol f_i(t1, ..., ti) back into the spine
/// f @ t1 @ ... @ ti.
inline Term curry_back(const AtrsContext& ctx, const Term& t) {
  if (t.is_variable()) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const Term& a : t.args()) args.push_back(curry_back(ctx, a));
  if (t.symbol() == ctx.app()) return Term::function(ctx.app(), std::move(args));
  auto member = ctx.family_member(t.symbol());
  if (!member) {
    throw Error(ErrorKind::UnknownSymbol, to_string(t.symbol()) + " is not in the uncurried signature");
  }
  if (member->second == 0) return t;
  return detail::spine(Term::constant(member->first), std::move(args), ctx.app());
}

/// Signature of the combined system: the application symbol, every
/// constant, and every family symbol f_i with 1 ≤ i ≤ aa(f).
inline std::vector<Symbol> uncurried_signature(const AtrsContext& ctx) {
  std::vector<Symbol> out;
  out.push_back(ctx.app());
  for (const Symbol& c : ctx.constants()) {
    for (std::size_t i = 0; i <= ctx.aa(c.name); ++i) out.push_back(ctx.family(c.name, i));
  }
  return out;
}

/// Signature of the source ATRS: application plus constants.
inline std::vector<Symbol> applicative_signature(const AtrsContext& ctx) {
  std::vector<Symbol> out{ctx.app()};
  out.insert(out.end(), ctx.constants().begin(), ctx.constants().end());
  return out;
}

}  // namespace atrs
