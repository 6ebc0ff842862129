#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "atrs/term.hpp"

namespace atrs {

/// A rewrite rule l -> r: l is not a variable and vars(r) ⊆ vars(l).
class Rule {
 public:
  Rule(Term lhs, Term rhs) : lhs_(std::move(lhs)), rhs_(std::move(rhs)) {
    if (lhs_.is_variable()) {
      throw Error(ErrorKind::InvalidRule, "left-hand side is a variable: " + to_string(lhs_));
    }
    const auto lvars = variables(lhs_);
    for (const auto& v : variables(rhs_)) {
      if (std::find(lvars.begin(), lvars.end(), v) == lvars.end()) {
        throw Error(ErrorKind::InvalidRule,
                    "variable " + v + " of " + to_string(rhs_) + " does not occur in " +
                        to_string(lhs_));
      }
    }
  }

  const Term& lhs() const { return lhs_; }
  const Term& rhs() const { return rhs_; }

  /// Both sides renamed with one shared canonical renaming.
  Rule canonical() const {
    CanonicalRenaming r;
    Term l = r.apply(lhs_);
    return Rule(std::move(l), r.apply(rhs_));
  }

  bool is_duplicating() const {
    for (const auto& v : variables(rhs_)) {
      if (occurrences(rhs_, v) > occurrences(lhs_, v)) return true;
    }
    return false;
  }

  friend bool operator==(const Rule&, const Rule&) = default;

 private:
  Term lhs_;
  Term rhs_;
};

inline std::string to_string(const Rule& rule, const Symbol& app = default_app()) {
  return to_string(rule.lhs(), app) + " -> " + to_string(rule.rhs(), app);
}

inline bool equal_modulo_renaming(const Rule& a, const Rule& b) {
  return a.canonical() == b.canonical();
}

namespace detail {

inline void collect_symbols(const Term& t, std::vector<Symbol>& out) {
  if (t.is_variable()) return;
  if (std::find(out.begin(), out.end(), t.symbol()) == out.end()) out.push_back(t.symbol());
  for (const Term& a : t.args()) collect_symbols(a, out);
}

}  // namespace detail

/// Function symbols of `t` in pre-order of first occurrence.
inline std::vector<Symbol> symbols_of(const Term& t) {
  std::vector<Symbol> out;
  detail::collect_symbols(t, out);
  return out;
}

/// A finite, ordered list of rules over a signature. The signature keeps
/// first-occurrence order, followed by any extra declared symbols.
class Trs {
 public:
  Trs() = default;

  explicit Trs(std::vector<Rule> rules, std::vector<Symbol> extra_symbols = {})
      : rules_(std::move(rules)) {
    for (const Rule& r : rules_) {
      detail::collect_symbols(r.lhs(), signature_);
      detail::collect_symbols(r.rhs(), signature_);
    }
    for (Symbol& f : extra_symbols) add_symbol(std::move(f));
  }

  const std::vector<Rule>& rules() const { return rules_; }
  const std::vector<Symbol>& signature() const { return signature_; }
  std::size_t size() const { return rules_.size(); }
  bool empty() const { return rules_.empty(); }
  const Rule& operator[](std::size_t i) const { return rules_[i]; }

  void add_symbol(Symbol f) {
    if (std::find(signature_.begin(), signature_.end(), f) == signature_.end()) {
      signature_.push_back(std::move(f));
    }
  }

  bool has_symbol(const Symbol& f) const {
    return std::find(signature_.begin(), signature_.end(), f) != signature_.end();
  }

  /// Appends a rule unless an equal rule (modulo renaming) is present.
  bool add_rule_unique(const Rule& rule) {
    for (const Rule& r : rules_) {
      if (equal_modulo_renaming(r, rule)) return false;
    }
    rules_.push_back(rule);
    detail::collect_symbols(rule.lhs(), signature_);
    detail::collect_symbols(rule.rhs(), signature_);
    return true;
  }

 private:
  std::vector<Rule> rules_;
  std::vector<Symbol> signature_;
};

inline bool is_duplicating(const Trs& trs) {
  return std::any_of(trs.rules().begin(), trs.rules().end(),
                     [](const Rule& r) { return r.is_duplicating(); });
}

/// Some rule's left-hand side matches `t` at the root.
inline bool is_redex(const Trs& trs, const Term& t) {
  if (t.is_variable()) return false;
  for (const Rule& r : trs.rules()) {
    if (r.lhs().symbol() == t.symbol() && match(r.lhs(), t)) return true;
  }
  return false;
}

inline bool is_normal_form(const Trs& trs, const Term& t) {
  if (is_redex(trs, t)) return false;
  return std::all_of(t.args().begin(), t.args().end(),
                     [&](const Term& a) { return is_normal_form(trs, a); });
}

/// Rule sets are equal as sets modulo variable renaming.
inline bool same_rules_modulo_renaming(const std::vector<Rule>& a, const std::vector<Rule>& b) {
  auto covered = [](const std::vector<Rule>& xs, const std::vector<Rule>& ys) {
    return std::all_of(xs.begin(), xs.end(), [&](const Rule& x) {
      return std::any_of(ys.begin(), ys.end(),
                         [&](const Rule& y) { return equal_modulo_renaming(x, y); });
    });
  };
  return covered(a, b) && covered(b, a);
}

}  // namespace atrs
