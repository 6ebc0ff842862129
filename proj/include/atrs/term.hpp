#pragma once

// First-order terms, positions, substitutions and matching.
//
// Terms are immutable and share structure through reference counting, so
// copying a Term is cheap and subterms may be shared freely between terms.
// Each node caches its size and a structural hash.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "atrs/error.hpp"

namespace atrs {

/// A function symbol. Identity is the (name, arity) pair.
struct Symbol {
  std::string name;
  std::size_t arity = 0;

  friend bool operator==(const Symbol&, const Symbol&) = default;
  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

inline std::string to_string(const Symbol& f) {
  return f.name + "/" + std::to_string(f.arity);
}

class Term {
 public:
  static Term variable(std::string name) {
    Term t;
    auto node = std::make_shared<Node>();
    node->is_var = true;
    node->symbol = Symbol{std::move(name), 0};
    node->size = 1;
    node->hash = std::hash<std::string>{}(node->symbol.name) * 0x9e3779b97f4a7c15ULL + 1;
    t.node_ = std::move(node);
    return t;
  }

  static Term function(Symbol f, std::vector<Term> args) {
    if (args.size() != f.arity) {
      throw Error(ErrorKind::ArityMismatch,
                  to_string(f) + " applied to " + std::to_string(args.size()) +
                      " arguments");
    }
    Term t;
    auto node = std::make_shared<Node>();
    node->is_var = false;
    std::size_t size = 1;
    std::size_t h = std::hash<std::string>{}(f.name) ^ (f.arity * 0x100000001b3ULL);
    for (const Term& a : args) {
      size += a.size();
      h = h * 0x100000001b3ULL ^ a.hash();
    }
    node->symbol = std::move(f);
    node->args = std::move(args);
    node->size = size;
    node->hash = h;
    t.node_ = std::move(node);
    return t;
  }

  static Term constant(std::string name) {
    return function(Symbol{std::move(name), 0}, {});
  }

  bool is_variable() const { return node_->is_var; }
  bool is_function() const { return !node_->is_var; }

  /// Variable name or function symbol name.
  const std::string& name() const { return node_->symbol.name; }

  /// Head symbol of a non-variable term. Variables report arity 0.
  const Symbol& symbol() const { return node_->symbol; }

  std::span<const Term> args() const { return node_->args; }
  const Term& arg(std::size_t i) const { return node_->args.at(i); }
  std::size_t arity() const { return node_->args.size(); }

  std::size_t size() const { return node_->size; }
  std::size_t hash() const { return node_->hash; }

  bool same_node(const Term& other) const { return node_ == other.node_; }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (a.node_->hash != b.node_->hash || a.node_->size != b.node_->size) return false;
    if (a.node_->is_var != b.node_->is_var || a.node_->symbol != b.node_->symbol) {
      return false;
    }
    return std::equal(a.node_->args.begin(), a.node_->args.end(), b.node_->args.begin());
  }

  /// Variables before function symbols, then lexicographic on
  /// (name, arity, arguments).
  friend std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (a.is_variable() != b.is_variable()) {
      return a.is_variable() ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    if (auto c = a.symbol() <=> b.symbol(); c != 0) return c;
    for (std::size_t i = 0; i < a.arity(); ++i) {
      if (auto c = a.arg(i) <=> b.arg(i); c != 0) return c;
    }
    return std::strong_ordering::equal;
  }

 private:
  struct Node {
    bool is_var = false;
    Symbol symbol;
    std::vector<Term> args;
    std::size_t size = 1;
    std::size_t hash = 0;
  };

  Term() = default;
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept { return t.hash(); }
};

template <typename V>
using TermMap = std::unordered_map<Term, V, TermHash>;

/// A position is a sequence of 1-based argument indices; the empty
/// sequence is the root.
class Position {
 public:
  Position() = default;
  Position(std::initializer_list<std::size_t> indices) : indices_(indices) {}
  explicit Position(std::vector<std::size_t> indices) : indices_(std::move(indices)) {}

  bool is_root() const { return indices_.empty(); }
  std::size_t depth() const { return indices_.size(); }
  std::span<const std::size_t> indices() const { return indices_; }
  std::size_t operator[](std::size_t i) const { return indices_[i]; }

  Position child(std::size_t i) const {
    Position p = *this;
    p.indices_.push_back(i);
    return p;
  }

  /// Prefix test: `this` is above or equal to `other`.
  bool is_prefix_of(const Position& other) const {
    return indices_.size() <= other.indices_.size() &&
           std::equal(indices_.begin(), indices_.end(), other.indices_.begin());
  }

  bool is_parallel_to(const Position& other) const {
    return !is_prefix_of(other) && !other.is_prefix_of(*this);
  }

  friend bool operator==(const Position&, const Position&) = default;
  /// Lexicographic order: the pre-order (leftmost-outermost) traversal order.
  friend auto operator<=>(const Position&, const Position&) = default;

 private:
  std::vector<std::size_t> indices_;
};

inline std::string to_string(const Position& p) {
  if (p.is_root()) return "eps";
  std::string s;
  for (std::size_t i = 0; i < p.depth(); ++i) {
    if (i) s += '.';
    s += std::to_string(p[i]);
  }
  return s;
}

/// `p` is to the right of `q` when they diverge at a common prefix and
/// p's index there is larger.
inline bool right_of(const Position& p, const Position& q) {
  const std::size_t n = std::min(p.depth(), q.depth());
  for (std::size_t k = 0; k < n; ++k) {
    if (p[k] != q[k]) return p[k] > q[k];
  }
  return false;
}

/// All positions of `t` in pre-order.
inline std::vector<Position> positions(const Term& t) {
  std::vector<Position> out;
  out.reserve(t.size());
  std::vector<std::size_t> path;
  std::function<void(const Term&)> walk = [&](const Term& u) {
    out.emplace_back(path);
    for (std::size_t i = 0; i < u.arity(); ++i) {
      path.push_back(i + 1);
      walk(u.arg(i));
      path.pop_back();
    }
  };
  walk(t);
  return out;
}

inline bool is_position_of(const Term& t, const Position& p) {
  const Term* cur = &t;
  for (std::size_t i : p.indices()) {
    if (i == 0 || i > cur->arity()) return false;
    cur = &cur->arg(i - 1);
  }
  return true;
}

inline const Term& subterm_at(const Term& t, const Position& p) {
  const Term* cur = &t;
  for (std::size_t i : p.indices()) {
    if (i == 0 || i > cur->arity()) {
      throw Error(ErrorKind::InvalidPosition, to_string(p));
    }
    cur = &cur->arg(i - 1);
  }
  return *cur;
}

namespace detail {

inline Term replace_from(const Term& t, std::span<const std::size_t> path, const Term& s) {
  if (path.empty()) return s;
  const std::size_t i = path.front();
  if (i == 0 || i > t.arity()) {
    throw Error(ErrorKind::InvalidPosition, "index " + std::to_string(i));
  }
  std::vector<Term> args(t.args().begin(), t.args().end());
  args[i - 1] = replace_from(args[i - 1], path.subspan(1), s);
  return Term::function(t.symbol(), std::move(args));
}

}  // namespace detail

/// `t` with the subterm at `p` replaced by `s`.
inline Term replace(const Term& t, const Position& p, const Term& s) {
  if (!is_position_of(t, p)) throw Error(ErrorKind::InvalidPosition, to_string(p));
  return detail::replace_from(t, p.indices(), s);
}

/// Finite map from variable names to terms; unbound variables are fixed.
class Substitution {
 public:
  Substitution() = default;
  Substitution(std::initializer_list<std::pair<const std::string, Term>> init)
      : bindings_(init) {}

  const Term* lookup(const std::string& var) const {
    auto it = bindings_.find(var);
    return it == bindings_.end() ? nullptr : &it->second;
  }

  void bind(std::string var, Term value) { bindings_.insert_or_assign(std::move(var), std::move(value)); }

  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  const std::map<std::string, Term>& bindings() const { return bindings_; }

  friend bool operator==(const Substitution&, const Substitution&) = default;

 private:
  std::map<std::string, Term> bindings_;
};

inline Term substitute(const Term& t, const Substitution& sigma) {
  if (t.is_variable()) {
    const Term* bound = sigma.lookup(t.name());
    return bound ? *bound : t;
  }
  if (t.arity() == 0) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  bool changed = false;
  for (const Term& a : t.args()) {
    args.push_back(substitute(a, sigma));
    changed = changed || !args.back().same_node(a);
  }
  return changed ? Term::function(t.symbol(), std::move(args)) : t;
}

namespace detail {

inline bool match_into(const Term& pattern, const Term& subject, Substitution& sigma) {
  if (pattern.is_variable()) {
    if (const Term* bound = sigma.lookup(pattern.name())) return *bound == subject;
    sigma.bind(pattern.name(), subject);
    return true;
  }
  if (subject.is_variable() || pattern.symbol() != subject.symbol()) return false;
  for (std::size_t i = 0; i < pattern.arity(); ++i) {
    if (!match_into(pattern.arg(i), subject.arg(i), sigma)) return false;
  }
  return true;
}

}  // namespace detail

/// The unique σ with dom(σ) ⊆ vars(pattern) and pattern·σ = subject.
inline std::optional<Substitution> match(const Term& pattern, const Term& subject) {
  Substitution sigma;
  if (!detail::match_into(pattern, subject, sigma)) return std::nullopt;
  return sigma;
}

/// Distinct variable names of `t` in first-occurrence (pre-order) order.
inline std::vector<std::string> variables(const Term& t) {
  std::vector<std::string> out;
  std::function<void(const Term&)> walk = [&](const Term& u) {
    if (u.is_variable()) {
      if (std::find(out.begin(), out.end(), u.name()) == out.end()) out.push_back(u.name());
      return;
    }
    for (const Term& a : u.args()) walk(a);
  };
  walk(t);
  return out;
}

inline std::size_t occurrences(const Term& t, const std::string& var) {
  if (t.is_variable()) return t.name() == var ? 1 : 0;
  std::size_t n = 0;
  for (const Term& a : t.args()) n += occurrences(a, var);
  return n;
}

/// Name of the i-th canonical variable: x, y, z, then x3, x4, ...
inline std::string canonical_variable(std::size_t i) {
  static constexpr const char* kNames[] = {"x", "y", "z"};
  return i < 3 ? kNames[i] : "x" + std::to_string(i);
}

/// Renames variables in first-occurrence order to canonical names.
/// Several terms may share one renaming (e.g. both sides of a rule).
class CanonicalRenaming {
 public:
  Term apply(const Term& t) {
    if (t.is_variable()) {
      auto [it, inserted] = names_.try_emplace(t.name(), Term::variable(""));
      if (inserted) it->second = Term::variable(canonical_variable(names_.size() - 1));
      return it->second;
    }
    if (t.arity() == 0) return t;
    std::vector<Term> args;
    args.reserve(t.arity());
    for (const Term& a : t.args()) args.push_back(apply(a));
    return Term::function(t.symbol(), std::move(args));
  }

 private:
  std::map<std::string, Term> names_;
};

inline Term canonical(const Term& t) {
  CanonicalRenaming r;
  return r.apply(t);
}

inline bool equal_modulo_renaming(const Term& a, const Term& b) {
  return canonical(a) == canonical(b);
}

/// `sub` occurs in `t` strictly below the root.
inline bool is_proper_subterm(const Term& sub, const Term& t) {
  for (const Term& a : t.args()) {
    if (a == sub || is_proper_subterm(sub, a)) return true;
  }
  return false;
}

/// All proper subterms of `t`, deduplicated, in pre-order of first occurrence.
inline std::vector<Term> proper_subterms(const Term& t) {
  std::vector<Term> out;
  std::function<void(const Term&)> walk = [&](const Term& u) {
    for (const Term& a : u.args()) {
      if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
      walk(a);
    }
  };
  walk(t);
  return out;
}

}  // namespace atrs

namespace atrs {

/// Name of the builtin binary application symbol written `@` in concrete syntax.
inline const std::string& default_app_name() {
  static const std::string name = "app";
  return name;
}

inline Symbol default_app() { return Symbol{default_app_name(), 2}; }

namespace detail {

inline void print_term(const Term& t, const Symbol& app, std::string& out) {
  if (t.is_variable() || t.arity() == 0) {
    out += t.name();
    return;
  }
  if (t.symbol() == app) {
    print_term(t.arg(0), app, out);
    out += " @ ";
    const bool paren = t.arg(1).is_function() && t.arg(1).symbol() == app;
    if (paren) out += '(';
    print_term(t.arg(1), app, out);
    if (paren) out += ')';
    return;
  }
  out += t.name();
  out += '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) out += ", ";
    print_term(t.arg(i), app, out);
  }
  out += ')';
}

}  // namespace detail

/// Concrete syntax: `app` is rendered as left-associative infix `@`,
/// everything else in prefix form.
inline std::string to_string(const Term& t, const Symbol& app = default_app()) {
  std::string out;
  detail::print_term(t, app, out);
  return out;
}

}  // namespace atrs
