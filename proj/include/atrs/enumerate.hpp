#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "atrs/term.hpp"

namespace atrs {

/// Enumerates all terms of size ≤ max_size over `signature` with at most
/// `max_vars` distinct variables, one representative per renaming class.
/// Variables are named canonically in first-occurrence order, so `x`
/// always precedes `y`. Output is ordered by size, then by construction
/// order (variables before function symbols, signature order otherwise).
class TermEnumerator {
 public:
  TermEnumerator(std::vector<Symbol> signature, std::size_t max_vars)
      : signature_(std::move(signature)), max_vars_(max_vars) {
    for (std::size_t i = 0; i < max_vars_; ++i) {
      var_terms_.push_back(Term::variable(variable_name(i)));
    }
  }

  /// Terms of exactly `size` symbols.
  std::vector<Term> of_size(std::size_t size) {
    std::vector<Term> out;
    for (auto& [t, used] : generate(size, 0)) out.push_back(std::move(t));
    return out;
  }

  std::vector<Term> up_to(std::size_t max_size) {
    std::vector<Term> out;
    for (std::size_t n = 1; n <= max_size; ++n) {
      auto layer = of_size(n);
      out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
  }

 private:
  // A term together with the number of canonical variables in use after it.
  using Item = std::pair<Term, std::size_t>;

  std::string variable_name(std::size_t i) const {
    std::string name = canonical_variable(i);
    while (clashes(name)) name = "_" + name;
    return name;
  }

  bool clashes(const std::string& name) const {
    for (const Symbol& f : signature_) {
      if (f.name == name) return true;
    }
    return false;
  }

  const std::vector<Item>& generate(std::size_t size, std::size_t used) {
    const auto key = std::make_pair(size, used);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<Item> out;
    if (size == 1) {
      for (std::size_t v = 0; v < used; ++v) out.emplace_back(var_terms_[v], used);
      if (used < max_vars_) out.emplace_back(var_terms_[used], used + 1);
      for (const Symbol& f : signature_) {
        if (f.arity == 0) out.emplace_back(Term::function(f, {}), used);
      }
    } else {
      for (const Symbol& f : signature_) {
        if (f.arity == 0 || f.arity > size - 1) continue;
        std::vector<Term> args;
        fill_args(f, 0, size - 1, used, args, out);
      }
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

  void fill_args(const Symbol& f, std::size_t index, std::size_t budget, std::size_t used,
                 std::vector<Term>& args, std::vector<Item>& out) {
    const std::size_t remaining_args = f.arity - index;
    if (remaining_args == 0) {
      if (budget == 0) out.emplace_back(Term::function(f, args), used);
      return;
    }
    // Each remaining argument needs at least one symbol.
    for (std::size_t s = 1; s + (remaining_args - 1) <= budget; ++s) {
      const auto& choices = generate(s, used);
      for (const auto& [arg, used_after] : choices) {
        args.push_back(arg);
        fill_args(f, index + 1, budget - s, used_after, args, out);
        args.pop_back();
      }
    }
  }

  std::vector<Symbol> signature_;
  std::size_t max_vars_;
  std::vector<Term> var_terms_;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<Item>> memo_;
};

inline std::vector<Term> enumerate_terms(const std::vector<Symbol>& signature,
                                         std::size_t max_size, std::size_t max_vars) {
  if (max_size == 0) throw Error(ErrorKind::InvalidArgument, "max_size must be at least 1");
  TermEnumerator e(signature, max_vars);
  return e.up_to(max_size);
}

}  // namespace atrs
