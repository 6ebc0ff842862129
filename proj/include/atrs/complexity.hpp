#pragma once

// Derivational complexity tables and triangular matrix interpretation
// certificates.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "atrs/enumerate.hpp"
#include "atrs/matrix.hpp"
#include "atrs/strategies.hpp"

namespace atrs {

struct ComplexityRow {
  std::size_t n = 0;
  std::size_t value = 0;  ///< max derivation height over terms of size ≤ n
  Term witness;           ///< a term of size ≤ n attaining `value`
};

struct ComplexityTable {
  std::string relation;  ///< "full", "innermost", "ri" or "relative"
  std::vector<ComplexityRow> rows;
  std::optional<std::size_t> incomplete_at;
  std::optional<LoopWitness> loop;  ///< set when a row stopped on a cycle
  bool fuel_exhausted = false;
  std::size_t terms_checked = 0;

  bool complete() const { return !incomplete_at.has_value(); }

  std::optional<std::size_t> value_at(std::size_t n) const {
    for (const ComplexityRow& r : rows) {
      if (r.n == n) return r.value;
    }
    return std::nullopt;
  }
};

namespace detail {

inline ComplexityTable tabulate(HeightSolver& solver, const std::vector<Symbol>& signature,
                                std::size_t n_max, std::size_t fuel, std::size_t max_vars,
                                std::string relation) {
  ComplexityTable table;
  table.relation = std::move(relation);
  TermEnumerator terms(signature, max_vars);
  std::size_t best = 0;
  std::optional<Term> witness;
  for (std::size_t n = 1; n <= n_max; ++n) {
    for (const Term& t : terms.of_size(n)) {
      ++table.terms_checked;
      auto h = solver.height(t, fuel);
      if (h.loop()) {
        table.incomplete_at = n;
        table.loop = h.witness();
        return table;
      }
      if (h.exhausted()) {
        table.incomplete_at = n;
        table.fuel_exhausted = true;
        return table;
      }
      if (!witness || h.value() > best) {
        best = h.value();
        witness = t;
      }
    }
    if (witness) table.rows.push_back(ComplexityRow{n, best, *witness});
  }
  return table;
}

inline std::vector<Symbol> merged_signature(const Trs& a, const Trs& b) {
  std::vector<Symbol> out = a.signature();
  for (const Symbol& f : b.signature()) {
    if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
  }
  return out;
}

}  // namespace detail

/// dc (or idc) of `trs` for n = 1..n_max, over terms of its signature with
/// at most `max_vars` variables. `fuel` bounds the terms explored per
/// start term. A cycle or exhausted fuel stops the table at that size.
inline ComplexityTable dc_table(const Trs& trs, std::size_t n_max, Strategy strategy,
                                std::size_t fuel, std::size_t max_vars = 2) {
  auto solver = HeightSolver::for_strategy(trs, strategy);
  return detail::tabulate(solver, trs.signature(), n_max, fuel, max_vars,
                          std::string(to_string(strategy)));
}

/// dc of the relative system counted/free: only steps of `counted` count.
inline ComplexityTable dc_relative_table(const Trs& counted, const Trs& free, std::size_t n_max,
                                         std::size_t fuel, std::size_t max_vars = 2) {
  auto solver = HeightSolver::for_relative(counted, free, fuel);
  return detail::tabulate(solver, detail::merged_signature(counted, free), n_max, fuel, max_vars,
                          "relative");
}

enum class CertificateKind { UpperBound, LowerBoundExp, Table, Failed };

struct Certificate {
  CertificateKind kind = CertificateKind::Failed;
  std::size_t degree = 0;  ///< UpperBound: dc ∈ O(n^degree)
  bool monotone = false;
  bool triangular = false;
  std::vector<OrientationReport> orientation;  ///< one per rule
  std::optional<std::size_t> failed_rule;
  std::string failure;
  std::vector<std::pair<std::size_t, std::size_t>> values;  ///< (n, value) evidence
};

/// Certifies dc ∈ O(n^d) when `m` is a monotone triangular interpretation
/// orienting every rule strictly.
inline Certificate check_tmi(const MatrixInterp& m, const Trs& trs) {
  for (const Symbol& f : trs.signature()) m.at(f);
  Certificate cert;
  cert.monotone = is_monotone(m);
  cert.triangular = is_triangular(m);
  for (const Rule& r : trs.rules()) cert.orientation.push_back(strictly_oriented(m, r));
  if (!cert.monotone) {
    cert.failure = "interpretation is not monotone";
  } else if (!cert.triangular) {
    cert.failure = "interpretation is not triangular";
  } else {
    for (std::size_t i = 0; i < trs.size(); ++i) {
      if (!cert.orientation[i].strict) {
        cert.failed_rule = i;
        cert.failure = "rule " + std::to_string(i + 1) + " is not strictly oriented: " +
                       to_string(trs[i]);
        break;
      }
    }
  }
  if (cert.failure.empty()) {
    cert.kind = CertificateKind::UpperBound;
    cert.degree = m.dim();
  }
  return cert;
}

/// Tabulated values as a certificate.
inline Certificate table_certificate(const ComplexityTable& table) {
  Certificate cert;
  cert.kind = CertificateKind::Table;
  for (const ComplexityRow& r : table.rows) cert.values.emplace_back(r.n, r.value);
  return cert;
}

/// Witnesses value(n + offset) ≥ 2^n for every n in [from, to].
inline Certificate exponential_lower_bound(const ComplexityTable& table, std::size_t offset,
                                           std::size_t from, std::size_t to) {
  Certificate cert;
  cert.kind = CertificateKind::LowerBoundExp;
  for (std::size_t n = from; n <= to; ++n) {
    const auto v = table.value_at(n + offset);
    if (!v || *v < (std::size_t{1} << n)) {
      cert.kind = CertificateKind::Failed;
      cert.failure = "no value >= 2^" + std::to_string(n) + " at size " + std::to_string(n + offset);
      return cert;
    }
    cert.values.emplace_back(n + offset, *v);
  }
  return cert;
}

enum class SearchStatus { Found, SpaceExhausted, BudgetExhausted };

struct TmiSearchResult {
  SearchStatus status = SearchStatus::SpaceExhausted;
  std::optional<MatrixInterp> interp;
  std::size_t assignments = 0;
};

namespace detail {

/// Odometer over triangular monotone coefficient matrices and constant
/// vectors for one symbol: top-left entry 1, other diagonal entries 0/1,
/// entries above the diagonal and constant entries in [0, bound].
class InterpCandidates {
 public:
  InterpCandidates(const Symbol& f, std::size_t dim, Natural bound) : f_(f), dim_(dim) {
    for (std::size_t a = 0; a < f.arity; ++a) {
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = i; j < dim; ++j) {
          if (i == 0 && j == 0) continue;
          digits_.push_back(Digit{a, i, j, i == j ? Natural{1} : bound, 0});
        }
      }
    }
    for (std::size_t i = 0; i < dim; ++i) digits_.push_back(Digit{f.arity, i, 0, bound, 0});
  }

  SymbolInterp current() const {
    SymbolInterp s;
    for (std::size_t a = 0; a < f_.arity; ++a) {
      Matrix m(dim_);
      m(0, 0) = 1;
      s.coefficients.push_back(m);
    }
    s.constant.assign(dim_, 0);
    for (const Digit& d : digits_) {
      if (d.arg == f_.arity) {
        s.constant[d.i] = d.value;
      } else {
        s.coefficients[d.arg](d.i, d.j) = d.value;
      }
    }
    return s;
  }

  bool advance() {
    for (Digit& d : digits_) {
      if (d.value < d.max) {
        ++d.value;
        return true;
      }
      d.value = 0;
    }
    return false;
  }

 private:
  struct Digit {
    std::size_t arg;  // == arity for the constant vector
    std::size_t i;
    std::size_t j;
    Natural max;
    Natural value;
  };

  Symbol f_;
  std::size_t dim_;
  std::vector<Digit> digits_;
};

}  // namespace detail

/// Backtracking search for a TMI of dimension `dim` with entries ≤ `bound`
/// compatible with `trs`. Symbols are assigned by descending number of
/// occurrences in the rules; each rule is checked as soon as all its
/// symbols are assigned. `budget` caps the number of symbol assignments.
inline TmiSearchResult search_tmi(const Trs& trs, std::size_t dim, Natural bound, std::size_t budget) {
  if (dim == 0 || bound == 0) throw Error(ErrorKind::InvalidArgument, "dimension and bound must be at least 1");
  std::vector<Symbol> order = trs.signature();
  std::map<Symbol, std::size_t> frequency;
  std::function<void(const Term&)> count = [&](const Term& t) {
    if (t.is_variable()) return;
    ++frequency[t.symbol()];
    for (const Term& a : t.args()) count(a);
  };
  for (const Rule& r : trs.rules()) {
    count(r.lhs());
    count(r.rhs());
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](const Symbol& a, const Symbol& b) { return frequency[a] > frequency[b]; });

  // Rules become checkable at the depth of their last assigned symbol.
  std::vector<std::vector<std::size_t>> checks(order.size());
  for (std::size_t i = 0; i < trs.size(); ++i) {
    std::size_t depth = 0;
    for (const Term& side : {trs[i].lhs(), trs[i].rhs()}) {
      for (const Symbol& f : symbols_of(side)) {
        const auto pos = static_cast<std::size_t>(std::find(order.begin(), order.end(), f) - order.begin());
        depth = std::max(depth, pos);
      }
    }
    checks[depth].push_back(i);
  }

  TmiSearchResult result;
  MatrixInterp m(dim);
  bool out_of_budget = false;
  std::function<bool(std::size_t)> assign = [&](std::size_t depth) -> bool {
    if (depth == order.size()) return true;
    detail::InterpCandidates candidates(order[depth], dim, bound);
    do {
      if (result.assignments == budget) {
        out_of_budget = true;
        return false;
      }
      ++result.assignments;
      m.set(order[depth], candidates.current());
      const bool ok = std::all_of(checks[depth].begin(), checks[depth].end(),
                                  [&](std::size_t i) { return strictly_oriented(m, trs[i]).strict; });
      if (ok && assign(depth + 1)) return true;
      if (out_of_budget) return false;
    } while (candidates.advance());
    m.erase(order[depth]);
    return false;
  };

  if (assign(0)) {
    result.status = SearchStatus::Found;
    result.interp = m;
  } else {
    result.status = out_of_budget ? SearchStatus::BudgetExhausted : SearchStatus::SpaceExhausted;
  }
  return result;
}

}  // namespace atrs
