#pragma once

// Linear matrix interpretations over N^d.
//
// A symbol f of arity n is interpreted as F1 x1 + ... + Fn xn + f. All
// arithmetic is on checked 64-bit naturals; overflow raises an error.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "atrs/trs.hpp"

namespace atrs {

using Natural = std::uint64_t;

inline Natural checked_add(Natural a, Natural b) {
  Natural r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorKind::Overflow, "natural addition");
  return r;
}

inline Natural checked_mul(Natural a, Natural b) {
  Natural r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorKind::Overflow, "natural multiplication");
  return r;
}

using Vector = std::vector<Natural>;

class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t dim) : dim_(dim), entries_(dim * dim, 0) {}
  Matrix(std::size_t dim, std::vector<Natural> row_major) : dim_(dim), entries_(std::move(row_major)) {
    if (entries_.size() != dim * dim) {
      throw Error(ErrorKind::DimensionMismatch, "matrix of dimension " + std::to_string(dim) +
                                                    " needs " + std::to_string(dim * dim) + " entries");
    }
  }

  static Matrix identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t dim() const { return dim_; }
  Natural operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }
  Natural& operator()(std::size_t i, std::size_t j) { return entries_[i * dim_ + j]; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    require_same(a.dim_, b.dim_);
    Matrix out(a.dim_);
    for (std::size_t i = 0; i < a.dim_; ++i) {
      for (std::size_t k = 0; k < a.dim_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < a.dim_; ++j) {
          out(i, j) = checked_add(out(i, j), checked_mul(a(i, k), b(k, j)));
        }
      }
    }
    return out;
  }

  friend Vector operator*(const Matrix& a, const Vector& v) {
    require_same(a.dim_, v.size());
    Vector out(a.dim_, 0);
    for (std::size_t i = 0; i < a.dim_; ++i) {
      for (std::size_t j = 0; j < a.dim_; ++j) {
        out[i] = checked_add(out[i], checked_mul(a(i, j), v[j]));
      }
    }
    return out;
  }

  Matrix& operator+=(const Matrix& b) {
    require_same(dim_, b.dim_);
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] = checked_add(entries_[k], b.entries_[k]);
    return *this;
  }

  /// Componentwise ≥.
  bool dominates(const Matrix& b) const {
    require_same(dim_, b.dim_);
    for (std::size_t k = 0; k < entries_.size(); ++k) {
      if (entries_[k] < b.entries_[k]) return false;
    }
    return true;
  }

  bool is_upper_triangular() const {
    for (std::size_t i = 0; i < dim_; ++i) {
      if ((*this)(i, i) > 1) return false;
      for (std::size_t j = 0; j < i; ++j) {
        if ((*this)(i, j) != 0) return false;
      }
    }
    return true;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  static void require_same(std::size_t a, std::size_t b) {
    if (a != b) {
      throw Error(ErrorKind::DimensionMismatch, std::to_string(a) + " vs " + std::to_string(b));
    }
  }

  std::size_t dim_ = 0;
  std::vector<Natural> entries_;
};

inline Vector& add_into(Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "vector lengths differ");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = checked_add(a[i], b[i]);
  return a;
}

/// The well-founded order on N^d: first component strictly greater, the
/// others greater or equal.
inline bool vector_greater(const Vector& u, const Vector& v) {
  if (u.empty() || u.size() != v.size() || u[0] <= v[0]) return false;
  for (std::size_t i = 1; i < u.size(); ++i) {
    if (u[i] < v[i]) return false;
  }
  return true;
}

inline bool vector_geq(const Vector& u, const Vector& v) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] < v[i]) return false;
  }
  return true;
}

struct SymbolInterp {
  std::vector<Matrix> coefficients;  ///< one per argument
  Vector constant;
};

class MatrixInterp {
 public:
  MatrixInterp() = default;
  explicit MatrixInterp(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw Error(ErrorKind::DimensionMismatch, "dimension must be at least 1");
  }

  std::size_t dim() const { return dim_; }
  const std::map<Symbol, SymbolInterp>& entries() const { return entries_; }

  void set(const Symbol& f, SymbolInterp interp) {
    if (interp.coefficients.size() != f.arity) {
      throw Error(ErrorKind::ArityMismatch, to_string(f) + " given " +
                                                std::to_string(interp.coefficients.size()) + " matrices");
    }
    for (const Matrix& m : interp.coefficients) {
      if (m.dim() != dim_) throw Error(ErrorKind::DimensionMismatch, "matrix for " + to_string(f));
    }
    if (interp.constant.size() != dim_) {
      throw Error(ErrorKind::DimensionMismatch, "constant vector for " + to_string(f));
    }
    entries_.insert_or_assign(f, std::move(interp));
  }

  void erase(const Symbol& f) { entries_.erase(f); }

  const SymbolInterp* find(const Symbol& f) const {
    auto it = entries_.find(f);
    return it == entries_.end() ? nullptr : &it->second;
  }

  const SymbolInterp& at(const Symbol& f) const {
    if (const SymbolInterp* s = find(f)) return *s;
    throw Error(ErrorKind::UnknownSymbol, to_string(f) + " has no interpretation");
  }

 private:
  std::size_t dim_ = 1;
  std::map<Symbol, SymbolInterp> entries_;
};

/// Σ A_x·α(x) + c, the interpretation of a term as a function of its
/// variables.
struct LinearForm {
  std::map<std::string, Matrix> coefficients;
  Vector constant;

  Vector evaluate(const std::map<std::string, Vector>& alpha) const {
    Vector out = constant;
    for (const auto& [x, a] : coefficients) add_into(out, a * alpha.at(x));
    return out;
  }
};

inline LinearForm linearize(const MatrixInterp& m, const Term& t) {
  LinearForm out;
  if (t.is_variable()) {
    out.coefficients.emplace(t.name(), Matrix::identity(m.dim()));
    out.constant.assign(m.dim(), 0);
    return out;
  }
  const SymbolInterp& f = m.at(t.symbol());
  out.constant = f.constant;
  for (std::size_t i = 0; i < t.arity(); ++i) {
    const LinearForm arg = linearize(m, t.arg(i));
    add_into(out.constant, f.coefficients[i] * arg.constant);
    for (const auto& [x, a] : arg.coefficients) {
      Matrix product = f.coefficients[i] * a;
      auto [it, inserted] = out.coefficients.try_emplace(x, product);
      if (!inserted) it->second += product;
    }
  }
  return out;
}

/// Direct recursive evaluation of `t` under the assignment `alpha`.
inline Vector evaluate(const MatrixInterp& m, const Term& t, const std::map<std::string, Vector>& alpha) {
  if (t.is_variable()) return alpha.at(t.name());
  const SymbolInterp& f = m.at(t.symbol());
  Vector out = f.constant;
  for (std::size_t i = 0; i < t.arity(); ++i) add_into(out, f.coefficients[i] * evaluate(m, t.arg(i), alpha));
  return out;
}

struct VariableDominance {
  std::string variable;
  Matrix lhs;
  Matrix rhs;
  bool dominated = false;
};

struct OrientationReport {
  bool strict = false;
  bool constant_decreases = false;
  Vector lhs_constant;
  Vector rhs_constant;
  std::vector<VariableDominance> variables;
};

/// Decides [α](l) > [α](r) for all α by absolute positiveness: each
/// variable's lhs matrix dominates its rhs matrix and the lhs constant is
/// greater in the vector order.
inline OrientationReport strictly_oriented(const MatrixInterp& m, const Rule& rule) {
  const LinearForm l = linearize(m, rule.lhs());
  const LinearForm r = linearize(m, rule.rhs());
  OrientationReport out;
  out.lhs_constant = l.constant;
  out.rhs_constant = r.constant;
  out.constant_decreases = vector_greater(l.constant, r.constant);
  bool all_dominated = true;
  std::vector<std::string> names;
  for (const auto& [x, a] : l.coefficients) names.push_back(x);
  for (const auto& [x, a] : r.coefficients) {
    if (!l.coefficients.count(x)) names.push_back(x);
  }
  for (const std::string& x : names) {
    const Matrix zero(m.dim());
    const auto li = l.coefficients.find(x);
    const auto ri = r.coefficients.find(x);
    VariableDominance v{x, li == l.coefficients.end() ? zero : li->second,
                        ri == r.coefficients.end() ? zero : ri->second, false};
    v.dominated = v.lhs.dominates(v.rhs);
    all_dominated = all_dominated && v.dominated;
    out.variables.push_back(std::move(v));
  }
  out.strict = all_dominated && out.constant_decreases;
  return out;
}

/// Every coefficient matrix has top-left entry at least 1.
inline bool is_monotone(const MatrixInterp& m) {
  for (const auto& [f, interp] : m.entries()) {
    for (const Matrix& a : interp.coefficients) {
      if (a(0, 0) < 1) return false;
    }
  }
  return true;
}

/// Every coefficient matrix is upper triangular with diagonal entries ≤ 1.
inline bool is_triangular(const MatrixInterp& m) {
  for (const auto& [f, interp] : m.entries()) {
    for (const Matrix& a : interp.coefficients) {
      if (!a.is_upper_triangular()) return false;
    }
  }
  return true;
}

}  // namespace atrs
