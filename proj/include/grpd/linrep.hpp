#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "grpd/core.hpp"

namespace grpd {

using Rational = boost::multiprecision::cpp_rational;

//! A dense matrix over the rationals, row-major.
struct RationalMatrix {
  Idx rows = 0;
  Idx cols = 0;
  std::vector<Rational> a;

  RationalMatrix() = default;
  RationalMatrix(Idx r, Idx c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

  Rational& at(Idx i, Idx j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  Rational const& at(Idx i, Idx j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

  static RationalMatrix identity(Idx n) {
    RationalMatrix m(n, n);
    for (Idx i = 0; i < n; ++i) {
      m.at(i, i) = 1;
    }
    return m;
  }

  bool operator==(RationalMatrix const& other) const = default;
};

inline RationalMatrix operator*(RationalMatrix const& x, RationalMatrix const& y) {
  if (x.cols != y.rows) {
    throw PreconditionError("matrix product shape mismatch");
  }
  RationalMatrix out(x.rows, y.cols);
  for (Idx i = 0; i < x.rows; ++i) {
    for (Idx k = 0; k < x.cols; ++k) {
      if (x.at(i, k) == 0) {
        continue;
      }
      for (Idx j = 0; j < y.cols; ++j) {
        out.at(i, j) += x.at(i, k) * y.at(k, j);
      }
    }
  }
  return out;
}

inline RationalMatrix operator-(RationalMatrix const& x, RationalMatrix const& y) {
  RationalMatrix out(x.rows, x.cols);
  for (std::size_t i = 0; i < out.a.size(); ++i) {
    out.a[i] = x.a[i] - y.a[i];
  }
  return out;
}

inline RationalMatrix operator+(RationalMatrix const& x, RationalMatrix const& y) {
  RationalMatrix out(x.rows, x.cols);
  for (std::size_t i = 0; i < out.a.size(); ++i) {
    out.a[i] = x.a[i] + y.a[i];
  }
  return out;
}

inline RationalMatrix operator*(Rational const& c, RationalMatrix const& x) {
  RationalMatrix out(x.rows, x.cols);
  for (std::size_t i = 0; i < out.a.size(); ++i) {
    out.a[i] = c * x.a[i];
  }
  return out;
}

inline bool is_zero(RationalMatrix const& m) {
  return std::all_of(m.a.begin(), m.a.end(), [](Rational const& v) { return v == 0; });
}

//! In-place row reduction with first-nonzero pivoting; returns the pivot
//! columns. Deterministic.
inline std::vector<Idx> row_reduce(RationalMatrix& m) {
  std::vector<Idx> pivots;
  Idx row = 0;
  for (Idx col = 0; col < m.cols && row < m.rows; ++col) {
    Idx p = UNDEFINED;
    for (Idx i = row; i < m.rows; ++i) {
      if (m.at(i, col) != 0) {
        p = i;
        break;
      }
    }
    if (p == UNDEFINED) {
      continue;
    }
    if (p != row) {
      for (Idx j = 0; j < m.cols; ++j) {
        std::swap(m.at(p, j), m.at(row, j));
      }
    }
    Rational lead = m.at(row, col);
    for (Idx j = 0; j < m.cols; ++j) {
      m.at(row, j) /= lead;
    }
    for (Idx i = 0; i < m.rows; ++i) {
      if (i == row || m.at(i, col) == 0) {
        continue;
      }
      Rational factor = m.at(i, col);
      for (Idx j = 0; j < m.cols; ++j) {
        m.at(i, j) -= factor * m.at(row, j);
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline Idx rank(RationalMatrix m) { return static_cast<Idx>(row_reduce(m).size()); }

inline bool is_invertible(RationalMatrix const& m) {
  return m.rows == m.cols && rank(m) == m.rows;
}

//! One solution of A x = b with free variables set to zero, or nullopt.
inline std::optional<std::vector<Rational>> solve_linear(RationalMatrix a,
                                                         std::vector<Rational> b) {
  Idx n = a.cols;
  RationalMatrix aug(a.rows, n + 1);
  for (Idx i = 0; i < a.rows; ++i) {
    for (Idx j = 0; j < n; ++j) {
      aug.at(i, j) = a.at(i, j);
    }
    aug.at(i, n) = b[i];
  }
  auto pivots = row_reduce(aug);
  if (!pivots.empty() && pivots.back() == n) {
    return std::nullopt;  // a pivot in the constant column: inconsistent
  }
  std::vector<Rational> x(n, 0);
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    x[pivots[r]] = aug.at(static_cast<Idx>(r), n);
  }
  return x;
}

//! A functorial linear action of a groupoid: an exact-rational vector space
//! per object, an invertible matrix per arrow.
struct GroupoidVectorBundle {
  GroupoidPtr gpd;
  std::vector<Idx> dim;             // per object
  std::vector<RationalMatrix> mat;  // per morphism: dim(tgt) x dim(src)
};

inline Validated<GroupoidVectorBundle> validate_vector_bundle(GroupoidVectorBundle const& v) {
  Report rep;
  auto const& g = *v.gpd;
  if (v.dim.size() != g.n_objects() || v.mat.size() != g.n_morphisms()) {
    rep.add("ShapeMismatch", "table lengths do not match the groupoid");
    return invalid<GroupoidVectorBundle>(std::move(rep));
  }
  for (Idx m = 0; m < g.n_morphisms(); ++m) {
    if (v.mat[m].rows != v.dim[g.tgt(m)] || v.mat[m].cols != v.dim[g.src(m)]) {
      rep.add("ShapeMismatch", detail::cat("matrix of arrow ", m, " has the wrong shape"));
      return invalid<GroupoidVectorBundle>(std::move(rep));
    }
  }
  for (Idx a = 0; a < g.n_objects(); ++a) {
    if (!(v.mat[g.ident(a)] == RationalMatrix::identity(v.dim[a]))) {
      rep.add("NotFunctorial", detail::cat("identity of object ", a, " is not the unit matrix"));
    }
  }
  for (Idx m = 0; m < g.n_morphisms(); ++m) {
    if (!is_invertible(v.mat[m])) {
      rep.add("Singular", detail::cat("arrow ", m));
    }
    for (Idx w : g.arrows_from(g.tgt(m))) {
      if (!(v.mat[g.compose(m, w)] == v.mat[w] * v.mat[m])) {
        rep.add("NotFunctorial", detail::cat("(", m, ",", w, ")"));
      }
    }
  }
  if (!rep.ok()) {
    return invalid<GroupoidVectorBundle>(std::move(rep));
  }
  return valid(v);
}

//! A short exact sequence of bundles over one groupoid, with the maps given
//! per object.
struct BundleSES {
  GroupoidVectorBundle sub;       // A
  GroupoidVectorBundle middle;    // B
  GroupoidVectorBundle quotient;  // C
  std::vector<RationalMatrix> j;  // A -> B per object
  std::vector<RationalMatrix> q;  // B -> C per object
};

inline Validated<BundleSES> validate_ses(GroupoidVectorBundle const& a,
                                         GroupoidVectorBundle const& b,
                                         GroupoidVectorBundle const& c,
                                         std::vector<RationalMatrix> j,
                                         std::vector<RationalMatrix> q) {
  Report rep;
  if (!(*a.gpd == *b.gpd) || !(*b.gpd == *c.gpd)) {
    rep.add("ShapeMismatch", "the three bundles live over different groupoids");
    return invalid<BundleSES>(std::move(rep));
  }
  auto const& g = *a.gpd;
  if (j.size() != g.n_objects() || q.size() != g.n_objects()) {
    rep.add("ShapeMismatch", "map tables have the wrong length");
    return invalid<BundleSES>(std::move(rep));
  }
  for (Idx x = 0; x < g.n_objects(); ++x) {
    if (j[x].rows != b.dim[x] || j[x].cols != a.dim[x] || q[x].rows != c.dim[x] ||
        q[x].cols != b.dim[x]) {
      rep.add("ShapeMismatch", detail::cat("maps at object ", x, " have the wrong shape"));
      return invalid<BundleSES>(std::move(rep));
    }
  }
  for (Idx x = 0; x < g.n_objects(); ++x) {
    bool exact = rank(j[x]) == a.dim[x] && rank(q[x]) == c.dim[x] && is_zero(q[x] * j[x]) &&
                 a.dim[x] + c.dim[x] == b.dim[x];
    if (!exact) {
      rep.add("NotExactAt", detail::cat("object ", x));
    }
  }
  for (Idx m = 0; m < g.n_morphisms(); ++m) {
    Idx s = g.src(m), t = g.tgt(m);
    if (!(j[t] * a.mat[m] == b.mat[m] * j[s])) {
      rep.add("NotEquivariant", detail::cat("arrow ", m, ", inclusion"));
    }
    if (!(q[t] * b.mat[m] == c.mat[m] * q[s])) {
      rep.add("NotEquivariant", detail::cat("arrow ", m, ", projection"));
    }
  }
  if (!rep.ok()) {
    return invalid<BundleSES>(std::move(rep));
  }
  return valid(BundleSES{a, b, c, std::move(j), std::move(q)});
}

//! Solves, over the rationals, for per-object right inverses r of q that
//! commute with every arrow action: the stacked linear system
//!   q_x r_x = I,   B(m) r_src = r_tgt C(m)
//! eliminated with deterministic pivoting. Infeasibility returns nullopt.
inline std::optional<std::vector<RationalMatrix>> find_equivariant_splitting(BundleSES const& s) {
  auto const& g = *s.sub.gpd;
  Idx n_obj = g.n_objects();
  // unknown layout: per object, row-major entries of r_x (dimB x dimC)
  std::vector<std::size_t> offset(n_obj + 1, 0);
  for (Idx x = 0; x < n_obj; ++x) {
    offset[x + 1] = offset[x] + static_cast<std::size_t>(s.middle.dim[x]) * s.quotient.dim[x];
  }
  std::size_t unknowns = offset[n_obj];
  auto var = [&](Idx x, Idx i, Idx j) {
    return offset[x] + static_cast<std::size_t>(i) * s.quotient.dim[x] + j;
  };
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  for (Idx x = 0; x < n_obj; ++x) {
    for (Idx i = 0; i < s.quotient.dim[x]; ++i) {
      for (Idx jj = 0; jj < s.quotient.dim[x]; ++jj) {
        std::vector<Rational> row(unknowns, 0);
        for (Idx k = 0; k < s.middle.dim[x]; ++k) {
          row[var(x, k, jj)] += s.q[x].at(i, k);
        }
        rows.push_back(std::move(row));
        rhs.push_back(i == jj ? 1 : 0);
      }
    }
  }
  for (Idx m = 0; m < g.n_morphisms(); ++m) {
    if (g.is_identity(m)) {
      continue;
    }
    Idx a = g.src(m), b = g.tgt(m);
    for (Idx i = 0; i < s.middle.dim[b]; ++i) {
      for (Idx jj = 0; jj < s.quotient.dim[a]; ++jj) {
        std::vector<Rational> row(unknowns, 0);
        for (Idx k = 0; k < s.middle.dim[a]; ++k) {
          row[var(a, k, jj)] += s.middle.mat[m].at(i, k);
        }
        for (Idx l = 0; l < s.quotient.dim[b]; ++l) {
          row[var(b, i, l)] -= s.quotient.mat[m].at(l, jj);
        }
        rows.push_back(std::move(row));
        rhs.push_back(0);
      }
    }
  }
  RationalMatrix system(static_cast<Idx>(rows.size()), static_cast<Idx>(unknowns));
  for (Idx i = 0; i < system.rows; ++i) {
    for (Idx j = 0; j < system.cols; ++j) {
      system.at(i, j) = rows[i][j];
    }
  }
  auto solution = solve_linear(std::move(system), std::move(rhs));
  if (!solution) {
    return std::nullopt;
  }
  std::vector<RationalMatrix> out;
  for (Idx x = 0; x < n_obj; ++x) {
    RationalMatrix r(s.middle.dim[x], s.quotient.dim[x]);
    for (Idx i = 0; i < r.rows; ++i) {
      for (Idx j = 0; j < r.cols; ++j) {
        r.at(i, j) = (*solution)[var(x, i, j)];
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

//! Exact verification of a candidate splitting.
inline bool splitting_is_valid(BundleSES const& s, std::vector<RationalMatrix> const& r) {
  auto const& g = *s.sub.gpd;
  for (Idx x = 0; x < g.n_objects(); ++x) {
    if (!(s.q[x] * r[x] == RationalMatrix::identity(s.quotient.dim[x]))) {
      return false;
    }
  }
  for (Idx m = 0; m < g.n_morphisms(); ++m) {
    if (!(s.middle.mat[m] * r[g.src(m)] == r[g.tgt(m)] * s.quotient.mat[m])) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// representation builders
// ---------------------------------------------------------------------------

//! Extends generator matrices to a full homomorphism table R(xy) = R(x)R(y)
//! by word closure.
inline std::vector<RationalMatrix> representation_from_generators(
    GroupTable const& g, std::vector<std::pair<Idx, RationalMatrix>> const& gens, Idx dim) {
  std::vector<RationalMatrix> rep(g.n);
  std::vector<char> have(g.n, 0);
  rep[g.identity()] = RationalMatrix::identity(dim);
  have[g.identity()] = 1;
  bool grew = true;
  while (grew) {
    grew = false;
    for (Idx x = 0; x < g.n; ++x) {
      if (!have[x]) {
        continue;
      }
      for (auto const& [gen, m] : gens) {
        Idx y = g.product(x, gen);
        if (!have[y]) {
          rep[y] = rep[x] * m;
          have[y] = 1;
          grew = true;
        }
      }
    }
  }
  for (char h : have) {
    if (!h) {
      throw PreconditionError("representation_from_generators: generators do not generate");
    }
  }
  return rep;
}

//! Arrow matrices compose contravariantly to the group table (the composite
//! of m then w acts by mat(w) mat(m)), so a bundle table is the
//! homomorphism table read through inverses.
inline std::vector<RationalMatrix> bundle_matrices(GroupTable const& g,
                                                   std::vector<RationalMatrix> const& hom) {
  std::vector<RationalMatrix> out(g.n);
  for (Idx x = 0; x < g.n; ++x) {
    out[x] = hom[g.inverse_of(x)];
  }
  return out;
}

//! A constant-dimension bundle over transitive_groupoid(n, k) built from a
//! bundle table of the vertex group.
inline GroupoidVectorBundle transitive_bundle(GroupoidPtr t,
                                              std::vector<RationalMatrix> const& table,
                                              Idx dim) {
  GroupoidVectorBundle v;
  v.gpd = t;
  v.dim.assign(t->n_objects(), dim);
  v.mat.resize(t->n_morphisms());
  Idx ng = static_cast<Idx>(table.size());
  for (Idx m = 0; m < t->n_morphisms(); ++m) {
    v.mat[m] = table[m % ng];
  }
  return v;
}

inline RationalMatrix kronecker(RationalMatrix const& x, RationalMatrix const& y) {
  RationalMatrix out(x.rows * y.rows, x.cols * y.cols);
  for (Idx i = 0; i < x.rows; ++i) {
    for (Idx j = 0; j < x.cols; ++j) {
      for (Idx k = 0; k < y.rows; ++k) {
        for (Idx l = 0; l < y.cols; ++l) {
          out.at(i * y.rows + k, j * y.cols + l) = x.at(i, j) * y.at(k, l);
        }
      }
    }
  }
  return out;
}

}  // namespace grpd
