#pragma once
// Independent matrix models of small sl(2) and sl(3) representations, used as
// oracles for the shuffle-algebra constructions.

#include <vector>

#include "pdiff/linalg.hpp"

namespace oracle {

using pdiff::Matrix;
using pdiff::Q;

struct MatRep {
  std::size_t dim = 0;
  std::vector<Matrix> e, f, h;  // one per simple root
};

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j) == 0) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    }
  return out;
}

// Irreducible sl(2)-module of highest weight lam, basis v_0..v_lam with f v_j = (j+1) v_{j+1}.
inline MatRep sl2_irrep(int lam) {
  std::size_t d = std::size_t(lam + 1);
  MatRep r;
  r.dim = d;
  Matrix e(d, d), f(d, d), h(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    h(j, j) = lam - 2 * int(j);
    if (j + 1 < d) f(j + 1, j) = Q(int(j) + 1);
    if (j > 0) e(j - 1, j) = Q(lam - int(j) + 1);
  }
  r.e = {e};
  r.f = {f};
  r.h = {h};
  return r;
}

inline Matrix unit_matrix(std::size_t n, std::size_t i, std::size_t j) {
  Matrix m(n, n);
  m(i, j) = 1;
  return m;
}

inline MatRep sl3_defining() {
  MatRep r;
  r.dim = 3;
  r.e = {unit_matrix(3, 0, 1), unit_matrix(3, 1, 2)};
  r.f = {unit_matrix(3, 1, 0), unit_matrix(3, 2, 1)};
  r.h = {unit_matrix(3, 0, 0) - unit_matrix(3, 1, 1), unit_matrix(3, 1, 1) - unit_matrix(3, 2, 2)};
  return r;
}

// Contragredient: X acts as -X^T.
inline MatRep dual(const MatRep& a) {
  MatRep r;
  r.dim = a.dim;
  for (const auto& x : a.e) r.e.push_back(x.transpose() * Q(-1));
  for (const auto& x : a.f) r.f.push_back(x.transpose() * Q(-1));
  for (const auto& x : a.h) r.h.push_back(x.transpose() * Q(-1));
  return r;
}

// Adjoint representation of sl(3), computed from brackets of 3x3 matrices.
inline MatRep sl3_adjoint() {
  std::vector<Matrix> basis;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j) basis.push_back(unit_matrix(3, i, j));
  basis.push_back(unit_matrix(3, 0, 0) - unit_matrix(3, 1, 1));
  basis.push_back(unit_matrix(3, 1, 1) - unit_matrix(3, 2, 2));
  Matrix coords(9, basis.size());
  for (std::size_t b = 0; b < basis.size(); ++b)
    for (std::size_t k = 0; k < 9; ++k) coords(k, b) = basis[b](k / 3, k % 3);
  auto ad = [&](const Matrix& x) {
    Matrix out(basis.size(), basis.size());
    for (std::size_t b = 0; b < basis.size(); ++b) {
      Matrix y = x * basis[b] - basis[b] * x;
      std::vector<Q> flat(9);
      for (std::size_t k = 0; k < 9; ++k) flat[k] = y(k / 3, k % 3);
      auto sol = coords.solve(flat);
      for (std::size_t i = 0; i < basis.size(); ++i) out(i, b) = (*sol)[i];
    }
    return out;
  };
  MatRep def = sl3_defining();
  MatRep r;
  r.dim = basis.size();
  for (const auto& x : def.e) r.e.push_back(ad(x));
  for (const auto& x : def.f) r.f.push_back(ad(x));
  for (const auto& x : def.h) r.h.push_back(ad(x));
  return r;
}

inline MatRep tensor(const MatRep& a, const MatRep& b) {
  MatRep r;
  r.dim = a.dim * b.dim;
  Matrix ia = Matrix::identity(a.dim), ib = Matrix::identity(b.dim);
  for (std::size_t k = 0; k < a.e.size(); ++k) {
    r.e.push_back(kron(a.e[k], ib) + kron(ia, b.e[k]));
    r.f.push_back(kron(a.f[k], ib) + kron(ia, b.f[k]));
    r.h.push_back(kron(a.h[k], ib) + kron(ia, b.h[k]));
  }
  return r;
}

inline MatRep tensor_all(const std::vector<MatRep>& parts) {
  MatRep r = parts.at(0);
  for (std::size_t i = 1; i < parts.size(); ++i) r = tensor(r, parts[i]);
  return r;
}

// Dimension of the space killed by every e_k and f_k.
inline std::size_t invariant_dim(const MatRep& r) {
  std::vector<const Matrix*> ops;
  for (const auto& x : r.e) ops.push_back(&x);
  for (const auto& x : r.f) ops.push_back(&x);
  Matrix stacked(ops.size() * r.dim, r.dim);
  for (std::size_t o = 0; o < ops.size(); ++o)
    for (std::size_t i = 0; i < r.dim; ++i)
      for (std::size_t j = 0; j < r.dim; ++j) stacked(o * r.dim + i, j) = (*ops[o])(i, j);
  return r.dim - stacked.rank();
}

// Weight-zero subspace dimension (common kernel of the h_k).
inline std::size_t weight_zero_dim(const MatRep& r) {
  Matrix stacked(r.h.size() * r.dim, r.dim);
  for (std::size_t o = 0; o < r.h.size(); ++o)
    for (std::size_t i = 0; i < r.dim; ++i)
      for (std::size_t j = 0; j < r.dim; ++j) stacked(o * r.dim + i, j) = r.h[o](i, j);
  return r.dim - stacked.rank();
}

// Root vectors of sl(2) / sl(3) built from the simple ones, paired dually for the trace form.
struct RootPairs {
  std::vector<Matrix> pos, neg;
};

inline RootPairs root_pairs(const MatRep& r) {
  RootPairs out;
  for (std::size_t k = 0; k < r.e.size(); ++k) {
    out.pos.push_back(r.e[k]);
    out.neg.push_back(r.f[k]);
  }
  if (r.e.size() == 2) {  // sl(3): E13 = [e1, e2], E31 = [f2, f1]
    out.pos.push_back(r.e[0] * r.e[1] - r.e[1] * r.e[0]);
    out.neg.push_back(r.f[1] * r.f[0] - r.f[0] * r.f[1]);
  }
  return out;
}

// c times the trace-form Casimir acting through tensor factors a and b of parts.
// Returns the full operator and its positive part c * sum e_alpha (x) f_alpha.
struct CasimirOps {
  Matrix full, plus, minus;
};

inline Matrix embed(const std::vector<MatRep>& parts, std::size_t slot, const Matrix& x) {
  Matrix out = Matrix::identity(1);
  for (std::size_t s = 0; s < parts.size(); ++s) out = kron(out, s == slot ? x : Matrix::identity(parts[s].dim));
  return out;
}

inline CasimirOps casimir(const std::vector<MatRep>& parts, std::size_t a, std::size_t b, const Q& c) {
  std::size_t dim = 1;
  for (const auto& p : parts) dim *= p.dim;
  const std::size_t r = parts[a].h.size();
  Matrix gram(r, r);
  for (std::size_t k = 0; k < r; ++k)
    for (std::size_t l = 0; l < r; ++l) gram(k, l) = (k == l) ? 2 : (r == 2 ? -1 : 0);
  Matrix ginv = *gram.inverse();
  RootPairs ra = root_pairs(parts[a]), rb = root_pairs(parts[b]);
  CasimirOps ops{Matrix(dim, dim), Matrix(dim, dim), Matrix(dim, dim)};
  for (std::size_t i = 0; i < ra.pos.size(); ++i) {
    ops.plus = ops.plus + embed(parts, a, ra.pos[i]) * embed(parts, b, rb.neg[i]);
    ops.minus = ops.minus + embed(parts, a, ra.neg[i]) * embed(parts, b, rb.pos[i]);
  }
  Matrix h(dim, dim);
  for (std::size_t k = 0; k < r; ++k)
    for (std::size_t l = 0; l < r; ++l)
      h = h + embed(parts, a, parts[a].h[k]) * embed(parts, b, parts[b].h[l]) * ginv(k, l);
  ops.plus = ops.plus * c;
  ops.minus = ops.minus * c;
  ops.full = ops.plus + ops.minus + h * c;
  return ops;
}

// Columns spanning the joint eigenspace h_k = value_k.
inline Matrix weight_space(const MatRep& r, const std::vector<Q>& value) {
  Matrix stacked(r.h.size() * r.dim, r.dim);
  for (std::size_t o = 0; o < r.h.size(); ++o)
    for (std::size_t i = 0; i < r.dim; ++i)
      for (std::size_t j = 0; j < r.dim; ++j) stacked(o * r.dim + i, j) = r.h[o](i, j) - (i == j ? value[o] : Q(0));
  return stacked.kernel();
}

// Columns spanning the joint kernel of all e_k and f_k.
inline Matrix invariant_space(const MatRep& r) {
  std::vector<const Matrix*> ops;
  for (const auto& x : r.e) ops.push_back(&x);
  for (const auto& x : r.f) ops.push_back(&x);
  Matrix stacked(ops.size() * r.dim, r.dim);
  for (std::size_t o = 0; o < ops.size(); ++o)
    for (std::size_t i = 0; i < r.dim; ++i)
      for (std::size_t j = 0; j < r.dim; ++j) stacked(o * r.dim + i, j) = (*ops[o])(i, j);
  return stacked.kernel();
}

// M with X K = K M, for K with independent columns spanning an X-stable space.
inline Matrix restrict_to(const Matrix& X, const Matrix& K) {
  Matrix XK = X * K;
  Matrix M(K.cols(), K.cols());
  for (std::size_t j = 0; j < K.cols(); ++j) {
    auto sol = K.solve(XK.column(j));
    if (!sol) throw std::domain_error("restrict_to: subspace is not stable");
    for (std::size_t i = 0; i < K.cols(); ++i) M(i, j) = (*sol)[i];
  }
  return M;
}

// tr(M), tr(M^2), ..., tr(M^d): equal lists mean equal characteristic polynomials.
inline std::vector<Q> power_traces(const Matrix& M) {
  std::vector<Q> out;
  Matrix P = M;
  for (std::size_t j = 0; j < M.rows(); ++j) {
    Q t(0);
    for (std::size_t i = 0; i < M.rows(); ++i) t += P(i, i);
    out.push_back(t);
    P = P * M;
  }
  return out;
}

}  // namespace oracle
