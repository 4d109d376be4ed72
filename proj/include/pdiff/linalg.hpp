#pragma once
// Dense exact linear algebra over Q.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdiff/rational.hpp"

namespace pdiff {

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols, Q(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  Q& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  const Q& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    if (x.c_ != y.r_) throw std::invalid_argument("matrix product: shape mismatch");
    Matrix out(x.r_, y.c_);
    for (std::size_t i = 0; i < x.r_; ++i)
      for (std::size_t k = 0; k < x.c_; ++k) {
        const Q& v = x(i, k);
        if (v == 0) continue;
        for (std::size_t j = 0; j < y.c_; ++j) out(i, j) += v * y(k, j);
      }
    return out;
  }
  friend Matrix operator+(Matrix x, const Matrix& y) {
    x.check_same(y);
    for (std::size_t i = 0; i < x.a_.size(); ++i) x.a_[i] += y.a_[i];
    return x;
  }
  friend Matrix operator-(Matrix x, const Matrix& y) {
    x.check_same(y);
    for (std::size_t i = 0; i < x.a_.size(); ++i) x.a_[i] -= y.a_[i];
    return x;
  }
  friend Matrix operator*(Matrix x, const Q& s) {
    for (auto& v : x.a_) v *= s;
    return x;
  }
  friend bool operator==(const Matrix& x, const Matrix& y) {
    return x.r_ == y.r_ && x.c_ == y.c_ && x.a_ == y.a_;
  }
  bool is_zero() const {
    for (const auto& v : a_)
      if (v != 0) return false;
    return true;
  }

  Matrix transpose() const {
    Matrix t(c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  // Row-reduces in place; returns pivot columns.
  std::vector<std::size_t> rref() {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < c_ && row < r_; ++col) {
      std::size_t p = row;
      while (p < r_ && (*this)(p, col) == 0) ++p;
      if (p == r_) continue;
      if (p != row)
        for (std::size_t j = 0; j < c_; ++j) std::swap((*this)(p, j), (*this)(row, j));
      Q inv = 1 / (*this)(row, col);
      for (std::size_t j = col; j < c_; ++j) (*this)(row, j) *= inv;
      for (std::size_t i = 0; i < r_; ++i) {
        if (i == row) continue;
        Q f = (*this)(i, col);
        if (f == 0) continue;
        for (std::size_t j = col; j < c_; ++j) (*this)(i, j) -= f * (*this)(row, j);
      }
      pivots.push_back(col);
      ++row;
    }
    return pivots;
  }

  std::size_t rank() const {
    Matrix m = *this;
    return m.rref().size();
  }

  // Basis of {x : M x = 0}, as columns of the returned matrix.
  Matrix kernel() const {
    Matrix m = *this;
    auto piv = m.rref();
    std::vector<bool> is_piv(c_, false);
    for (auto p : piv) is_piv[p] = true;
    std::vector<std::size_t> free;
    for (std::size_t j = 0; j < c_; ++j)
      if (!is_piv[j]) free.push_back(j);
    Matrix k(c_, free.size());
    for (std::size_t f = 0; f < free.size(); ++f) {
      k(free[f], f) = 1;
      for (std::size_t i = 0; i < piv.size(); ++i) k(piv[i], f) = -m(i, free[f]);
    }
    return k;
  }

  // Some x with M x = b, if one exists.
  std::optional<std::vector<Q>> solve(const std::vector<Q>& b) const {
    if (b.size() != r_) throw std::invalid_argument("solve: rhs size");
    Matrix aug(r_, c_ + 1);
    for (std::size_t i = 0; i < r_; ++i) {
      for (std::size_t j = 0; j < c_; ++j) aug(i, j) = (*this)(i, j);
      aug(i, c_) = b[i];
    }
    auto piv = aug.rref();
    if (!piv.empty() && piv.back() == c_) return std::nullopt;
    std::vector<Q> x(c_, Q(0));
    for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = aug(i, c_);
    return x;
  }

  std::optional<Matrix> inverse() const {
    if (r_ != c_) return std::nullopt;
    Matrix aug(r_, 2 * c_);
    for (std::size_t i = 0; i < r_; ++i) {
      for (std::size_t j = 0; j < c_; ++j) aug(i, j) = (*this)(i, j);
      aug(i, c_ + i) = 1;
    }
    auto piv = aug.rref();
    if (piv.size() < r_ || piv[r_ - 1] >= c_) return std::nullopt;
    Matrix inv(r_, c_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j) inv(i, j) = aug(i, c_ + j);
    return inv;
  }

  std::vector<Q> column(std::size_t j) const {
    std::vector<Q> out(r_);
    for (std::size_t i = 0; i < r_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  std::string str() const {
    std::string out = "[";
    for (std::size_t i = 0; i < r_; ++i) {
      out += i ? ", [" : "[";
      for (std::size_t j = 0; j < c_; ++j) out += (j ? ", " : "") + (*this)(i, j).get_str();
      out += "]";
    }
    return out + "]";
  }

 private:
  void check_same(const Matrix& y) const {
    if (r_ != y.r_ || c_ != y.c_) throw std::invalid_argument("matrix shape mismatch");
  }
  std::size_t r_ = 0, c_ = 0;
  std::vector<Q> a_;
};

// Builds the matrix whose columns are the given sparse vectors over a shared key set.
template <class Key>
Matrix columns_matrix(const std::vector<std::map<Key, Q>>& vecs, std::vector<Key>* keys_out = nullptr) {
  std::map<Key, std::size_t> index;
  for (const auto& v : vecs)
    for (const auto& [k, q] : v) index.emplace(k, 0);
  std::size_t i = 0;
  for (auto& kv : index) kv.second = i++;
  Matrix m(index.size(), vecs.size());
  for (std::size_t j = 0; j < vecs.size(); ++j)
    for (const auto& [k, q] : vecs[j]) m(index[k], j) = q;
  if (keys_out) {
    keys_out->clear();
    for (const auto& kv : index) keys_out->push_back(kv.first);
  }
  return m;
}

}  // namespace pdiff
