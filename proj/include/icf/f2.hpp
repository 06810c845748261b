#pragma once
// Dense F2 matrices, bit-packed. Small sizes only.

#include <cassert>
#include <cstdint>
#include <vector>

namespace icf {

struct F2Mat {
  int rows = 0, cols = 0;
  int stride = 0; // uint64 words per row
  std::vector<uint64_t> w;

  F2Mat() = default;
  F2Mat(int r, int c) : rows(r), cols(c), stride((c + 63) / 64), w(size_t(r) * stride) {}

  bool get(int r, int c) const { return (w[size_t(r) * stride + c / 64] >> (c % 64)) & 1; }
  void set(int r, int c, bool v) {
    uint64_t& x = w[size_t(r) * stride + c / 64];
    uint64_t m = uint64_t(1) << (c % 64);
    x = v ? (x | m) : (x & ~m);
  }
  void flip(int r, int c) { w[size_t(r) * stride + c / 64] ^= uint64_t(1) << (c % 64); }

  void xor_row(int dst, int src) {
    for (int k = 0; k < stride; ++k) w[size_t(dst) * stride + k] ^= w[size_t(src) * stride + k];
  }
  bool row_zero(int r) const {
    for (int k = 0; k < stride; ++k)
      if (w[size_t(r) * stride + k]) return false;
    return true;
  }

  friend F2Mat operator*(const F2Mat& a, const F2Mat& b) {
    assert(a.cols == b.rows);
    F2Mat c(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
      for (int j = 0; j < a.cols; ++j)
        if (a.get(i, j)) c.xor_row_from(i, b, j);
    return c;
  }
  void xor_row_from(int dst, const F2Mat& other, int src) {
    for (int k = 0; k < stride; ++k)
      w[size_t(dst) * stride + k] ^= other.w[size_t(src) * other.stride + k];
  }
  friend F2Mat operator+(const F2Mat& a, const F2Mat& b) {
    assert(a.rows == b.rows && a.cols == b.cols);
    F2Mat c = a;
    for (size_t k = 0; k < c.w.size(); ++k) c.w[k] ^= b.w[k];
    return c;
  }
  bool is_zero() const {
    for (uint64_t x : w)
      if (x) return false;
    return true;
  }
  friend bool operator==(const F2Mat& a, const F2Mat& b) {
    return a.rows == b.rows && a.cols == b.cols && a.w == b.w;
  }
};

inline F2Mat f2_identity(int n) {
  F2Mat m(n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

// Gauss-Jordan inverse; returns false for singular input.
inline bool f2_inverse(const F2Mat& a, F2Mat& inv) {
  assert(a.rows == a.cols);
  int n = a.rows;
  F2Mat m = a;
  inv = f2_identity(n);
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int i = c; i < n; ++i)
      if (m.get(i, c)) { p = i; break; }
    if (p < 0) return false;
    if (p != c) {
      for (int k = 0; k < m.stride; ++k) {
        std::swap(m.w[size_t(p) * m.stride + k], m.w[size_t(c) * m.stride + k]);
        std::swap(inv.w[size_t(p) * inv.stride + k], inv.w[size_t(c) * inv.stride + k]);
      }
    }
    for (int i = 0; i < n; ++i)
      if (i != c && m.get(i, c)) {
        m.xor_row(i, c);
        inv.xor_row(i, c);
      }
  }
  return true;
}

// Row-reduces in place; returns rank. Optionally records pivot columns.
inline int f2_rank(F2Mat m, std::vector<int>* pivots = nullptr) {
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int p = -1;
    for (int i = r; i < m.rows; ++i)
      if (m.get(i, c)) { p = i; break; }
    if (p < 0) continue;
    if (p != r)
      for (int k = 0; k < m.stride; ++k)
        std::swap(m.w[size_t(p) * m.stride + k], m.w[size_t(r) * m.stride + k]);
    for (int i = 0; i < m.rows; ++i)
      if (i != r && m.get(i, c)) m.xor_row(i, r);
    if (pivots) pivots->push_back(c);
    ++r;
  }
  return r;
}

// Solves A x = b over F2. Returns false if inconsistent; x gets one solution
// (free variables zero).
inline bool f2_solve(const F2Mat& a, const std::vector<uint8_t>& b, std::vector<uint8_t>& x) {
  F2Mat aug(a.rows, a.cols + 1);
  for (int i = 0; i < a.rows; ++i) {
    for (int k = 0; k < a.stride; ++k) aug.w[size_t(i) * aug.stride + k] = a.w[size_t(i) * a.stride + k];
    // clear any spill past a.cols, then set the augmented column
    for (int c = a.cols; c < aug.cols - 1; ++c) aug.set(i, c, false);
    aug.set(i, a.cols, b[i]);
  }
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < aug.cols && r < aug.rows; ++c) {
    int p = -1;
    for (int i = r; i < aug.rows; ++i)
      if (aug.get(i, c)) { p = i; break; }
    if (p < 0) continue;
    if (c == a.cols) return false; // pivot in the constants column
    if (p != r)
      for (int k = 0; k < aug.stride; ++k)
        std::swap(aug.w[size_t(p) * aug.stride + k], aug.w[size_t(r) * aug.stride + k]);
    for (int i = 0; i < aug.rows; ++i)
      if (i != r && aug.get(i, c)) aug.xor_row(i, r);
    pivots.push_back(c);
    ++r;
  }
  x.assign(a.cols, 0);
  for (int i = 0; i < int(pivots.size()); ++i) x[pivots[i]] = aug.get(i, a.cols);
  return true;
}

} // namespace icf
