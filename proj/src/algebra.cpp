#include "icf/algebra.hpp"

#include <cassert>
#include <cstdlib>

namespace icf {

namespace {

int zeros_in(int f, int len) {
  int z = 0;
  for (int k = 0; k < len; ++k)
    if ((f + k) % 4 == 0) ++z;
  return z;
}

struct BasisTables {
  // per index: first letter, length (0 for idempotents)
  std::array<int, kBasisCount> first{};
  std::array<int, kBasisCount> len{};
  int index_of[4][8]; // [f][len] -> basis index or -1
  int prod[kBasisCount][kBasisCount]; // -1 for zero

  BasisTables() {
    for (auto& row : index_of)
      for (auto& v : row) v = -1;
    first[kIotaDot] = first[kIotaCirc] = -1;
    len[kIotaDot] = len[kIotaCirc] = 0;
    int next = 2;
    for (int L = 1; L <= 7; ++L)
      for (int f = 0; f < 4; ++f)
        if (zeros_in(f, L) <= 1) {
          first[next] = f;
          len[next] = L;
          index_of[f][L] = next;
          ++next;
        }
    assert(next == kBasisCount);

    auto left = [&](int idx) {
      if (idx == kIotaDot) return Idem::Dot;
      if (idx == kIotaCirc) return Idem::Circ;
      return letter_left(first[idx]);
    };
    auto right = [&](int idx) {
      if (len[idx] == 0) return left(idx);
      return letter_left((first[idx] + len[idx]) % 4);
    };

    for (int a = 0; a < kBasisCount; ++a)
      for (int b = 0; b < kBasisCount; ++b) {
        int r = -1;
        if (len[a] == 0) {
          if (left(a) == left(b)) r = b;
        } else if (len[b] == 0) {
          if (right(a) == left(b)) r = a;
        } else if ((first[a] + len[a]) % 4 == first[b] % 4) {
          int L = len[a] + len[b];
          if (L <= 7 && zeros_in(first[a], L) <= 1) r = index_of[first[a]][L];
        }
        prod[a][b] = r;
      }
  }
};

const BasisTables& tables() {
  static BasisTables t;
  return t;
}

} // namespace

int word_index(int f, int len) {
  if (len < 1 || len > 7) return -1;
  return tables().index_of[((f % 4) + 4) % 4][len];
}
bool basis_is_word(int idx) { return idx >= 2; }
int basis_first(int idx) { return tables().first[idx]; }
int basis_len(int idx) { return tables().len[idx]; }

Idem basis_left(int idx) {
  if (idx == kIotaDot) return Idem::Dot;
  if (idx == kIotaCirc) return Idem::Circ;
  return letter_left(tables().first[idx]);
}
Idem basis_right(int idx) {
  if (!basis_is_word(idx)) return basis_left(idx);
  return letter_left((tables().first[idx] + tables().len[idx]) % 4);
}
bool basis_is_hat(int idx) {
  if (!basis_is_word(idx)) return true;
  return zeros_in(tables().first[idx], tables().len[idx]) == 0;
}

std::string basis_name(int idx) {
  if (idx == kIotaDot) return "iota.";
  if (idx == kIotaCirc) return "iotao";
  return "r" + word_digits(idx);
}

std::string word_digits(int idx) {
  if (!basis_is_word(idx)) return "";
  std::string s;
  for (int k = 0; k < basis_len(idx); ++k)
    s += char('0' + (basis_first(idx) + k) % 4);
  return s;
}

const int R1 = word_index(1, 1);
const int R2 = word_index(2, 1);
const int R3 = word_index(3, 1);
const int R12 = word_index(1, 2);
const int R23 = word_index(2, 2);
const int R123 = word_index(1, 3);

int parse_word(const std::string& digits) {
  if (digits.empty() || digits.size() > 7) return -1;
  int f = digits[0] - '0';
  if (f < 0 || f > 3) return -1;
  for (size_t k = 0; k < digits.size(); ++k)
    if (digits[k] != char('0' + (f + k) % 4)) return -1;
  return word_index(f, int(digits.size()));
}

int Alg::single() const {
  assert(popcount() == 1);
  return __builtin_ctz(bits);
}

int mul_basis(int a, int b) { return tables().prod[a][b]; }

Alg mul(Alg a, Alg b) {
  Alg out;
  for (int i = 0; i < kBasisCount; ++i)
    if (a.has(i))
      for (int j = 0; j < kBasisCount; ++j)
        if (b.has(j)) {
          int p = mul_basis(i, j);
          if (p >= 0) out += Alg::unit(p);
        }
  return out;
}

Alg alg_U() {
  Alg u;
  for (int f = 0; f < 4; ++f) u += Alg::unit(word_index(f, 4));
  return u;
}

std::string alg_to_string(Alg a) {
  if (a.is_zero()) return "0";
  std::string s;
  for (int i = 0; i < kBasisCount; ++i)
    if (a.has(i)) {
      if (!s.empty()) s += "+";
      s += basis_name(i);
    }
  return s;
}

Gr gr_mul(Gr a, Gr b) {
  int det4 = a.i2 * b.j2 - a.j2 * b.i2;
  assert(det4 % 2 == 0);
  return {a.m2 + b.m2 + det4 / 2, a.i2 + b.i2, a.j2 + b.j2};
}

Gr gr_inv(Gr a) { return {-a.m2, -a.i2, -a.j2}; }

Gr gr_pow(Gr a, int n) {
  Gr r = kGrId;
  Gr base = n < 0 ? gr_inv(a) : a;
  for (int k = 0; k < std::abs(n); ++k) r = gr_mul(r, base);
  return r;
}

Gr gr_basis(int idx) {
  if (idx == R1) return {-1, 1, -1};
  if (idx == R2) return {-1, 1, 1};
  if (idx == R3) return {-1, -1, 1};
  if (idx == R12) return {-1, 2, 0};
  if (idx == R23) return {-1, 0, 2};
  if (idx == R123) return {-1, 1, 1};
  if (idx == kIotaDot || idx == kIotaCirc) return kGrId;
  assert(false && "grading requested for a non-hat word");
  return kGrId;
}

std::string gr_to_string(Gr g) {
  auto half = [](int v2) {
    if (v2 % 2 == 0) return std::to_string(v2 / 2);
    return std::to_string(v2) + "/2";
  };
  return "(" + half(g.m2) + ";" + half(g.i2) + "," + half(g.j2) + ")";
}

int gr_mod2(Gr g, bool plus, bool type_a) {
  bool i_int = g.i2 % 2 == 0, j_int = g.j2 % 2 == 0;
  assert(i_int == j_int && "i+j must be an integer");
  int f4 = 0;
  if (i_int) {
    if (((g.i2 - g.j2) / 2) % 2 == 0) {
      f4 = 2 * g.m2 + g.i2 + g.j2;
    } else {
      int s = plus ? 1 : -1;
      f4 = 2 * g.m2 + s * (g.j2 - g.i2);
    }
  } else {
    int s = (plus != type_a) ? 1 : -1;
    f4 = 2 * g.m2 + (g.i2 + s) * (g.j2 + s) + 2 * s;
  }
  assert(f4 % 4 == 0);
  return ((f4 / 4) % 2 + 2) % 2;
}

} // namespace icf
