#pragma once
// Torus algebra: the 8-dimensional hat version and its 24-dimensional
// extension by the fourth boundary letter, plus the noncommutative
// grading group and the mod-2 collapse functions.
//
// Basis words are encoded as (first letter f, length L): the word with
// letters f, f+1, ..., f+L-1 taken mod 4. A word is admissible when it
// contains at most one letter 0; the hat subalgebra is spanned by the
// zero-free words together with the two idempotents.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace icf {

enum class Idem : uint8_t { Dot = 0, Circ = 1 };

inline Idem opposite(Idem i) { return i == Idem::Dot ? Idem::Circ : Idem::Dot; }
inline const char* idem_name(Idem i) { return i == Idem::Dot ? "dot" : "circ"; }

// Left idempotent of a single letter r in {0,1,2,3}: letters 1 and 3 start
// on the dot class, letters 0 and 2 on the circ class.
inline Idem letter_left(int r) { return (r % 2) ? Idem::Dot : Idem::Circ; }
inline Idem letter_right(int r) { return letter_left((r + 1) % 4); }

// Basis layout: index 0 = iota_dot, 1 = iota_circ, then admissible words
// ordered by (length, first letter). 24 slots total.
constexpr int kIotaDot = 0;
constexpr int kIotaCirc = 1;
constexpr int kBasisCount = 24;

// -1 if the (f, len) word has more than one letter 0.
int word_index(int f, int len);
bool basis_is_word(int idx);
int basis_first(int idx);   // first letter, words only
int basis_len(int idx);     // 0 for idempotents
Idem basis_left(int idx);
Idem basis_right(int idx);
bool basis_is_hat(int idx); // idempotents and zero-free words
std::string basis_name(int idx); // "iota.", "iota o", "r123", "r30", ...

// Hat word indices, resolved once.
extern const int R1, R2, R3, R12, R23, R123;

// parse "1", "23", "1230": digits must be cyclically consecutive mod 4.
// Returns -1 on malformed input.
int parse_word(const std::string& digits);
std::string word_digits(int idx); // "123" for R123; empty for idempotents

// F2 linear combination of basis elements, one bit per slot.
struct Alg {
  uint32_t bits = 0;

  static Alg zero() { return {}; }
  static Alg unit(int idx) { return {uint32_t(1) << idx}; }
  static Alg iota(Idem i) { return unit(i == Idem::Dot ? kIotaDot : kIotaCirc); }

  bool is_zero() const { return bits == 0; }
  bool has(int idx) const { return (bits >> idx) & 1; }
  int popcount() const { return __builtin_popcount(bits); }
  // The unique set bit; asserts a single term.
  int single() const;

  friend Alg operator+(Alg a, Alg b) { return {a.bits ^ b.bits}; }
  Alg& operator+=(Alg b) { bits ^= b.bits; return *this; }
  friend bool operator==(Alg a, Alg b) { return a.bits == b.bits; }
};

Alg mul(Alg a, Alg b);
int mul_basis(int a, int b); // -1 when the product vanishes
Alg alg_U();                 // sum of the four length-4 words
std::string alg_to_string(Alg a);

// Grading group: (m; i, j) in half-integers, stored doubled. The product
// twists by the determinant of the (i,j) parts and lambda = (1;0,0) is
// central. The parity constraint i+j in Z holds for everything we build.
struct Gr {
  int m2 = 0, i2 = 0, j2 = 0;
  friend bool operator==(const Gr&, const Gr&) = default;
};

constexpr Gr kGrId{0, 0, 0};
constexpr Gr kLambda{2, 0, 0};

Gr gr_mul(Gr a, Gr b);
Gr gr_inv(Gr a);
Gr gr_pow(Gr a, int n);
Gr gr_basis(int idx); // hat basis only
std::string gr_to_string(Gr g);

// Mod-2 collapse of a group element; the two signs are the two choices of
// square root on the off-lattice part. type_a flips those signs, matching
// the reversed multiplication order on that side.
int gr_mod2(Gr g, bool plus, bool type_a = false);

} // namespace icf
