#pragma once
// Immersed multicurves in the punctured torus: free-homotopy words with
// local systems, extraction from reduced type D structures by crossover
// arrow removal, the inverse construction, pegboard lifts to the covers,
// mapping class group actions, and decomposition into the figure basis.
//
// Word letters: 'A'/'a' cross the horizontal curve upward/downward (one
// unit of mu), 'B'/'b' cross the vertical curve rightward/leftward (one
// unit of lambda). Circ generators sit on horizontal arcs, dot generators
// on vertical ones, so 'A'-letters correspond to circ crossings and
// 'B'-letters to dot crossings.

#include "icf/f2.hpp"
#include "icf/typed.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace icf {

// --- words ------------------------------------------------------------------

bool word_valid(const std::string& w);
char letter_invert(char c);
std::string word_invert(const std::string& w);      // reverse and invert letters
std::string cyclic_reduce(std::string w);           // cancel xX across the wrap too
std::string canonical_rotation(const std::string& w);
std::string canonical_word(const std::string& w);   // min over rotations and inversion
long long word_sum_lambda(const std::string& w);    // signed 'B' count
long long word_sum_mu(const std::string& w);        // signed 'A' count

// --- multicurves ------------------------------------------------------------

struct LocalSystem {
  F2Mat mono; // invertible monodromy; 1x1 identity = trivial
  LocalSystem() : mono(f2_identity(1)) {}
  explicit LocalSystem(F2Mat m) : mono(std::move(m)) {}
  int dim() const { return mono.rows; }
  bool trivial() const { return mono == f2_identity(mono.rows); }
};

bool local_systems_conjugate(const LocalSystem& a, const LocalSystem& b);

struct CurveComponent {
  std::string word;          // cyclically reduced, oriented
  LocalSystem ls;
  long long off_x2 = 0, off_y2 = 0; // doubled lift offset of the base vertex
};

struct GradingArrow {
  int from = 0, to = 0; // component indices
};

struct Multicurve {
  std::vector<CurveComponent> components;
  std::vector<GradingArrow> arrows;
};

// Homology class (lambda, mu) with local-system multiplicity.
std::pair<long long, long long> component_class(const CurveComponent& c);
std::pair<long long, long long> multicurve_class(const Multicurve& c);

// Same unoriented curve set up to lift translation and local-system
// conjugation; ignores offsets when positions is false.
bool multicurves_equal(const Multicurve& a, const Multicurve& b, bool positions = false);

// --- conversions with type D structures --------------------------------------

struct TrainTrack {
  TypeD d;
  std::vector<long long> x2, y2; // doubled generator positions in the plane cover
  std::vector<int> component;    // underlying graph component per generator
  int components = 0;
  bool positions_known = false;
};

// Validates, requires reduced input, checks the curved extension exists.
// Seeds, indexed by graph component, place that component's base generator.
TrainTrack track_from_typed(const TypeD& d, const std::vector<Gr>& seeds = {});

// Loop words of a valence-two structure, one per component, using the
// stored mod-2 signs for orientations. Throws on higher-valence input.
std::vector<std::string> loop_words(const TypeD& d);

// Crossover arrow removal: basis changes until the graph is valence two,
// grouping parallel strands into local systems when arrows cannot be
// removed. Grading arrows chain the resulting components.
Multicurve extract_curves(const TrainTrack& t);
Multicurve curves_from_typed(const TypeD& d, const std::vector<Gr>& seeds = {});

TypeD typed_from_word(const std::string& w);
// seeds_out, when given, receives per-component base gradings matching the
// component offsets, for feeding back into track_from_typed.
TypeD typed_from_curves(const Multicurve& c, std::vector<Gr>* seeds_out = nullptr);

// --- pegboard lifts -----------------------------------------------------------

// Exact rational coordinates. Small values only; denominators stay tiny.
struct Rat {
  long long n = 0, d = 1;
  Rat() = default;
  Rat(long long nn) : n(nn) {}
  Rat(long long nn, long long dd);
  friend Rat operator+(Rat a, Rat b);
  friend Rat operator-(Rat a, Rat b);
  friend Rat operator*(Rat a, Rat b);
  friend bool operator==(Rat a, Rat b) { return a.n == b.n && a.d == b.d; }
  friend bool operator<(Rat a, Rat b);
  friend bool operator<=(Rat a, Rat b) { return a < b || a == b; }
};

struct Pt {
  Rat x, y;
  friend bool operator==(const Pt& a, const Pt& b) { return a.x == b.x && a.y == b.y; }
};

// One lifted component copy: vertices of one period of the PL path. The
// path closes up after translation by period; closed components in the
// plane have period zero and verts.front() == verts.back().
struct PegPath {
  std::vector<Pt> verts;
  Pt period;
  int component = 0;
  int copy = 0; // local-system sheet
};

// Pegs sit at (a, b + 1/2); the puncture lift in the square right of peg
// column a is inset by kPegInset from the peg, toward lower left.
extern const Rat kPegInset;
Pt peg_point(long long a, long long b);      // (a, b + 1/2)
Pt puncture_point(long long a, long long b); // peg minus (inset, inset)

// Deterministic tight representative: canonical word rotation, straight
// dictionary arcs between generator points, sheets fanned out by 1/64.
std::vector<PegPath> lift_and_tighten(const Multicurve& c);

// --- mapping class group actions ----------------------------------------------

enum class MappingClass {
  EllipticInvolution,  // 180 degree rotation
  OrientationReversal, // negate the mu direction, fixing the longitude
};

Multicurve act(const Multicurve& c, MappingClass m);
// Left action of [[a,b],[c,d]] in SL(2,Z) on (lambda, mu) classes,
// factored into elementary twists.
Multicurve act(const Multicurve& c, const std::array<long long, 4>& m);

// --- figure basis --------------------------------------------------------------

// Twisted complex over the two objects hor (dot with a 12 self-loop) and
// ver (circ with a 23 self-loop). Entries at filtration one live in the
// morphism spaces <rho2>, <rho1+rho3>, <rho12>, <rho23>; higher entries
// are null-homotopy corrections.
struct FigureEntry {
  int from = 0, to = 0;
  Alg coeff;
  int filt_jump = 1;  // 1: zigzag map in a hom space; 2: correction term
};

struct FigureComplex {
  std::vector<bool> hor;     // object types, in word order
  std::vector<int> filt;     // filtration levels (all zero when inconsistent)
  std::vector<FigureEntry> entries;
  bool filtration_consistent = true;
  TypeD flatten() const;     // objects with self-loops plus all entries
};

// Express a word as a twisted complex over the two elementary loops: one
// object per letter, zigzag maps drawn from the four hom spaces, and higher
// corrections chosen deterministically so the flattened differential squares
// to zero. With closed=false the wrap-around transition is omitted (the word
// is an arc) and the filtration is always consistent. The length-two arcs
// give the two mapping cones, which flatten back to the slope +1 and -1
// curves; longer flattens are valid complexes but carry no such guarantee.
FigureComplex figure_basis_decompose(const std::string& word, bool closed = true);

} // namespace icf
