#pragma once
// Type D structures over the torus algebra, their extended (curved)
// versions, DA bimodules, the derived right A-infinity module, and the
// morphism-complex pairing that serves as the algebraic oracle for the
// geometric intersection pairing.

#include "icf/algebra.hpp"
#include "icf/f2.hpp"

#include <string>
#include <vector>

namespace icf {

struct DGen {
  std::string id;
  Idem idem = Idem::Dot;
  int z2 = -1; // optional mod-2 sign, -1 unknown
};

struct DEdge {
  int from = 0, to = 0;
  int label = 0; // algebra basis index (idempotent label = internal differential)
};

struct TypeD {
  std::vector<DGen> gens;
  std::vector<DEdge> edges;
  bool extended = false;

  int find(const std::string& id) const;
  int add(const std::string& id, Idem idem);
  void arrow(const std::string& from, const std::string& label, const std::string& to);
  void normalize(); // sort, cancel duplicate edges mod 2
};

// hor = dot generator with a 12 self-loop (slope 0), ver = circ with a 23
// self-loop (slope infinity), d_slope_loop(k) the slope-k loop.
TypeD d_hor();
TypeD d_ver();
TypeD d_slope_loop(int k);

struct ValidateResult {
  bool ok = true;
  std::string error;
};
ValidateResult d_validate(const TypeD& d);

TypeD d_reduce(TypeD d);
bool d_is_reduced(const TypeD& d);

bool d_isomorphic(const TypeD& a, const TypeD& b); // label-preserving graph iso

// Connected components of the underlying undirected graph, as generator
// index sets (each sorted; components ordered by smallest member).
std::vector<std::vector<int>> d_components(const TypeD& d);

// Extension to the curved structure over the bigger algebra: solves for the
// arrows with a letter 0 so that the square of the differential equals the
// central curvature term. Throws std::runtime_error when no extension exists.
TypeD d_extend(const TypeD& d);

struct ExtensionCheck {
  bool curved_ok = false; // square of differential = curvature
  bool psi_ok = false;    // the degree-4 obstruction vanishes
  bool ok() const { return curved_ok && psi_ok; }
};
ExtensionCheck d_extension_check(const TypeD& extended);

// Relative mod-2 signs from the edge-label rule (flip across 1, 3 and
// idempotent labels; keep across 2, 12, 23, 123). Empty on inconsistency.
std::vector<int> d_mod2_signs(const TypeD& d);

// Gradings by spanning-tree propagation. seeds, when given, are indexed by
// component and multiply the base generator's grading.
struct DGrading {
  std::vector<Gr> gr;
  std::vector<int> component;
  std::vector<Gr> periods;
  int components = 0;
};
DGrading d_grading(const TypeD& d, const std::vector<Gr>& seeds = {});

// --- DA bimodules ----------------------------------------------------------

struct DAGen {
  std::string id;
  Idem d_idem = Idem::Dot; // output (type D) side
  Idem a_idem = Idem::Dot; // input (type A) side
  int z2 = 0;
};

struct DAOp {
  int from = 0;
  std::vector<int> inputs; // algebra basis indices consumed on the A side
  int coeff = kIotaDot;    // output coefficient on the D side
  int to = 0;
};

struct TypeDA {
  std::vector<DAGen> gens;
  std::vector<DAOp> ops;
  int find(const std::string& id) const;
  int add(const std::string& id, Idem d_idem, Idem a_idem, int z2 = 0);
  void op(const std::string& from, const std::vector<std::string>& inputs,
          const std::string& coeff, const std::string& to);
  void normalize();
};

ValidateResult da_validate(const TypeDA& b);

TypeDA da_reduce(TypeDA b);

// (bimodule) box (type D) -> type D.
TypeD box_da_d(const TypeDA& b, const TypeD& n);

// (outer) box (inner) -> bimodule; outer's A side consumes inner's D side.
TypeDA box_da_da(const TypeDA& outer, const TypeDA& inner);

bool da_isomorphic(const TypeDA& a, const TypeDA& b); // reduced inputs

TypeDA da_direct_sum(const TypeDA& a, const TypeDA& b); // ids must not clash

// --- right A-infinity modules and the pairing ------------------------------

struct AGen {
  std::string id;
  Idem match = Idem::Dot; // idempotent it consumes from the type D side
};

struct AOp {
  int from = 0;
  std::vector<int> inputs; // empty = internal differential
  int to = 0;
};

struct TypeA {
  std::vector<AGen> gens;
  std::vector<AOp> ops;
  void normalize();
};

// The module Hom(N, algebra): generators (x, a) with left idem of a equal to
// the idempotent of x, internal differential by pre-composition, right
// multiplication as m2. Boxing against M reproduces Mor(N, M).
TypeA derive_type_a(const TypeD& n);

// Homotopy transfer: cancels internal differentials, generating higher
// operations. Cancellation can make a module genuinely infinite (loops
// through a cancelled pair); operations needing arity > max_arity are
// dropped and *truncated is set. Pairing code boxes the unreduced module,
// so this is for inspection and small exact cases only.
TypeA a_reduce(TypeA a, int max_arity = 8, bool* truncated = nullptr);

struct PairGen {
  int x, a, y; // indices into n0 gens, algebra basis, n1 gens
  int spinc = 0;
};
struct PairedComplex {
  std::vector<PairGen> gens;
  std::vector<std::pair<int, int>> diff;
  int spinc_count = 0;
};

// Mor(n0, n1): computes HF-hat of the gluing matching both parametrizations.
// Seeds (per component, as in d_grading) pin relative spin-c across
// components when known from curve positions.
PairedComplex mor_complex(const TypeD& n0, const TypeD& n1,
                          const std::vector<Gr>& seeds0 = {},
                          const std::vector<Gr>& seeds1 = {});

struct BoxedComplex {
  std::vector<std::pair<int, int>> gens; // (module gen, type D gen)
  std::vector<std::pair<int, int>> diff;
};
BoxedComplex box_ad(const TypeA& a, const TypeD& n);

int complex_homology_dim(int n, const std::vector<std::pair<int, int>>& diff);
std::vector<int> pair_homology_by_spinc(const PairedComplex& c);

} // namespace icf
