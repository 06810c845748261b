#pragma once

#include "icf/typed.hpp"

#include <string>
#include <vector>

namespace icf {

// Standard type DA bimodules over the torus algebra, by name:
//   "identity"            diagonal bimodule
//   "half_identity"       identity plus one length-3 operation; squares to the identity
//   "az"                  Auroux-Zarev piece
//   "elliptic"            az minus its dashed arrow; acts as the elliptic involution
//   "twist_alpha_plus"    positive Dehn twist along alpha ("a+")
//   "twist_alpha_minus"   its inverse ("a-")
//   "twist_beta_plus"     positive Dehn twist along beta ("b+")
//   "twist_beta_minus"    its inverse ("b-")
//   "genus_adder"         three-component bimodule raising fibre genus by one
// Throws std::invalid_argument on an unknown name.
TypeDA make_standard(const std::string& name);

// Four-generator loop with a rho3-then-rho2 chain, the pattern no loop of
// slope type contains. Separates "az" from "elliptic" and fails the
// extension obstruction, so it is not the invariant of any 3-manifold.
TypeD basepoint_circle();

struct RelationReport {
  bool ok = true;
  std::vector<std::string> lines;  // one line per check
};

// Structural identities of the library: half_identity squares to the
// identity, elliptic arises from boxing half_identity with az, and the
// alpha twists are mutually inverse.
RelationReport verify_relations();

struct CensusRow {
  int dots = 0;   // generators in the dot idempotent, per component
  int circs = 0;  // generators in the circle idempotent, per component
  long long count = 0;
};

// Component census of the g-fold genus-adder image of the slope-0 loop,
// sorted by (dots, circs).
std::vector<CensusRow> genus_census(int g);

// Closed-form expectation for the same census.
std::vector<CensusRow> expected_census(int g);

long long census_total_dim(const std::vector<CensusRow>& rows);

}  // namespace icf
