#include "icf/bimodule.hpp"

#include <map>
#include <stdexcept>
#include <utility>

namespace icf {

namespace {

TypeDA identity_bimodule() {
  TypeDA b;
  b.add("u", Idem::Dot, Idem::Dot);
  b.add("v", Idem::Circ, Idem::Circ);
  b.op("u", {"1"}, "1", "v");
  b.op("u", {"3"}, "3", "v");
  b.op("u", {"12"}, "12", "u");
  b.op("u", {"123"}, "123", "v");
  b.op("v", {"2"}, "2", "u");
  b.op("v", {"23"}, "23", "v");
  b.normalize();
  return b;
}

TypeDA half_identity_bimodule() {
  TypeDA b = identity_bimodule();
  b.op("u", {"3", "2", "1"}, "123", "v");
  b.normalize();
  return b;
}

TypeDA az_bimodule(bool dashed_arrow) {
  TypeDA b;
  b.add("i0", Idem::Circ, Idem::Dot);
  b.add("i1", Idem::Dot, Idem::Circ);
  b.add("r1", Idem::Circ, Idem::Circ);
  b.add("r2", Idem::Dot, Idem::Dot);
  b.add("r3", Idem::Circ, Idem::Circ);
  b.add("r12", Idem::Circ, Idem::Dot);
  b.add("r23", Idem::Dot, Idem::Circ);
  b.add("r123", Idem::Circ, Idem::Circ);
  b.op("i0", {}, "2", "r2");
  b.op("i1", {}, "1", "r1");
  b.op("i1", {}, "3", "r3");
  if (dashed_arrow) b.op("i1", {}, "123", "r123");
  b.op("r2", {}, "1", "r12");
  b.op("r3", {}, "2", "r23");
  b.op("r23", {}, "1", "r123");
  b.op("i0", {"1"}, "1_", "r1");
  b.op("i0", {"3"}, "1_", "r3");
  b.op("i0", {"12"}, "1_", "r12");
  b.op("i0", {"123"}, "1_", "r123");
  b.op("i1", {"2"}, "1_", "r2");
  b.op("i1", {"23"}, "1_", "r23");
  b.op("r1", {"2"}, "1_", "r12");
  b.op("r1", {"23"}, "1_", "r123");
  b.op("r2", {"3"}, "1_", "r23");
  b.op("r12", {"3"}, "1_", "r123");
  b.normalize();
  return b;
}

TypeDA twist_bimodule(const std::string& which) {
  TypeDA b;
  if (which == "a+") {
    b.add("p", Idem::Dot, Idem::Dot);
    b.add("q", Idem::Circ, Idem::Circ);
    b.add("r", Idem::Circ, Idem::Dot);
    b.op("p", {"1"}, "1", "q");
    b.op("p", {"3", "2"}, "3", "r");
    b.op("p", {"3", "23"}, "3", "q");
    b.op("p", {"12"}, "123", "r");
    b.op("p", {"123"}, "123", "q");
    b.op("q", {"2"}, "23", "r");
    b.op("q", {"23"}, "23", "q");
    b.op("r", {}, "2", "p");
    b.op("r", {"3"}, "1_", "q");
  } else if (which == "a-") {
    b.add("p", Idem::Dot, Idem::Dot);
    b.add("q", Idem::Circ, Idem::Circ);
    b.add("r", Idem::Circ, Idem::Dot);
    b.op("p", {}, "3", "r");
    b.op("p", {"1"}, "1", "q");
    b.op("p", {"12"}, "1", "r");
    b.op("p", {"123"}, "123", "q");
    b.op("p", {"123", "2"}, "12", "p");
    b.op("q", {"2"}, "1_", "r");
    b.op("q", {"23"}, "23", "q");
    b.op("q", {"23", "2"}, "2", "p");
    b.op("r", {"3"}, "23", "q");
    b.op("r", {"3", "2"}, "2", "p");
  } else if (which == "b+") {
    b.add("p", Idem::Dot, Idem::Dot);
    b.add("q", Idem::Circ, Idem::Circ);
    b.add("w", Idem::Dot, Idem::Circ);
    b.op("p", {"1"}, "1_", "w");
    b.op("p", {"3"}, "3", "q");
    b.op("p", {"12"}, "12", "p");
    b.op("p", {"12", "1"}, "1", "q");
    b.op("p", {"123"}, "123", "q");
    b.op("q", {}, "2", "w");
    b.op("w", {"2"}, "12", "p");
    b.op("w", {"2", "1"}, "1", "q");
    b.op("w", {"23"}, "123", "q");
  } else {  // b-
    b.add("p", Idem::Dot, Idem::Dot);
    b.add("q", Idem::Circ, Idem::Circ);
    b.add("w", Idem::Dot, Idem::Circ);
    b.op("p", {"1"}, "12", "w");
    b.op("p", {"3"}, "3", "q");
    b.op("p", {"12"}, "12", "p");
    b.op("p", {"123"}, "123", "q");
    b.op("q", {"2", "1"}, "2", "w");
    b.op("q", {"2", "12"}, "2", "p");
    b.op("q", {"2", "123"}, "23", "q");
    b.op("w", {}, "1", "q");
    b.op("w", {"2"}, "1_", "p");
    b.op("w", {"23"}, "3", "q");
  }
  b.normalize();
  return b;
}

// One-component genus raiser: takes the slope-0 loop to a figure-eight pair
// and each figure-eight pair of slopes 2i, -2i to the neighbouring pairs.
TypeDA genus_adder_core() {
  TypeDA b;
  b.add("x1", Idem::Dot, Idem::Dot, 1);
  b.add("x2", Idem::Circ, Idem::Dot);
  b.add("x3", Idem::Dot, Idem::Dot, 1);
  b.add("x4", Idem::Circ, Idem::Dot);
  b.add("x5", Idem::Circ, Idem::Dot);
  b.add("x6", Idem::Circ, Idem::Dot);
  b.add("x7", Idem::Circ, Idem::Circ);
  b.add("x8", Idem::Circ, Idem::Circ);
  b.op("x1", {"1"}, "1", "x8");
  b.op("x1", {"12"}, "123", "x6");
  b.op("x1", {"123"}, "123", "x8");
  b.op("x3", {"1"}, "1", "x7");
  b.op("x3", {"12"}, "1", "x5");
  b.op("x3", {"123"}, "123", "x7");
  b.op("x5", {"3"}, "23", "x7");
  b.op("x6", {"3"}, "1_", "x8");
  b.op("x7", {"2"}, "1_", "x5");
  b.op("x7", {"23"}, "23", "x7");
  b.op("x8", {"2"}, "23", "x6");
  b.op("x8", {"23"}, "23", "x8");
  b.op("x1", {}, "3", "x2");
  b.op("x2", {}, "23", "x5");
  b.op("x4", {}, "2", "x3");
  b.op("x6", {}, "23", "x4");
  b.op("x2", {"3", "2"}, "2", "x1");
  b.op("x4", {"3", "2"}, "1_", "x6");
  b.op("x3", {"123", "2"}, "1", "x2");
  b.op("x3", {"3", "2"}, "3", "x4");
  b.op("x4", {"3", "23"}, "1_", "x8");
  b.op("x5", {"3", "2"}, "1_", "x2");
  b.op("x7", {"23", "2"}, "1_", "x2");
  b.op("x3", {"123", "23", "2"}, "12", "x1");
  b.op("x3", {"3", "2", "12"}, "123", "x5");
  b.op("x3", {"3", "23", "2"}, "3", "x6");
  b.op("x3", {"3", "23", "23"}, "3", "x8");
  b.op("x5", {"3", "23", "2"}, "2", "x1");
  b.op("x7", {"23", "23", "2"}, "2", "x1");
  b.op("x3", {"3", "2", "1", "2"}, "1", "x2");
  b.op("x3", {"3", "2", "123", "2"}, "123", "x2");
  b.op("x3", {"3", "2", "1", "23", "2"}, "12", "x1");
  b.op("x3", {"3", "2", "3", "2", "1", "2"}, "123", "x2");
  b.normalize();
  return b;
}

TypeDA genus_adder_bimodule() {
  TypeDA copy1 = identity_bimodule();
  TypeDA copy2 = identity_bimodule();
  for (DAGen& g : copy1.gens) g.id = "y" + g.id;
  for (DAGen& g : copy2.gens) g.id = "z" + g.id;
  return da_direct_sum(genus_adder_core(), da_direct_sum(copy1, copy2));
}

long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TypeDA make_standard(const std::string& name) {
  if (name == "identity") return identity_bimodule();
  if (name == "half_identity") return half_identity_bimodule();
  if (name == "az") return az_bimodule(true);
  if (name == "elliptic") return az_bimodule(false);
  if (name == "twist_alpha_plus" || name == "a+") return twist_bimodule("a+");
  if (name == "twist_alpha_minus" || name == "a-") return twist_bimodule("a-");
  if (name == "twist_beta_plus" || name == "b+") return twist_bimodule("b+");
  if (name == "twist_beta_minus" || name == "b-") return twist_bimodule("b-");
  if (name == "genus_adder") return genus_adder_bimodule();
  throw std::invalid_argument("make_standard: unknown bimodule '" + name + "'");
}

TypeD basepoint_circle() {
  TypeD c;
  c.add("p", Idem::Circ);
  c.add("q", Idem::Dot);
  c.add("r", Idem::Circ);
  c.add("s", Idem::Dot);
  c.arrow("p", "2", "q");
  c.arrow("q", "1", "r");
  c.arrow("s", "123", "r");
  c.arrow("s", "3", "p");
  c.normalize();
  return c;
}

RelationReport verify_relations() {
  RelationReport rep;
  auto record = [&](const std::string& name, bool ok, const std::string& detail) {
    rep.ok = rep.ok && ok;
    rep.lines.push_back(name + ": " + (ok ? "ok" : "FAIL (" + detail + ")"));
  };
  TypeDA id = make_standard("identity");
  TypeDA half = make_standard("half_identity");

  TypeDA hh = da_reduce(box_da_da(half, half));
  record("half_identity box half_identity = identity", da_isomorphic(hh, id),
         std::to_string(hh.gens.size()) + " generators, " + std::to_string(hh.ops.size()) +
             " operations");

  TypeDA ha = da_reduce(box_da_da(half, make_standard("az")));
  TypeDA e = make_standard("elliptic");
  record("half_identity box az = elliptic", da_isomorphic(ha, e),
         std::to_string(ha.gens.size()) + " generators, " + std::to_string(ha.ops.size()) +
             " operations");

  TypeDA tt = da_reduce(
      box_da_da(make_standard("twist_alpha_plus"), make_standard("twist_alpha_minus")));
  record("twist_alpha_plus box twist_alpha_minus = identity", da_isomorphic(tt, id),
         std::to_string(tt.gens.size()) + " generators, " + std::to_string(tt.ops.size()) +
             " operations");
  return rep;
}

std::vector<CensusRow> genus_census(int g) {
  TypeDA adder = make_standard("genus_adder");
  TypeD d = d_hor();
  for (int i = 0; i < g; ++i) d = d_reduce(box_da_d(adder, d));
  std::map<std::pair<int, int>, long long> rows;
  for (const std::vector<int>& comp : d_components(d)) {
    int dots = 0, circs = 0;
    for (int gi : comp) (d.gens[gi].idem == Idem::Dot ? dots : circs)++;
    rows[{dots, circs}]++;
  }
  std::vector<CensusRow> out;
  for (auto& [key, count] : rows) out.push_back({key.first, key.second, count});
  return out;
}

std::vector<CensusRow> expected_census(int g) {
  std::vector<CensusRow> out;
  out.push_back({1, 0, 1LL << g});
  long long flat = binom(2 * g, g) / 2 - (1LL << (g - 1));
  if (flat > 0) out.push_back({2, 0, flat});
  for (int i = 1; i <= g; ++i) out.push_back({2, 4 * i, binom(2 * g, g + i)});
  return out;
}

long long census_total_dim(const std::vector<CensusRow>& rows) {
  long long dim = 0;
  for (const CensusRow& r : rows) dim += r.count * (r.dots + r.circs);
  return dim;
}

}  // namespace icf
