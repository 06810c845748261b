#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "icf/typed.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <tuple>
#include <vector>

using namespace icf;

namespace {

std::set<std::tuple<std::string, std::string, std::string>> edge_set(const TypeD& d) {
  std::set<std::tuple<std::string, std::string, std::string>> out;
  for (const DEdge& e : d.edges)
    out.insert({d.gens[e.from].id,
                basis_is_word(e.label) ? word_digits(e.label) : std::string("1_"),
                d.gens[e.to].id});
  return out;
}

int mor_dim(const TypeD& a, const TypeD& b) {
  PairedComplex c = mor_complex(a, b);
  return complex_homology_dim(int(c.gens.size()), c.diff);
}

// The identity bimodule: one generator per idempotent, delta(x, a) = a (x) y
// for every basis word a. Rebuilt here by hand as a fixture for the box
// product; the bimodule library has its own builder.
TypeDA identity_da() {
  TypeDA b;
  b.add("u", Idem::Dot, Idem::Dot);
  b.add("v", Idem::Circ, Idem::Circ);
  auto gen_for = [&](Idem i) { return i == Idem::Dot ? "u" : "v"; };
  for (int a = 2; a < kBasisCount; ++a)
    if (basis_is_hat(a))
      b.op(gen_for(basis_left(a)), {word_digits(a)}, word_digits(a), gen_for(basis_right(a)));
  return b;
}

// Extended chain of arcs around the marked point: the one curve the
// extension criterion must reject.
TypeD marked_point_circle() {
  TypeD d;
  d.extended = true;
  d.add("A", Idem::Dot);
  d.add("B", Idem::Circ);
  d.add("C", Idem::Dot);
  d.add("D", Idem::Circ);
  d.arrow("A", "1", "D");
  d.arrow("D", "0", "C");
  d.arrow("C", "3", "B");
  d.arrow("B", "2", "A");
  return d;
}

} // namespace

TEST_CASE("builders validate and are reduced") {
  for (int k = -5; k <= 5; ++k) {
    TypeD d = d_slope_loop(k);
    ValidateResult v = d_validate(d);
    CHECK_MESSAGE(v.ok, v.error);
    CHECK(d_is_reduced(d));
    CHECK(int(d.gens.size()) == std::max(1, std::abs(k)) + (k != 0 ? 1 : 0));
  }
  CHECK(d_validate(d_ver()).ok);
  CHECK(edge_set(d_hor()) == edge_set(d_slope_loop(0)));
}

TEST_CASE("validation rejects broken structures") {
  TypeD d;
  d.add("u", Idem::Circ);
  d.edges.push_back({0, 0, R12}); // 12 needs a dot on both sides
  CHECK_FALSE(d_validate(d).ok);

  TypeD e; // square of the differential is 12, not zero
  e.add("u", Idem::Dot);
  e.add("w", Idem::Circ);
  e.add("z", Idem::Dot);
  e.arrow("u", "1", "w");
  e.arrow("w", "2", "z");
  CHECK_FALSE(d_validate(e).ok);

  TypeD f; // letter 0 outside an extended structure
  f.add("u", Idem::Circ);
  f.add("w", Idem::Dot);
  f.arrow("u", "0", "w");
  CHECK_FALSE(d_validate(f).ok);
  f.extended = true;
  CHECK_FALSE(d_validate(f).ok); // curvature term unmatched

  TypeD g = d_hor();
  g.arrow("u", "12", "u");
  g.normalize(); // double edge cancels mod 2
  CHECK(g.edges.empty());
}

TEST_CASE("cancellation") {
  TypeD d;
  d.add("p", Idem::Dot);
  d.add("q", Idem::Dot);
  d.add("r", Idem::Circ);
  d.add("s", Idem::Circ);
  d.arrow("p", "", "q");  // cancelling pair
  d.arrow("p", "1", "r"); // reroute product 2 * 1 vanishes
  d.arrow("s", "2", "q");
  d.arrow("s", "23", "r");
  REQUIRE(d_validate(d).ok);
  TypeD r = d_reduce(d);
  CHECK(d_is_reduced(r));
  CHECK(d_validate(r).ok);
  CHECK(edge_set(r) == edge_set([&] {
          TypeD want;
          want.add("r", Idem::Circ);
          want.add("s", Idem::Circ);
          want.arrow("s", "23", "r");
          return want;
        }()));

  TypeD z; // here the reroute survives: 2 * 3 = 23
  z.add("w", Idem::Circ);
  z.add("x", Idem::Dot);
  z.add("y", Idem::Dot);
  z.add("t", Idem::Circ);
  z.arrow("x", "", "y");
  z.arrow("w", "2", "y");
  z.arrow("x", "3", "t");
  REQUIRE(d_validate(z).ok);
  TypeD rz = d_reduce(z);
  CHECK(edge_set(rz) == edge_set([&] {
          TypeD want;
          want.add("w", Idem::Circ);
          want.add("t", Idem::Circ);
          want.arrow("w", "23", "t");
          return want;
        }()));
}

TEST_CASE("extension of the standard loops") {
  TypeD h = d_extend(d_hor());
  CHECK(h.extended);
  CHECK(edge_set(h) == std::set<std::tuple<std::string, std::string, std::string>>{
                           {"u", "12", "u"}, {"u", "30", "u"}});
  CHECK(d_extension_check(h).ok());

  TypeD v = d_extend(d_ver());
  CHECK(edge_set(v) == std::set<std::tuple<std::string, std::string, std::string>>{
                           {"v", "23", "v"}, {"v", "01", "v"}});
  CHECK(d_extension_check(v).ok());

  TypeD d1 = d_extend(d_slope_loop(1));
  CHECK(edge_set(d1) == std::set<std::tuple<std::string, std::string, std::string>>{
                            {"b", "123", "c1"}, {"c1", "2", "b"}, {"c1", "0", "b"},
                            {"b", "301", "c1"}});
  CHECK(d_extension_check(d1).ok());

  for (int k : {-3, -1, 2, 5}) {
    TypeD e = d_extend(d_slope_loop(k));
    CHECK(d_validate(e).ok);
    CHECK(d_extension_check(e).ok());
  }
}

TEST_CASE("extension criterion rejects the circle around the marked point") {
  TypeD c = marked_point_circle();
  CHECK_FALSE(d_validate(c).ok); // no consecutive letters compose: curvature unmatched
  ExtensionCheck chk = d_extension_check(c);
  CHECK_FALSE(chk.curved_ok);
  CHECK_FALSE(chk.psi_ok); // the four-fold composite is the identity, not zero
  CHECK_FALSE(chk.ok());
}

TEST_CASE("mod 2 signs") {
  CHECK(d_mod2_signs(d_hor()) == std::vector<int>{0});
  CHECK(d_mod2_signs(d_slope_loop(1)).size() == 2);
  CHECK(d_mod2_signs(d_slope_loop(2)).size() == 3);

  TypeD bad; // parallel arrows 1 and 123 demand opposite and equal signs
  bad.add("u", Idem::Dot);
  bad.add("w", Idem::Circ);
  bad.arrow("u", "1", "w");
  bad.arrow("u", "123", "w");
  REQUIRE(d_validate(bad).ok);
  CHECK(d_mod2_signs(bad).empty());
}

TEST_CASE("gradings and periods") {
  DGrading gh = d_grading(d_hor());
  CHECK(gh.components == 1);
  REQUIRE(gh.periods.size() == 1);
  CHECK(gh.periods[0] == Gr{-1, -2, 0});

  DGrading gv = d_grading(d_ver());
  REQUIRE(gv.periods.size() == 1);
  CHECK(gv.periods[0] == Gr{-1, 0, -2});

  DGrading g1 = d_grading(d_slope_loop(1));
  REQUIRE(g1.periods.size() == 1);
  bool fwd = g1.periods[0] == Gr{2, 2, 2};
  bool bwd = g1.periods[0] == Gr{-2, -2, -2};
  CHECK((fwd || bwd));

  TypeD two = d_hor();
  int v = two.add("v", Idem::Circ);
  two.edges.push_back({v, v, R23});
  DGrading g2 = d_grading(two, {kGrId, Gr{4, 2, 0}});
  CHECK(g2.components == 2);
  CHECK(g2.component[0] != g2.component[1]);
  CHECK(g2.gr[1] == Gr{4, 2, 0});
}

TEST_CASE("pairing dimensions match intersection counts") {
  // Lines of slopes k and l meet |k - l| times; equal slopes glue to a
  // product with two-dimensional homology; the dual side (ver) always
  // meets a loop once.
  for (int k = -3; k <= 3; ++k) {
    CHECK(mor_dim(d_ver(), d_slope_loop(k)) == 1);
    CHECK(mor_dim(d_slope_loop(k), d_ver()) == 1);
    for (int l = -3; l <= 3; ++l)
      CHECK(mor_dim(d_slope_loop(k), d_slope_loop(l)) == (k == l ? 2 : std::abs(k - l)));
  }
  CHECK(mor_dim(d_ver(), d_ver()) == 2);
  CHECK(mor_dim(d_hor(), d_slope_loop(5)) == 5);
  CHECK(mor_dim(d_slope_loop(-2), d_slope_loop(5)) == 7);
}

TEST_CASE("spin-c decomposition of lens space pairings") {
  for (int p = 1; p <= 6; ++p) {
    PairedComplex c = mor_complex(d_hor(), d_slope_loop(p));
    CHECK(c.spinc_count == p);
    std::vector<int> dims = pair_homology_by_spinc(c);
    for (int d : dims) CHECK(d == 1);
  }
  PairedComplex s = mor_complex(d_ver(), d_ver());
  CHECK(s.spinc_count == 1);
  CHECK(pair_homology_by_spinc(s) == std::vector<int>{2});
}

TEST_CASE("derived module boxed against the second side agrees with Mor") {
  std::vector<TypeD> shapes = {d_hor(), d_ver(), d_slope_loop(2), d_slope_loop(-1)};
  for (const TypeD& a : shapes)
    for (const TypeD& b : shapes) {
      TypeA m = derive_type_a(a);
      BoxedComplex bc = box_ad(m, b);
      CHECK(complex_homology_dim(int(bc.gens.size()), bc.diff) == mor_dim(a, b));
    }
}

TEST_CASE("homotopy transfer produces the solid torus tower") {
  bool truncated = false;
  TypeA a = a_reduce(derive_type_a(d_ver()), 8, &truncated);
  CHECK(truncated); // the tower is infinite
  REQUIRE(a.gens.size() == 1);
  CHECK(a.gens[0].match == Idem::Dot);
  // m_{3+i}(x, 3, 23, ..., 23, 2) for i = 0..5 at this cap
  REQUIRE(a.ops.size() == 6);
  for (const AOp& o : a.ops) {
    REQUIRE(o.inputs.size() >= 2);
    CHECK(o.inputs.front() == R3);
    CHECK(o.inputs.back() == R2);
    for (size_t i = 1; i + 1 < o.inputs.size(); ++i) CHECK(o.inputs[i] == R23);
  }

  // the slope-0 companion tower: m_{3+i}(x, 2, 12, ..., 12, 1)
  truncated = false;
  TypeA h = a_reduce(derive_type_a(d_hor()), 8, &truncated);
  CHECK(truncated);
  REQUIRE(h.gens.size() == 1);
  CHECK(h.gens[0].match == Idem::Circ);
  REQUIRE(h.ops.size() == 6);
  for (const AOp& o : h.ops) {
    CHECK(o.inputs.front() == R2);
    CHECK(o.inputs.back() == R1);
    for (size_t i = 1; i + 1 < o.inputs.size(); ++i) CHECK(o.inputs[i] == R12);
  }
}

TEST_CASE("identity bimodule acts trivially under box") {
  TypeDA id = identity_da();
  ValidateResult v = da_validate(id);
  CHECK_MESSAGE(v.ok, v.error);

  std::vector<TypeD> shapes = {d_hor(), d_ver(), d_slope_loop(2), d_slope_loop(-3)};
  for (const TypeD& n : shapes) {
    TypeD boxed = box_da_d(id, n);
    REQUIRE(boxed.gens.size() == n.gens.size());
    // generators come out named u*<id> or v*<id>; compare edge shapes
    std::set<std::tuple<std::string, std::string, std::string>> want;
    auto prefix = [&](int g) {
      return (n.gens[g].idem == Idem::Dot ? std::string("u*") : std::string("v*")) + n.gens[g].id;
    };
    for (const DEdge& e : n.edges) want.insert({prefix(e.from), word_digits(e.label), prefix(e.to)});
    CHECK(edge_set(boxed) == want);
  }

  TypeDA twice = box_da_da(id, id);
  twice.normalize();
  CHECK(da_validate(twice).ok);
  CHECK(da_isomorphic(da_reduce(twice), id));
}

TEST_CASE("bimodule validation catches a broken relation") {
  TypeDA b;
  b.add("u", Idem::Dot, Idem::Dot);
  b.add("v", Idem::Circ, Idem::Circ);
  b.op("u", {"1"}, "1", "v");
  b.op("v", {"2"}, "2", "u");
  // delta(u, 1, 2) factors as 1*2 = 12 on the output side but no op consumes 12
  CHECK_FALSE(da_validate(b).ok);
}
