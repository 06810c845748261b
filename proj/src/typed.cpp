#include "icf/typed.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

namespace icf {

int TypeD::find(const std::string& id) const {
  for (int i = 0; i < int(gens.size()); ++i)
    if (gens[i].id == id) return i;
  return -1;
}

int TypeD::add(const std::string& id, Idem idem) {
  gens.push_back({id, idem, -1});
  return int(gens.size()) - 1;
}

void TypeD::arrow(const std::string& from, const std::string& label, const std::string& to) {
  int f = find(from), t = find(to);
  assert(f >= 0 && t >= 0);
  int lab;
  if (label.empty() || label == "1_") {
    lab = gens[f].idem == Idem::Dot ? kIotaDot : kIotaCirc;
  } else {
    lab = parse_word(label);
  }
  assert(lab >= 0);
  edges.push_back({f, t, lab});
}

void TypeD::normalize() {
  auto key = [](const DEdge& e) { return std::tuple(e.from, e.to, e.label); };
  std::sort(edges.begin(), edges.end(),
            [&](const DEdge& a, const DEdge& b) { return key(a) < key(b); });
  std::vector<DEdge> out;
  for (size_t i = 0; i < edges.size();) {
    size_t j = i;
    while (j < edges.size() && key(edges[j]) == key(edges[i])) ++j;
    if ((j - i) % 2) out.push_back(edges[i]);
    i = j;
  }
  edges = std::move(out);
}

TypeD d_hor() {
  TypeD d;
  d.add("u", Idem::Dot);
  d.arrow("u", "12", "u");
  return d;
}

TypeD d_ver() {
  TypeD d;
  d.add("v", Idem::Circ);
  d.arrow("v", "23", "v");
  return d;
}

TypeD d_slope_loop(int k) {
  if (k == 0) return d_hor();
  TypeD d;
  d.add("b", Idem::Dot);
  int m = std::abs(k);
  for (int i = 1; i <= m; ++i) d.add("c" + std::to_string(i), Idem::Circ);
  if (k > 0) {
    d.arrow("b", "123", "c1");
    for (int i = 1; i < m; ++i)
      d.arrow("c" + std::to_string(i), "23", "c" + std::to_string(i + 1));
    d.arrow("c" + std::to_string(m), "2", "b");
  } else {
    d.arrow("b", "1", "c1");
    for (int i = 1; i < m; ++i)
      d.arrow("c" + std::to_string(i + 1), "23", "c" + std::to_string(i));
    d.arrow("b", "3", "c" + std::to_string(m));
  }
  return d;
}

namespace {

// Parity-accumulating map used by the structure-equation checks.
struct TermSet {
  std::set<std::tuple<int, int, int>> s; // (from, to, label)
  void toggle(int f, int t, int l) {
    auto k = std::tuple(f, t, l);
    auto it = s.find(k);
    if (it == s.end())
      s.insert(k);
    else
      s.erase(it);
  }
};

std::vector<int> curvature_words(Idem i) {
  std::vector<int> out;
  for (int f = 0; f < 4; ++f) {
    int w = word_index(f, 4);
    if (basis_left(w) == i) out.push_back(w);
  }
  return out;
}

TermSet d_square(const TypeD& d) {
  TermSet acc;
  std::vector<std::vector<int>> out_edges(d.gens.size());
  for (int e = 0; e < int(d.edges.size()); ++e) out_edges[d.edges[e].from].push_back(e);
  for (const DEdge& e1 : d.edges)
    for (int e2i : out_edges[e1.to]) {
      const DEdge& e2 = d.edges[e2i];
      int p = mul_basis(e1.label, e2.label);
      if (p >= 0) acc.toggle(e1.from, e2.to, p);
    }
  return acc;
}

} // namespace

ValidateResult d_validate(const TypeD& d) {
  for (const DEdge& e : d.edges) {
    if (e.from < 0 || e.from >= int(d.gens.size()) || e.to < 0 || e.to >= int(d.gens.size()))
      return {false, "edge endpoint out of range"};
    if (!d.extended && !basis_is_hat(e.label))
      return {false, "letter 0 in a non-extended structure"};
    if (basis_left(e.label) != d.gens[e.from].idem)
      return {false, "left idempotent mismatch at " + d.gens[e.from].id};
    if (basis_right(e.label) != d.gens[e.to].idem)
      return {false, "right idempotent mismatch at " + d.gens[e.to].id};
  }
  TermSet acc = d_square(d);
  if (d.extended) {
    for (int x = 0; x < int(d.gens.size()); ++x)
      for (int w : curvature_words(d.gens[x].idem)) acc.toggle(x, x, w);
  }
  if (!acc.s.empty()) {
    auto [f, t, l] = *acc.s.begin();
    return {false, "structure equation fails: " + d.gens[f].id + " -> " + d.gens[t].id +
                       " carries " + basis_name(l)};
  }
  return {};
}

bool d_is_reduced(const TypeD& d) {
  for (const DEdge& e : d.edges)
    if (!basis_is_word(e.label)) return false;
  return true;
}

bool d_isomorphic(const TypeD& a, const TypeD& b) {
  if (a.gens.size() != b.gens.size() || a.edges.size() != b.edges.size()) return false;
  int n = int(a.gens.size());
  auto sig = [](const TypeD& m, int g) {
    std::vector<int> in, out;
    for (const DEdge& e : m.edges) {
      if (e.from == g) out.push_back(e.label);
      if (e.to == g) in.push_back(e.label);
    }
    std::sort(in.begin(), in.end());
    std::sort(out.begin(), out.end());
    return std::tuple(m.gens[g].idem, in, out);
  };
  std::vector<int> perm(n, -1), used(n, 0);
  auto edges_match = [&]() {
    std::set<std::tuple<int, int, int>> sa, sb;
    for (const DEdge& e : a.edges) sa.insert({perm[e.from], perm[e.to], e.label});
    for (const DEdge& e : b.edges) sb.insert({e.from, e.to, e.label});
    return sa == sb;
  };
  auto rec = [&](auto&& self, int g) -> bool {
    if (g == n) return edges_match();
    for (int h = 0; h < n; ++h) {
      if (used[h] || sig(a, g) != sig(b, h)) continue;
      perm[g] = h;
      used[h] = 1;
      if (self(self, g + 1)) return true;
      used[h] = 0;
    }
    return false;
  };
  return rec(rec, 0);
}

std::vector<std::vector<int>> d_components(const TypeD& d) {
  int n = int(d.gens.size());
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  auto root = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const DEdge& e : d.edges) parent[root(e.from)] = root(e.to);
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < n; ++i) groups[root(i)].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto& [r, g] : groups) out.push_back(std::move(g));
  std::sort(out.begin(), out.end());
  return out;
}

TypeD d_reduce(TypeD d) {
  d.normalize();
  for (;;) {
    int best = -1;
    for (int e = 0; e < int(d.edges.size()); ++e) {
      if (basis_is_word(d.edges[e].label)) continue;
      if (best < 0 ||
          std::pair(d.gens[d.edges[e].from].id, d.gens[d.edges[e].to].id) <
              std::pair(d.gens[d.edges[best].from].id, d.gens[d.edges[best].to].id))
        best = e;
    }
    if (best < 0) return d;
    int x = d.edges[best].from, y = d.edges[best].to;
    assert(x != y && "identity self-loop");

    // Invert the full x -> y entry: with parallel arrows carrying L, the
    // entry is 1 + L and its inverse is the geometric series, which is
    // finite because the algebra is nilpotent.
    Alg loops;
    for (int e = 0; e < int(d.edges.size()); ++e)
      if (e != best && d.edges[e].from == x && d.edges[e].to == y)
        loops += Alg::unit(d.edges[e].label);
    Alg conn = Alg::iota(d.gens[x].idem), pw = conn;
    for (;;) {
      pw = mul(pw, loops);
      if (pw.is_zero()) break;
      conn += pw;
    }

    TypeD next;
    next.extended = d.extended;
    std::vector<int> remap(d.gens.size(), -1);
    for (int g = 0; g < int(d.gens.size()); ++g)
      if (g != x && g != y) remap[g] = next.add(d.gens[g].id, d.gens[g].idem);
    std::vector<std::pair<int, int>> ins, outs; // (gen, label)
    for (int e = 0; e < int(d.edges.size()); ++e) {
      if (e == best) continue;
      const DEdge& ed = d.edges[e];
      bool touches_x = ed.from == x || ed.to == x;
      bool touches_y = ed.from == y || ed.to == y;
      if (ed.to == y && ed.from != x) ins.push_back({ed.from, ed.label});
      if (ed.from == x && ed.to != y) outs.push_back({ed.to, ed.label});
      if (!touches_x && !touches_y) next.edges.push_back({remap[ed.from], remap[ed.to], ed.label});
    }
    for (auto [w, b] : ins)
      for (auto [z, a] : outs) {
        Alg p = mul(mul(Alg::unit(b), conn), Alg::unit(a));
        for (int i = 0; i < kBasisCount; ++i)
          if (p.has(i)) next.edges.push_back({remap[w], remap[z], i});
      }
    next.normalize();
    d = std::move(next);
  }
}

TypeD d_extend(const TypeD& d) {
  ValidateResult v = d_validate(d);
  if (!v.ok) throw std::runtime_error("extend: invalid input: " + v.error);
  int n = int(d.gens.size());

  // Unknowns: one per (from, word-with-0, to) with matching idempotents.
  struct Var { int from, w, to; };
  std::vector<Var> vars;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int w = 2; w < kBasisCount; ++w)
        if (!basis_is_hat(w) && basis_left(w) == d.gens[x].idem &&
            basis_right(w) == d.gens[y].idem)
          vars.push_back({x, w, y});

  std::map<std::tuple<int, int, int>, int> eq_index; // (from, to, word) -> row
  std::vector<std::vector<int>> rows;                // columns per row
  std::vector<uint8_t> rhs;
  auto eq_row = [&](int f, int t, int w) {
    auto k = std::tuple(f, t, w);
    auto it = eq_index.find(k);
    if (it != eq_index.end()) return it->second;
    int r = int(rows.size());
    eq_index[k] = r;
    rows.push_back({});
    rhs.push_back(0);
    return r;
  };

  for (int vi = 0; vi < int(vars.size()); ++vi) {
    const Var& vv = vars[vi];
    for (const DEdge& e : d.edges) {
      if (e.to == vv.from) { // hat edge then extension arrow
        int p = mul_basis(e.label, vv.w);
        if (p >= 0) rows[eq_row(e.from, vv.to, p)].push_back(vi);
      }
      if (vv.to == e.from) { // extension arrow then hat edge
        int p = mul_basis(vv.w, e.label);
        if (p >= 0) rows[eq_row(vv.from, e.to, p)].push_back(vi);
      }
    }
  }
  for (int x = 0; x < n; ++x)
    for (int w : curvature_words(d.gens[x].idem)) {
      int r = eq_row(x, x, w);
      rhs[r] ^= 1;
    }

  F2Mat a(int(rows.size()), int(vars.size()));
  for (int r = 0; r < int(rows.size()); ++r)
    for (int c : rows[r]) a.flip(r, c);
  std::vector<uint8_t> x;
  if (!f2_solve(a, rhs, x)) throw std::runtime_error("extend: no extension exists");

  TypeD out = d;
  out.extended = true;
  for (int vi = 0; vi < int(vars.size()); ++vi)
    if (x[vi]) out.edges.push_back({vars[vi].from, vars[vi].to, vars[vi].w});
  out.normalize();
  ValidateResult vr = d_validate(out);
  assert(vr.ok);
  return out;
}

ExtensionCheck d_extension_check(const TypeD& d) {
  ExtensionCheck out;
  if (!d.extended) return out;
  out.curved_ok = d_validate(d).ok;

  int n = int(d.gens.size());
  F2Mat m[4] = {F2Mat(n, n), F2Mat(n, n), F2Mat(n, n), F2Mat(n, n)};
  for (const DEdge& e : d.edges)
    if (basis_is_word(e.label) && basis_len(e.label) == 1)
      m[basis_first(e.label)].flip(e.to, e.from);
  F2Mat psi(n, n);
  for (int i = 0; i < 4; ++i)
    psi = psi + m[i % 4] * m[(i + 1) % 4] * m[(i + 2) % 4] * m[(i + 3) % 4];
  out.psi_ok = psi.is_zero();
  return out;
}

std::vector<int> d_mod2_signs(const TypeD& d) {
  int n = int(d.gens.size());
  std::vector<int> sign(n, -1);
  std::vector<std::vector<std::pair<int, int>>> adj(n); // (other, flip)
  for (const DEdge& e : d.edges) {
    int flip = (e.label == R1 || e.label == R3 || !basis_is_word(e.label)) ? 1 : 0;
    adj[e.from].push_back({e.to, flip});
    adj[e.to].push_back({e.from, flip});
  }
  for (int s = 0; s < n; ++s) {
    if (sign[s] >= 0) continue;
    sign[s] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      int g = q.front();
      q.pop();
      for (auto [h, flip] : adj[g]) {
        int want = sign[g] ^ flip;
        if (sign[h] < 0) {
          sign[h] = want;
          q.push(h);
        } else if (sign[h] != want) {
          return {};
        }
      }
    }
  }
  return sign;
}

DGrading d_grading(const TypeD& d, const std::vector<Gr>& seeds) {
  int n = int(d.gens.size());
  DGrading out;
  out.gr.assign(n, kGrId);
  out.component.assign(n, -1);
  struct Half {
    int to;
    int label;
    bool fwd;
    int edge;
  };
  std::vector<std::vector<Half>> adj(n);
  for (int e = 0; e < int(d.edges.size()); ++e) {
    adj[d.edges[e].from].push_back({d.edges[e].to, d.edges[e].label, true, e});
    adj[d.edges[e].to].push_back({d.edges[e].from, d.edges[e].label, false, e});
  }
  std::vector<char> used(d.edges.size(), 0); // each edge: tree edge or one period
  for (int s = 0; s < n; ++s) {
    if (out.component[s] >= 0) continue;
    int comp = out.components++;
    out.component[s] = comp;
    out.gr[s] = comp < int(seeds.size()) ? seeds[comp] : kGrId;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      int g = q.front();
      q.pop();
      for (const Half& h : adj[g]) {
        if (used[h.edge]) continue;
        used[h.edge] = 1;
        // edge x --a--> y gives gr(y) = gr(a)^-1 lambda^-1 gr(x)
        Gr val = h.fwd ? gr_mul(gr_inv(gr_basis(h.label)), gr_mul(gr_inv(kLambda), out.gr[g]))
                       : gr_mul(kLambda, gr_mul(gr_basis(h.label), out.gr[g]));
        if (out.component[h.to] < 0) {
          out.component[h.to] = comp;
          out.gr[h.to] = val;
          q.push(h.to);
        } else {
          Gr p = gr_mul(val, gr_inv(out.gr[h.to]));
          if (!(p == kGrId)) out.periods.push_back(p);
        }
      }
    }
  }
  return out;
}

// --- DA bimodules ----------------------------------------------------------

int TypeDA::find(const std::string& id) const {
  for (int i = 0; i < int(gens.size()); ++i)
    if (gens[i].id == id) return i;
  return -1;
}

int TypeDA::add(const std::string& id, Idem d_idem, Idem a_idem, int z2) {
  gens.push_back({id, d_idem, a_idem, z2});
  return int(gens.size()) - 1;
}

void TypeDA::op(const std::string& from, const std::vector<std::string>& inputs,
                const std::string& coeff, const std::string& to) {
  int f = find(from), t = find(to);
  assert(f >= 0 && t >= 0);
  DAOp o;
  o.from = f;
  o.to = t;
  for (const std::string& s : inputs) {
    int w = parse_word(s);
    assert(w >= 0);
    o.inputs.push_back(w);
  }
  if (coeff.empty() || coeff == "1_") {
    o.coeff = gens[f].d_idem == Idem::Dot ? kIotaDot : kIotaCirc;
  } else {
    o.coeff = parse_word(coeff);
    assert(o.coeff >= 0);
  }
  ops.push_back(o);
}

void TypeDA::normalize() {
  auto key = [](const DAOp& o) { return std::tuple(o.from, o.inputs, o.coeff, o.to); };
  std::sort(ops.begin(), ops.end(),
            [&](const DAOp& a, const DAOp& b) { return key(a) < key(b); });
  std::vector<DAOp> out;
  for (size_t i = 0; i < ops.size();) {
    size_t j = i;
    while (j < ops.size() && key(ops[j]) == key(ops[i])) ++j;
    if ((j - i) % 2) out.push_back(ops[i]);
    i = j;
  }
  ops = std::move(out);
}

ValidateResult da_validate(const TypeDA& b) {
  for (const DAOp& o : b.ops) {
    if (basis_left(o.coeff) != b.gens[o.from].d_idem ||
        basis_right(o.coeff) != b.gens[o.to].d_idem)
      return {false, "output coefficient idempotent mismatch at " + b.gens[o.from].id};
    Idem cur = b.gens[o.from].a_idem;
    for (int a : o.inputs) {
      if (!basis_is_word(a)) return {false, "idempotent input"};
      if (basis_left(a) != cur) return {false, "input chain breaks at " + b.gens[o.from].id};
      cur = basis_right(a);
    }
    if (cur != b.gens[o.to].a_idem)
      return {false, "input chain does not land on the target idempotent"};
  }

  // A-infinity relation: compositions plus single-input factorizations.
  std::map<std::tuple<int, std::vector<int>, int, int>, int> acc;
  auto toggle = [&](int from, const std::vector<int>& seq, int coeff, int to) {
    acc[std::tuple(from, seq, coeff, to)] ^= 1;
  };
  for (const DAOp& o1 : b.ops)
    for (const DAOp& o2 : b.ops) {
      if (o1.to != o2.from) continue;
      int c = mul_basis(o1.coeff, o2.coeff);
      if (c < 0) continue;
      std::vector<int> seq = o1.inputs;
      seq.insert(seq.end(), o2.inputs.begin(), o2.inputs.end());
      toggle(o1.from, seq, c, o2.to);
    }
  for (const DAOp& o : b.ops)
    for (size_t i = 0; i < o.inputs.size(); ++i) {
      int w = o.inputs[i];
      int len = basis_len(w), f = basis_first(w);
      for (int cut = 1; cut < len; ++cut) {
        int u = word_index(f, cut), v = word_index((f + cut) % 4, len - cut);
        if (u < 0 || v < 0) continue;
        std::vector<int> seq = o.inputs;
        seq[i] = u;
        seq.insert(seq.begin() + i + 1, v);
        toggle(o.from, seq, o.coeff, o.to);
      }
    }
  for (auto& [k, parity] : acc)
    if (parity) {
      return {false, "bimodule relation fails at " + b.gens[std::get<0>(k)].id};
    }
  return {};
}

TypeDA da_reduce(TypeDA b) {
  b.normalize();
  for (;;) {
    int best = -1;
    for (int i = 0; i < int(b.ops.size()); ++i) {
      const DAOp& o = b.ops[i];
      if (!o.inputs.empty() || basis_is_word(o.coeff)) continue;
      if (best < 0 || std::pair(b.gens[o.from].id, b.gens[o.to].id) <
                          std::pair(b.gens[b.ops[best].from].id, b.gens[b.ops[best].to].id))
        best = i;
    }
    if (best < 0) return b;
    int x = b.ops[best].from, y = b.ops[best].to;
    assert(x != y);
    TypeDA next;
    std::vector<int> remap(b.gens.size(), -1);
    for (int g = 0; g < int(b.gens.size()); ++g)
      if (g != x && g != y) {
        remap[g] = next.add(b.gens[g].id, b.gens[g].d_idem, b.gens[g].a_idem, b.gens[g].z2);
      }
    std::vector<const DAOp*> ins, outs, loops;
    for (int i = 0; i < int(b.ops.size()); ++i) {
      if (i == best) continue;
      const DAOp& o = b.ops[i];
      bool tx = o.from == x || o.to == x, ty = o.from == y || o.to == y;
      if (o.to == y && o.from != x) ins.push_back(&o);
      if (o.from == x && o.to != y) outs.push_back(&o);
      if (o.from == x && o.to == y) loops.push_back(&o);
      if (!tx && !ty) {
        DAOp c = o;
        c.from = remap[o.from];
        c.to = remap[o.to];
        next.ops.push_back(c);
      }
    }
    // Connector series: inverse of the full x -> y entry. Every parallel op
    // either lengthens the input list or multiplies by a nilpotent algebra
    // element, so the series terminates.
    std::vector<std::pair<std::vector<int>, int>> conn = {{{}, -1}}; // coeff -1: neutral
    {
      std::vector<std::pair<std::vector<int>, int>> layer = conn;
      while (!layer.empty()) {
        std::vector<std::pair<std::vector<int>, int>> grown;
        for (auto& [seq, c] : layer)
          for (const DAOp* lp : loops) {
            if (lp->inputs.empty() && !basis_is_word(lp->coeff)) continue; // duplicate removed by normalize
            int cc = c < 0 ? lp->coeff : mul_basis(c, lp->coeff);
            if (cc < 0 && c >= 0) continue;
            std::vector<int> s = seq;
            s.insert(s.end(), lp->inputs.begin(), lp->inputs.end());
            if (s.size() > 64) throw std::runtime_error("da_reduce: connector series does not terminate");
            grown.push_back({std::move(s), cc});
          }
        conn.insert(conn.end(), grown.begin(), grown.end());
        layer = std::move(grown);
      }
    }
    for (const DAOp* i1 : ins)
      for (auto& [cseq, cc] : conn)
        for (const DAOp* o2 : outs) {
          int c = cc < 0 ? i1->coeff : mul_basis(i1->coeff, cc);
          if (c < 0) continue;
          c = mul_basis(c, o2->coeff);
          if (c < 0) continue;
          DAOp nop;
          nop.from = remap[i1->from];
          nop.to = remap[o2->to];
          nop.coeff = c;
          nop.inputs = i1->inputs;
          nop.inputs.insert(nop.inputs.end(), cseq.begin(), cseq.end());
          nop.inputs.insert(nop.inputs.end(), o2->inputs.begin(), o2->inputs.end());
          next.ops.push_back(nop);
        }
    next.normalize();
    b = std::move(next);
  }
}

TypeD box_da_d(const TypeDA& b, const TypeD& n) {
  for (const DEdge& e : n.edges) assert(basis_is_word(e.label) && "box needs a reduced type D");
  TypeD out;
  std::vector<std::vector<int>> gen_of(b.gens.size(), std::vector<int>(n.gens.size(), -1));
  for (int p = 0; p < int(b.gens.size()); ++p)
    for (int y = 0; y < int(n.gens.size()); ++y)
      if (b.gens[p].a_idem == n.gens[y].idem)
        gen_of[p][y] = out.add(b.gens[p].id + "*" + n.gens[y].id, b.gens[p].d_idem);

  std::vector<std::vector<const DEdge*>> out_edges(n.gens.size());
  for (const DEdge& e : n.edges) out_edges[e.from].push_back(&e);

  for (const DAOp& o : b.ops) {
    // walk chains of edges in n spelling o.inputs
    for (int y0 = 0; y0 < int(n.gens.size()); ++y0) {
      if (gen_of[o.from][y0] < 0) continue;
      auto rec = [&](auto&& self, int y, size_t k) -> void {
        if (k == o.inputs.size()) {
          assert(gen_of[o.to][y] >= 0);
          out.edges.push_back({gen_of[o.from][y0], gen_of[o.to][y], o.coeff});
          return;
        }
        for (const DEdge* e : out_edges[y])
          if (e->label == o.inputs[k]) self(self, e->to, k + 1);
      };
      rec(rec, y0, 0);
    }
  }
  out.normalize();
  // drop unreachable bookkeeping: none needed, all gens kept
  return out;
}

TypeDA box_da_da(const TypeDA& outer, const TypeDA& inner) {
  TypeDA out;
  std::vector<std::vector<int>> gen_of(outer.gens.size(), std::vector<int>(inner.gens.size(), -1));
  for (int p = 0; p < int(outer.gens.size()); ++p)
    for (int q = 0; q < int(inner.gens.size()); ++q)
      if (outer.gens[p].a_idem == inner.gens[q].d_idem)
        gen_of[p][q] = out.add(outer.gens[p].id + "*" + inner.gens[q].id, outer.gens[p].d_idem,
                               inner.gens[q].a_idem,
                               (outer.gens[p].z2 + inner.gens[q].z2) % 2);

  std::vector<std::vector<const DAOp*>> from_q(inner.gens.size());
  for (const DAOp& o : inner.ops) from_q[o.from].push_back(&o);

  // inner internal differentials pass through any outer generator
  for (const DAOp& o : inner.ops)
    if (!basis_is_word(o.coeff))
      for (int p = 0; p < int(outer.gens.size()); ++p)
        if (gen_of[p][o.from] >= 0) {
          DAOp nop;
          nop.from = gen_of[p][o.from];
          nop.to = gen_of[p][o.to];
          nop.inputs = o.inputs;
          nop.coeff = outer.gens[p].d_idem == Idem::Dot ? kIotaDot : kIotaCirc;
          out.ops.push_back(nop);
        }

  for (const DAOp& o : outer.ops) {
    for (int q0 = 0; q0 < int(inner.gens.size()); ++q0) {
      if (gen_of[o.from][q0] < 0) continue;
      // chains of inner ops whose D-coefficients spell o.inputs
      auto rec = [&](auto&& self, int q, size_t k, std::vector<int> acc_inputs) -> void {
        if (k == o.inputs.size()) {
          if (gen_of[o.to][q] < 0) return;
          DAOp nop;
          nop.from = gen_of[o.from][q0];
          nop.to = gen_of[o.to][q];
          nop.inputs = std::move(acc_inputs);
          nop.coeff = o.coeff;
          out.ops.push_back(nop);
          return;
        }
        for (const DAOp* io : from_q[q]) {
          if (io->coeff != o.inputs[k]) continue;
          std::vector<int> next_inputs = acc_inputs;
          next_inputs.insert(next_inputs.end(), io->inputs.begin(), io->inputs.end());
          self(self, io->to, k + 1, std::move(next_inputs));
        }
      };
      rec(rec, q0, 0, {});
    }
  }
  out.normalize();
  return out;
}

bool da_isomorphic(const TypeDA& a, const TypeDA& b) {
  if (a.gens.size() != b.gens.size() || a.ops.size() != b.ops.size()) return false;
  int n = int(a.gens.size());
  // signature prune
  auto sig = [](const TypeDA& m, int g) {
    int in = 0, outd = 0;
    for (const DAOp& o : m.ops) {
      if (o.from == g) ++outd;
      if (o.to == g) ++in;
    }
    return std::tuple(m.gens[g].d_idem, m.gens[g].a_idem, in, outd);
  };
  std::vector<int> perm(n, -1), used(n, 0);
  auto ops_match = [&]() {
    std::set<std::tuple<int, std::vector<int>, int, int>> sa, sb;
    for (const DAOp& o : a.ops) sa.insert({perm[o.from], o.inputs, o.coeff, perm[o.to]});
    for (const DAOp& o : b.ops) sb.insert({o.from, o.inputs, o.coeff, o.to});
    return sa == sb;
  };
  auto rec = [&](auto&& self, int g) -> bool {
    if (g == n) return ops_match();
    for (int h = 0; h < n; ++h) {
      if (used[h] || sig(a, g) != sig(b, h)) continue;
      perm[g] = h;
      used[h] = 1;
      if (self(self, g + 1)) return true;
      used[h] = 0;
    }
    return false;
  };
  return rec(rec, 0);
}

TypeDA da_direct_sum(const TypeDA& a, const TypeDA& b) {
  TypeDA out = a;
  int off = int(a.gens.size());
  for (const DAGen& g : b.gens) {
    assert(out.find(g.id) < 0 && "direct sum: generator id clash");
    out.gens.push_back(g);
  }
  for (const DAOp& o : b.ops) {
    DAOp n = o;
    n.from += off;
    n.to += off;
    out.ops.push_back(n);
  }
  out.normalize();
  return out;
}

// --- A modules and pairing --------------------------------------------------

void TypeA::normalize() {
  auto key = [](const AOp& o) { return std::tuple(o.from, o.inputs, o.to); };
  std::sort(ops.begin(), ops.end(),
            [&](const AOp& a, const AOp& b) { return key(a) < key(b); });
  std::vector<AOp> out;
  for (size_t i = 0; i < ops.size();) {
    size_t j = i;
    while (j < ops.size() && key(ops[j]) == key(ops[i])) ++j;
    if ((j - i) % 2) out.push_back(ops[i]);
    i = j;
  }
  ops = std::move(out);
}

TypeA derive_type_a(const TypeD& n) {
  TypeA out;
  std::map<std::pair<int, int>, int> idx; // (gen, alg) -> module gen
  for (int x = 0; x < int(n.gens.size()); ++x)
    for (int a = 0; a < kBasisCount; ++a)
      if (basis_is_hat(a) && basis_left(a) == n.gens[x].idem) {
        idx[{x, a}] = int(out.gens.size());
        out.gens.push_back({n.gens[x].id + "|" + basis_name(a), basis_right(a)});
      }
  for (auto& [key, g] : idx) {
    auto [x, a] = key;
    for (const DEdge& e : n.edges)
      if (e.to == x) {
        int ca = mul_basis(e.label, a);
        if (ca >= 0) out.ops.push_back({g, {}, idx.at({e.from, ca})});
      }
    for (int b = 2; b < kBasisCount; ++b)
      if (basis_is_hat(b)) {
        int ab = mul_basis(a, b);
        if (ab >= 0) out.ops.push_back({g, {b}, idx.at({x, ab})});
      }
  }
  out.normalize();
  return out;
}

TypeA a_reduce(TypeA a, int max_arity, bool* truncated) {
  if (truncated) *truncated = false;
  a.normalize();
  for (;;) {
    int best = -1;
    for (int i = 0; i < int(a.ops.size()); ++i)
      if (a.ops[i].inputs.empty()) {
        if (best < 0 || std::pair(a.gens[a.ops[i].from].id, a.gens[a.ops[i].to].id) <
                            std::pair(a.gens[a.ops[best].from].id, a.gens[a.ops[best].to].id))
          best = i;
      }
    if (best < 0) return a;
    int x = a.ops[best].from, y = a.ops[best].to;
    assert(x != y);
    TypeA next;
    std::vector<int> remap(a.gens.size(), -1);
    for (int g = 0; g < int(a.gens.size()); ++g)
      if (g != x && g != y) {
        remap[g] = int(next.gens.size());
        next.gens.push_back(a.gens[g]);
      }
    std::vector<const AOp*> ins, outs, loops;
    for (int i = 0; i < int(a.ops.size()); ++i) {
      if (i == best) continue;
      const AOp& o = a.ops[i];
      bool tx = o.from == x || o.to == x, ty = o.from == y || o.to == y;
      if (o.to == y && o.from != x) ins.push_back(&o);
      if (o.from == x && o.to != y) outs.push_back(&o);
      if (o.from == x && o.to == y) {
        assert(!o.inputs.empty() && "duplicate of the cancelled op survived normalize");
        loops.push_back(&o);
      }
      if (!tx && !ty) {
        AOp c = o;
        c.from = remap[o.from];
        c.to = remap[o.to];
        next.ops.push_back(c);
      }
    }
    // Inverse of the x -> y entry as a geometric series over parallel ops.
    // Loops make the reduced module genuinely infinite (e.g. a solid torus);
    // sequences longer than max_arity are dropped and reported.
    std::vector<std::vector<int>> conn = {{}};
    {
      std::vector<std::vector<int>> layer = conn;
      while (!layer.empty()) {
        std::vector<std::vector<int>> grown;
        for (auto& seq : layer)
          for (const AOp* lp : loops) {
            std::vector<int> s = seq;
            s.insert(s.end(), lp->inputs.begin(), lp->inputs.end());
            if (int(s.size()) + 1 > max_arity) {
              if (truncated) *truncated = true;
              continue;
            }
            grown.push_back(std::move(s));
          }
        conn.insert(conn.end(), grown.begin(), grown.end());
        layer = std::move(grown);
      }
    }
    for (const AOp* i1 : ins)
      for (auto& cseq : conn)
        for (const AOp* o2 : outs) {
          AOp nop;
          nop.from = remap[i1->from];
          nop.to = remap[o2->to];
          nop.inputs = i1->inputs;
          nop.inputs.insert(nop.inputs.end(), cseq.begin(), cseq.end());
          nop.inputs.insert(nop.inputs.end(), o2->inputs.begin(), o2->inputs.end());
          if (int(nop.inputs.size()) + 1 > max_arity) {
            if (truncated) *truncated = true;
            continue;
          }
          next.ops.push_back(nop);
        }
    next.normalize();
    a = std::move(next);
  }
}

namespace {

// Canonical class of a vector modulo the lattice spanned by gens (2d, doubled
// coordinates). Hermite-style reduction.
struct Lattice {
  // basis vectors (possibly zero): (a, b) with a = (a1, 0) upper triangular
  long long d1 = 0, s = 0, d2 = 0; // columns (d1, 0), (s, d2)
  void build(std::vector<std::pair<long long, long long>> v) {
    // first make all second components zero except one gcd entry
    d1 = s = d2 = 0;
    for (auto& [x, y] : v) {
      // fold (x, y) into the triangular form via integer column ops
      long long a = x, b = y;
      while (b != 0) {
        if (d2 == 0) {
          d2 = std::abs(b);
          s = (b < 0) ? -a : a;
          b = 0;
          break;
        }
        long long q = b / d2;
        b -= q * d2;
        a -= q * s;
        if (b != 0) {
          std::swap(b, d2);
          std::swap(a, s);
        }
      }
      if (a != 0) {
        if (d1 == 0)
          d1 = std::abs(a);
        else {
          long long g = std::abs(a), h = d1;
          while (h) {
            long long t = g % h;
            g = h;
            h = t;
          }
          d1 = g;
        }
      }
    }
    if (d1) s = ((s % d1) + d1) % d1;
  }
  std::pair<long long, long long> reduce(long long x, long long y) const {
    if (d2) {
      long long q = (y >= 0 ? y / d2 : -((-y + d2 - 1) / d2));
      y -= q * d2;
      x -= q * s;
    }
    if (d1) x = ((x % d1) + d1) % d1;
    return {x, y};
  }
};

} // namespace

PairedComplex mor_complex(const TypeD& n0, const TypeD& n1, const std::vector<Gr>& seeds0,
                          const std::vector<Gr>& seeds1) {
  PairedComplex out;
  DGrading g0 = d_grading(n0, seeds0), g1 = d_grading(n1, seeds1);
  Lattice lat;
  {
    std::vector<std::pair<long long, long long>> vs;
    for (const Gr& p : g0.periods) vs.push_back({p.i2, p.j2});
    for (const Gr& p : g1.periods) vs.push_back({p.i2, p.j2});
    lat.build(vs);
  }

  std::map<std::tuple<int, int, int>, int> idx;
  std::map<std::pair<long long, long long>, int> classes;
  for (int x = 0; x < int(n0.gens.size()); ++x)
    for (int y = 0; y < int(n1.gens.size()); ++y)
      for (int a = 0; a < kBasisCount; ++a)
        if (basis_is_hat(a) && basis_left(a) == n0.gens[x].idem &&
            basis_right(a) == n1.gens[y].idem) {
          idx[{x, a, y}] = int(out.gens.size());
          long long vi = -g0.gr[x].i2 + gr_basis(a).i2 + g1.gr[y].i2;
          long long vj = -g0.gr[x].j2 + gr_basis(a).j2 + g1.gr[y].j2;
          auto cls = lat.reduce(vi, vj);
          auto it = classes.find(cls);
          int c;
          if (it == classes.end()) {
            c = int(classes.size());
            classes[cls] = c;
          } else
            c = it->second;
          out.gens.push_back({x, a, y, c});
        }
  out.spinc_count = int(classes.size());

  std::set<std::pair<int, int>> diff;
  auto toggle = [&](int f, int t) {
    auto k = std::pair(f, t);
    if (!diff.insert(k).second) diff.erase(k);
  };
  for (auto& [key, g] : idx) {
    auto [x, a, y] = key;
    for (const DEdge& e : n1.edges)
      if (e.from == y) {
        int ab = mul_basis(a, e.label);
        if (ab >= 0) toggle(g, idx.at({x, ab, e.to}));
      }
    for (const DEdge& e : n0.edges)
      if (e.to == x) {
        int ca = mul_basis(e.label, a);
        if (ca >= 0) toggle(g, idx.at({e.from, ca, y}));
      }
  }
  out.diff.assign(diff.begin(), diff.end());

#ifndef NDEBUG
  {
    // d^2 = 0
    std::set<std::pair<int, int>> sq;
    std::vector<std::vector<int>> adj(out.gens.size());
    for (auto [f, t] : out.diff) adj[f].push_back(t);
    for (auto [f, t] : out.diff)
      for (int u : adj[t]) {
        auto k = std::pair(f, u);
        if (!sq.insert(k).second) sq.erase(k);
      }
    assert(sq.empty());
    for (auto [f, t] : out.diff) assert(out.gens[f].spinc == out.gens[t].spinc);
  }
#endif
  return out;
}

BoxedComplex box_ad(const TypeA& a, const TypeD& n) {
  for (const DEdge& e : n.edges) assert(basis_is_word(e.label));
  BoxedComplex out;
  std::map<std::pair<int, int>, int> idx;
  for (int g = 0; g < int(a.gens.size()); ++g)
    for (int y = 0; y < int(n.gens.size()); ++y)
      if (a.gens[g].match == n.gens[y].idem) {
        idx[{g, y}] = int(out.gens.size());
        out.gens.push_back({g, y});
      }
  std::vector<std::vector<const DEdge*>> out_edges(n.gens.size());
  for (const DEdge& e : n.edges) out_edges[e.from].push_back(&e);

  std::set<std::pair<int, int>> diff;
  auto toggle = [&](int f, int t) {
    auto k = std::pair(f, t);
    if (!diff.insert(k).second) diff.erase(k);
  };
  for (const AOp& o : a.ops)
    for (auto& [key, gidx] : idx) {
      auto [g, y0] = key;
      if (g != o.from) continue;
      auto rec = [&](auto&& self, int y, size_t k) -> void {
        if (k == o.inputs.size()) {
          toggle(gidx, idx.at({o.to, y}));
          return;
        }
        for (const DEdge* e : out_edges[y])
          if (e->label == o.inputs[k]) self(self, e->to, k + 1);
      };
      rec(rec, y0, 0);
    }
  out.diff.assign(diff.begin(), diff.end());
  return out;
}

int complex_homology_dim(int n, const std::vector<std::pair<int, int>>& diff) {
  F2Mat m(n, n);
  for (auto [f, t] : diff) m.flip(t, f);
  int r = f2_rank(m);
  return n - 2 * r;
}

std::vector<int> pair_homology_by_spinc(const PairedComplex& c) {
  std::vector<int> dims(c.spinc_count, 0);
  for (int cls = 0; cls < c.spinc_count; ++cls) {
    std::vector<int> local(c.gens.size(), -1);
    int n = 0;
    for (int g = 0; g < int(c.gens.size()); ++g)
      if (c.gens[g].spinc == cls) local[g] = n++;
    std::vector<std::pair<int, int>> d;
    for (auto [f, t] : c.diff)
      if (local[f] >= 0 && local[t] >= 0) d.push_back({local[f], local[t]});
    dims[cls] = complex_homology_dim(n, d);
  }
  return dims;
}

} // namespace icf
