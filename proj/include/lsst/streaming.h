#ifndef LSST_STREAMING_H
#define LSST_STREAMING_H

// Generic streaming machines over a category given as a capability struct C:
//   typename C::Obj, typename C::Mor
//   C::id(Obj), C::compose(f, g) = g ∘ f, C::dom(f), C::cod(f), C::equal(f, g)
// Optional capabilities are detected by the concepts below.

#include <algorithm>
#include <concepts>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "lsst/error.h"
#include "lsst/sst.h"

namespace lsst {

template <class C>
concept Category = requires(typename C::Obj a, typename C::Mor f) {
  { C::id(a) } -> std::convertible_to<typename C::Mor>;
  { C::compose(f, f) } -> std::convertible_to<typename C::Mor>;
  { C::dom(f) } -> std::convertible_to<typename C::Obj>;
  { C::cod(f) } -> std::convertible_to<typename C::Obj>;
};

template <class C>
concept Monoidal = Category<C> && requires(typename C::Obj a, typename C::Mor f) {
  { C::unit() } -> std::convertible_to<typename C::Obj>;
  { C::tensor(a, a) } -> std::convertible_to<typename C::Obj>;
  { C::tensor_mor(f, f) } -> std::convertible_to<typename C::Mor>;
};

template <class C>
concept Affine = Monoidal<C> && requires(typename C::Obj a) {
  { C::terminal(a) } -> std::convertible_to<typename C::Mor>;
  { C::unitary_support(a) } -> std::convertible_to<typename C::Mor>;
};

template <class C>
concept HasCoproducts = Category<C> && requires(std::vector<typename C::Obj> as, std::vector<typename C::Mor> fs) {
  { C::coproduct(as) } -> std::convertible_to<typename C::Obj>;
  { C::injection(as, 0) } -> std::convertible_to<typename C::Mor>;
  { C::copair(as, fs) } -> std::convertible_to<typename C::Mor>;
};

// ---------------------------------------------------------------------------
// Base categories

// Sr(Γ): objects are register counts, morphisms register transitions.
struct SrCat {
  using Obj = int;
  using Mor = RT;
  static Mor id(Obj n) { return identity_rt(n); }
  static Mor compose(const Mor& f, const Mor& g) { return compose_rt(f, g); }
  static Obj dom(const Mor& f) { return f.dom; }
  static Obj cod(const Mor& f) { return f.cod(); }
  static bool equal(const Mor& f, const Mor& g) { return f == g; }
  static Obj unit() { return 0; }
  static Obj tensor(Obj a, Obj b) { return a + b; }
  static Mor tensor_mor(const Mor& f, const Mor& g) { return tensor_rt(f, g); }
  static Mor terminal(Obj n) { return terminal_rt(n); }
  static Mor unitary_support(Obj n) { return fill_rt(n); }
};

// Finite sets [n] and functions; the setting for deterministic automata.
struct FinSetCat {
  using Obj = int;
  struct Mor {
    int dom = 0;
    int cod = 0;
    std::vector<int> map;
    bool operator==(const Mor&) const = default;
  };
  static Mor id(Obj n) {
    Mor f{n, n, {}};
    for (int i = 0; i < n; ++i) f.map.push_back(i);
    return f;
  }
  static Mor compose(const Mor& f, const Mor& g) {
    if (f.cod != g.dom) throw DomainMismatch("finite set composition");
    Mor h{f.dom, g.cod, {}};
    for (int x : f.map) h.map.push_back(g.map[x]);
    return h;
  }
  static Obj dom(const Mor& f) { return f.dom; }
  static Obj cod(const Mor& f) { return f.cod; }
  static bool equal(const Mor& f, const Mor& g) { return f == g; }
  // Cartesian product as tensor; pairs are numbered first-major.
  static Obj unit() { return 1; }
  static Obj tensor(Obj a, Obj b) { return a * b; }
  static Mor tensor_mor(const Mor& f, const Mor& g) {
    Mor h{f.dom * g.dom, f.cod * g.cod, {}};
    for (int x : f.map)
      for (int y : g.map) h.map.push_back(x * g.cod + y);
    return h;
  }
  static Mor terminal(Obj n) { return Mor{n, 1, std::vector<int>(n, 0)}; }
  // ×groups → ×groups[perm[0]], groups[perm[1]], …
  static Mor permute(const std::vector<Obj>& groups, const std::vector<int>& perm) {
    int total = 1;
    for (int g : groups) total *= g;
    Mor h{total, total, {}};
    size_t n = groups.size();
    std::vector<int> digit(n);
    for (int x = 0; x < total; ++x) {
      for (size_t k = n, r = x; k-- > 0;) {
        digit[k] = static_cast<int>(r % groups[k]);
        r /= groups[k];
      }
      int y = 0;
      for (int p : perm) y = y * groups[p] + digit[p];
      h.map.push_back(y);
    }
    return h;
  }
};

// ---------------------------------------------------------------------------
// Completions. Finite index sets are list positions.

// C_⊕: objects are families, a morphism sends each summand u to a summand v
// with a base morphism C_u → D_v.
template <Category C>
struct OplusCat {
  using Obj = std::vector<typename C::Obj>;
  struct Mor {
    Obj dom, cod;
    std::vector<std::pair<int, typename C::Mor>> at;
  };
  static Mor id(const Obj& a) {
    Mor f{a, a, {}};
    for (size_t u = 0; u < a.size(); ++u) f.at.push_back({static_cast<int>(u), C::id(a[u])});
    return f;
  }
  static Mor compose(const Mor& f, const Mor& g) {
    if (f.cod != g.dom) throw IndexMismatch("⊕ composition: codomain and domain differ");
    Mor h{f.dom, g.cod, {}};
    for (const auto& [v, fu] : f.at) {
      const auto& [w, gv] = g.at[v];
      h.at.push_back({w, C::compose(fu, gv)});
    }
    return h;
  }
  static Obj dom(const Mor& f) { return f.dom; }
  static Obj cod(const Mor& f) { return f.cod; }
  static bool equal(const Mor& f, const Mor& g) {
    if (f.dom != g.dom || f.cod != g.cod) return false;
    for (size_t u = 0; u < f.at.size(); ++u)
      if (f.at[u].first != g.at[u].first || !C::equal(f.at[u].second, g.at[u].second)) return false;
    return true;
  }
  static Obj singleton(const typename C::Obj& a) { return {a}; }
  static Mor embed(const typename C::Mor& f) { return {{C::dom(f)}, {C::cod(f)}, {{0, f}}}; }
  static Obj coproduct(const std::vector<Obj>& as) {
    Obj out;
    for (const auto& a : as) out.insert(out.end(), a.begin(), a.end());
    return out;
  }
  static Mor injection(const std::vector<Obj>& as, int i) {
    Obj all = coproduct(as);
    int off = 0;
    for (int k = 0; k < i; ++k) off += static_cast<int>(as[k].size());
    Mor f{as[i], all, {}};
    for (size_t u = 0; u < as[i].size(); ++u) f.at.push_back({off + static_cast<int>(u), C::id(as[i][u])});
    return f;
  }
  static Mor copair(const std::vector<Obj>& as, const std::vector<Mor>& fs) {
    if (fs.empty()) throw IndexMismatch("empty copairing needs a codomain");
    Mor f{coproduct(as), fs[0].cod, {}};
    for (size_t i = 0; i < fs.size(); ++i) {
      if (fs[i].dom != as[i]) throw IndexMismatch("copairing domain");
      f.at.insert(f.at.end(), fs[i].at.begin(), fs[i].at.end());
    }
    return f;
  }
  static Obj unit() requires Monoidal<C> { return {C::unit()}; }
  static Obj tensor(const Obj& a, const Obj& b) requires Monoidal<C> {
    Obj out;
    for (const auto& x : a)
      for (const auto& y : b) out.push_back(C::tensor(x, y));
    return out;
  }
  static Mor tensor_mor(const Mor& f, const Mor& g) requires Monoidal<C> {
    Mor h{tensor(f.dom, g.dom), tensor(f.cod, g.cod), {}};
    int m = static_cast<int>(g.cod.size());
    for (const auto& [v, fu] : f.at)
      for (const auto& [w, gu] : g.at) h.at.push_back({v * m + w, C::tensor_mor(fu, gu)});
    return h;
  }
};

// C_& = ((C^op)_⊕)^op: a morphism picks, for every target component y, a
// source component x and a base morphism C_x → D_y.
template <Category C>
struct WithCat {
  using Obj = std::vector<typename C::Obj>;
  struct Mor {
    Obj dom, cod;
    std::vector<std::pair<int, typename C::Mor>> at;
  };
  static Mor id(const Obj& a) {
    Mor f{a, a, {}};
    for (size_t y = 0; y < a.size(); ++y) f.at.push_back({static_cast<int>(y), C::id(a[y])});
    return f;
  }
  static Mor compose(const Mor& f, const Mor& g) {
    if (f.cod != g.dom) throw IndexMismatch("& composition: codomain and domain differ");
    Mor h{f.dom, g.cod, {}};
    for (const auto& [y, gy] : g.at) {
      const auto& [x, fx] = f.at[y];
      h.at.push_back({x, C::compose(fx, gy)});
    }
    return h;
  }
  static Obj dom(const Mor& f) { return f.dom; }
  static Obj cod(const Mor& f) { return f.cod; }
  static bool equal(const Mor& f, const Mor& g) {
    if (f.dom != g.dom || f.cod != g.cod) return false;
    for (size_t y = 0; y < f.at.size(); ++y)
      if (f.at[y].first != g.at[y].first || !C::equal(f.at[y].second, g.at[y].second)) return false;
    return true;
  }
  static Obj singleton(const typename C::Obj& a) { return {a}; }
  static Mor embed(const typename C::Mor& f) { return {{C::dom(f)}, {C::cod(f)}, {{0, f}}}; }
  static Mor projection(const Obj& a, int i) { return {a, {a[i]}, {{i, C::id(a[i])}}}; }
  static Mor pair(const std::vector<Mor>& fs, const Obj& dom) {
    Mor f{dom, {}, {}};
    for (const auto& g : fs) {
      f.cod.insert(f.cod.end(), g.cod.begin(), g.cod.end());
      f.at.insert(f.at.end(), g.at.begin(), g.at.end());
    }
    return f;
  }
  static Obj unit() requires Monoidal<C> { return {C::unit()}; }
  static Obj tensor(const Obj& a, const Obj& b) requires Monoidal<C> {
    Obj out;
    for (const auto& x : a)
      for (const auto& y : b) out.push_back(C::tensor(x, y));
    return out;
  }
  static Mor tensor_mor(const Mor& f, const Mor& g) requires Monoidal<C> {
    Mor h{tensor(f.dom, g.dom), tensor(f.cod, g.cod), {}};
    int m = static_cast<int>(g.dom.size());
    for (const auto& [x, fy] : f.at)
      for (const auto& [x2, gy] : g.at) h.at.push_back({x * m + x2, C::tensor_mor(fy, gy)});
    return h;
  }
};

// C_⊕& = (C_&)_⊕ with the composition of the completion: summands are
// chased forward, components backward.
template <Category C>
struct OplusWithCat {
  using Obj = std::vector<std::vector<typename C::Obj>>;
  struct At {
    int v = 0;
    std::vector<std::pair<int, typename C::Mor>> comps;
  };
  struct Mor {
    Obj dom, cod;
    std::vector<At> at;
  };
  static Mor id(const Obj& a) {
    Mor f{a, a, {}};
    for (size_t u = 0; u < a.size(); ++u) {
      At x{static_cast<int>(u), {}};
      for (size_t y = 0; y < a[u].size(); ++y) x.comps.push_back({static_cast<int>(y), C::id(a[u][y])});
      f.at.push_back(x);
    }
    return f;
  }
  static Mor compose(const Mor& f, const Mor& g) {
    if (f.cod != g.dom) throw IndexMismatch("⊕& composition: codomain and domain differ");
    Mor h{f.dom, g.cod, {}};
    for (const At& fu : f.at) {
      const At& gv = g.at[fu.v];
      At hu{gv.v, {}};
      for (const auto& [y, gy] : gv.comps) {
        const auto& [x, fx] = fu.comps[y];
        hu.comps.push_back({x, C::compose(fx, gy)});
      }
      h.at.push_back(hu);
    }
    return h;
  }
  static Obj dom(const Mor& f) { return f.dom; }
  static Obj cod(const Mor& f) { return f.cod; }
  static bool equal(const Mor& f, const Mor& g) {
    if (f.dom != g.dom || f.cod != g.cod) return false;
    for (size_t u = 0; u < f.at.size(); ++u) {
      if (f.at[u].v != g.at[u].v) return false;
      for (size_t y = 0; y < f.at[u].comps.size(); ++y)
        if (f.at[u].comps[y].first != g.at[u].comps[y].first ||
            !C::equal(f.at[u].comps[y].second, g.at[u].comps[y].second))
          return false;
    }
    return true;
  }
  static Obj singleton(const typename C::Obj& a) { return {{a}}; }
  static Mor embed(const typename C::Mor& f) { return {{{C::dom(f)}}, {{C::cod(f)}}, {At{0, {{0, f}}}}}; }
};

// ---------------------------------------------------------------------------
// Machines

// Deterministic C-SST with a single memory object.
template <Category C>
struct GenSst {
  int states = 1;
  int initial = 0;
  typename C::Obj memory;
  int letters = 0;
  std::vector<std::vector<std::pair<int, typename C::Mor>>> delta;  // [q][letter]
  typename C::Mor init;
  std::vector<std::optional<typename C::Mor>> output;
};

// Deterministic machine whose memory object depends on the state.
template <Category C>
struct SdmSst {
  std::vector<typename C::Obj> memory;  // C_q
  int initial = 0;
  int letters = 0;
  std::vector<std::vector<std::pair<int, typename C::Mor>>> delta;
  typename C::Mor init;
  std::vector<std::optional<typename C::Mor>> output;
  int states() const { return static_cast<int>(memory.size()); }
};

template <Category C>
struct NdTransition {
  int from = 0;
  int to = 0;
  typename C::Mor update;
};

// Nondeterministic state-dependent-memory machine with initial set I.
template <Category C>
struct NdSdmSst {
  std::vector<typename C::Obj> memory;
  int letters = 0;
  std::vector<std::pair<int, typename C::Mor>> initial;   // (q, i_q)
  std::vector<std::vector<NdTransition<C>>> delta;        // per letter
  std::vector<std::optional<typename C::Mor>> output;
  int states() const { return static_cast<int>(memory.size()); }
};

// Runs m on a word given as letter indices; result is o ∘ f_n ∘ … ∘ f_1 ∘ i.
template <Category C>
std::optional<typename C::Mor> run_gen_sst(const GenSst<C>& m, const std::vector<int>& w) {
  typename C::Mor acc = m.init;
  int q = m.initial;
  for (int a : w) {
    const auto& [next, f] = m.delta[q][a];
    acc = C::compose(acc, f);
    q = next;
  }
  if (!m.output[q]) return std::nullopt;
  return C::compose(acc, *m.output[q]);
}

template <Category C>
std::optional<typename C::Mor> run_sdm_sst(const SdmSst<C>& m, const std::vector<int>& w) {
  typename C::Mor acc = m.init;
  int q = m.initial;
  for (int a : w) {
    const auto& [next, f] = m.delta[q][a];
    acc = C::compose(acc, f);
    q = next;
  }
  if (!m.output[q]) return std::nullopt;
  return C::compose(acc, *m.output[q]);
}

// All outputs of accepting runs, deduplicated with C::equal. The reachable
// (state, value) pairs are kept per prefix.
template <Category C>
std::vector<typename C::Mor> run_nd_sdm(const NdSdmSst<C>& m, const std::vector<int>& w) {
  using Mor = typename C::Mor;
  auto insert = [](std::vector<std::pair<int, Mor>>& set, int q, Mor f) {
    for (const auto& [p, g] : set)
      if (p == q && C::equal(g, f)) return;
    set.push_back({q, std::move(f)});
  };
  std::vector<std::pair<int, Mor>> cur;
  for (const auto& [q, i] : m.initial) insert(cur, q, i);
  for (int a : w) {
    std::vector<std::pair<int, Mor>> next;
    for (const auto& [q, f] : cur)
      for (const auto& t : m.delta[a])
        if (t.from == q) insert(next, t.to, C::compose(f, t.update));
    cur = std::move(next);
  }
  std::vector<Mor> out;
  for (const auto& [q, f] : cur) {
    if (!m.output[q]) continue;
    Mor r = C::compose(f, *m.output[q]);
    bool seen = false;
    for (const auto& g : out) seen = seen || C::equal(g, r);
    if (!seen) out.push_back(r);
  }
  return out;
}

// A deterministic machine seen as a nondeterministic one.
template <Category C>
NdSdmSst<C> sdm_as_nd(const SdmSst<C>& m) {
  NdSdmSst<C> nd;
  nd.memory = m.memory;
  nd.letters = m.letters;
  nd.initial = {{m.initial, m.init}};
  nd.delta.resize(m.letters);
  for (int q = 0; q < m.states(); ++q)
    for (int a = 0; a < m.letters; ++a) nd.delta[a].push_back({q, m.delta[q][a].first, m.delta[q][a].second});
  nd.output = m.output;
  return nd;
}

template <Category C>
SdmSst<C> gen_as_sdm(const GenSst<C>& m) {
  SdmSst<C> s;
  s.memory.assign(m.states, m.memory);
  s.initial = m.initial;
  s.letters = m.letters;
  s.delta = m.delta;
  s.init = m.init;
  s.output = m.output;
  return s;
}

// A state-dependent-memory machine over C as a single-state machine over
// C_⊕ with memory ⊕_q C_q; the state becomes the summand. Every output is
// required to be defined.
template <Category C>
GenSst<OplusCat<C>> sdm_to_oplus(const SdmSst<C>& m, const typename C::Obj& bottom) {
  using O = OplusCat<C>;
  GenSst<O> g;
  g.states = 1;
  g.memory = m.memory;
  g.letters = m.letters;
  g.delta.assign(1, {});
  for (int a = 0; a < m.letters; ++a) {
    typename O::Mor f{m.memory, m.memory, {}};
    for (int q = 0; q < m.states(); ++q) f.at.push_back(m.delta[q][a]);
    g.delta[0].push_back({0, f});
  }
  g.init = typename O::Mor{{C::dom(m.init)}, m.memory, {{m.initial, m.init}}};
  typename O::Mor out{m.memory, {bottom}, {}};
  for (int q = 0; q < m.states(); ++q) {
    if (!m.output[q]) throw MissingCapability("partial output cannot be copaired");
    out.at.push_back({0, *m.output[q]});
  }
  g.output = {out};
  return g;
}

// Inverse direction: states become (state, summand) pairs reachable from the
// initial summand.
template <Category C>
SdmSst<C> oplus_to_sdm(const GenSst<OplusCat<C>>& g) {
  SdmSst<C> m;
  m.letters = g.letters;
  std::map<std::pair<int, int>, int> ids;
  std::vector<std::pair<int, int>> todo;
  auto intern = [&](int q, int u) {
    auto [it, fresh] = ids.insert({{q, u}, static_cast<int>(todo.size())});
    if (fresh) {
      todo.push_back({q, u});
      m.memory.push_back(g.memory[u]);
    }
    return it->second;
  };
  if (g.init.at.size() != 1) throw IndexMismatch("initial value must come from a single summand");
  m.initial = intern(g.initial, g.init.at[0].first);
  m.init = g.init.at[0].second;
  for (size_t k = 0; k < todo.size(); ++k) {
    auto [q, u] = todo[k];
    std::vector<std::pair<int, typename C::Mor>> row;
    for (int a = 0; a < g.letters; ++a) {
      const auto& [q2, f] = g.delta[q][a];
      const auto& [v, fu] = f.at[u];
      row.push_back({intern(q2, v), fu});
    }
    m.delta.push_back(row);
  }
  m.output.resize(todo.size());
  for (size_t k = 0; k < todo.size(); ++k) {
    auto [q, u] = todo[k];
    if (g.output[q]) m.output[k] = g.output[q]->at[u].second;
  }
  return m;
}

// A state-dependent machine over a category with coproducts as a
// single-state machine with memory ∐_q C_q.
template <Category C>
GenSst<C> single_state_via_coproducts(const SdmSst<C>& m, const typename C::Obj& bottom) {
  if constexpr (!HasCoproducts<C>) {
    throw MissingCapability("category has no coproducts");
  } else {
    GenSst<C> g;
    g.states = 1;
    g.letters = m.letters;
    g.memory = C::coproduct(m.memory);
    g.delta.assign(1, {});
    for (int a = 0; a < m.letters; ++a) {
      std::vector<typename C::Mor> fs;
      for (int q = 0; q < m.states(); ++q)
        fs.push_back(C::compose(m.delta[q][a].second, C::injection(m.memory, m.delta[q][a].first)));
      g.delta[0].push_back({0, C::copair(m.memory, fs)});
    }
    g.init = C::compose(m.init, C::injection(m.memory, m.initial));
    std::vector<typename C::Mor> outs;
    for (int q = 0; q < m.states(); ++q) {
      if (!m.output[q]) throw MissingCapability("partial output cannot be copaired");
      outs.push_back(*m.output[q]);
    }
    (void)bottom;
    g.output = {C::copair(m.memory, outs)};
    return g;
  }
}

// Removes ⊕ from the memory of a machine over C_⊕ when C is affine with
// unitary support: states Q × U, memory ⊗_u C_u, and the summands not in use
// hold junk from the unitary support.
template <Category C>
GenSst<C> collapse_oplus(const GenSst<OplusCat<C>>& g) {
  if constexpr (!Affine<C>) {
    throw MissingCapability("collapse needs an affine base with unitary support");
  } else {
    using Obj = typename C::Obj;
    using Mor = typename C::Mor;
    const auto& fam = g.memory;
    int n = static_cast<int>(fam.size());
    Obj all = C::unit();
    for (const auto& c : fam) all = C::tensor(all, c);
    // ε_{u,v}: C_u → ⊗_w C_w placing the value at v and junk elsewhere.
    auto embed = [&](int v, const Mor& f) {
      Mor acc = f;
      for (int w = v - 1; w >= 0; --w) acc = C::tensor_mor(C::unitary_support(fam[w]), acc);
      for (int w = v + 1; w < n; ++w) acc = C::tensor_mor(acc, C::unitary_support(fam[w]));
      return acc;
    };
    // π_u: ⊗_w C_w → C_u discarding the rest.
    auto project = [&](int u) {
      Mor acc = C::id(fam[u]);
      for (int w = u - 1; w >= 0; --w) acc = C::tensor_mor(C::terminal(fam[w]), acc);
      for (int w = u + 1; w < n; ++w) acc = C::tensor_mor(acc, C::terminal(fam[w]));
      return acc;
    };
    GenSst<C> out;
    out.states = g.states * n;
    out.letters = g.letters;
    out.memory = all;
    if (g.init.at.size() != 1) throw IndexMismatch("initial value must come from a single summand");
    out.initial = g.initial * n + g.init.at[0].first;
    out.init = embed(g.init.at[0].first, g.init.at[0].second);
    out.delta.resize(out.states);
    out.output.resize(out.states);
    for (int q = 0; q < g.states; ++q)
      for (int u = 0; u < n; ++u) {
        int s = q * n + u;
        for (int a = 0; a < g.letters; ++a) {
          const auto& [q2, f] = g.delta[q][a];
          const auto& [v, fu] = f.at[u];
          out.delta[s].push_back({q2 * n + v, C::compose(project(u), embed(v, fu))});
        }
        if (g.output[q]) out.output[s] = C::compose(project(u), g.output[q]->at[u].second);
      }
    return out;
  }
}

// Transport along a functor F : C → D with mediators i : ⫪_D → F(⫪_C) and
// o : F(⊥_C) → ⊥_D.
template <Category C, Category D>
struct SettingMorphism {
  std::function<typename D::Obj(const typename C::Obj&)> obj;
  std::function<typename D::Mor(const typename C::Mor&)> mor;
  typename D::Mor in;
  typename D::Mor out;
};

template <Category C, Category D>
GenSst<D> apply_setting_morphism(const SettingMorphism<C, D>& F, const GenSst<C>& m) {
  GenSst<D> r;
  r.states = m.states;
  r.initial = m.initial;
  r.letters = m.letters;
  r.memory = F.obj(m.memory);
  r.init = D::compose(F.in, F.mor(m.init));
  for (const auto& row : m.delta) {
    std::vector<std::pair<int, typename D::Mor>> nrow;
    for (const auto& [q, f] : row) nrow.push_back({q, F.mor(f)});
    r.delta.push_back(nrow);
  }
  for (const auto& o : m.output) {
    if (o) r.output.push_back(D::compose(F.mor(*o), F.out));
    else r.output.push_back(std::nullopt);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Sr-specific glue

GenSst<SrCat> sst_as_gen(const SstMachine& m);
// Reads the word computed by a morphism ∅ → {•}.
Word interpret_sr(const RT& f);
// Letter indices of w in the machine's input alphabet.
std::vector<int> letter_indices(const Word& alphabet, const Word& w);
// Pads every state's registers to the maximum, yielding a classical machine.
// Unused registers hold ε.
SstMachine pad_registers(const SdmSst<SrCat>& m, const Word& alphabet_in, const Word& alphabet_out);

}  // namespace lsst

#endif  // LSST_STREAMING_H
