// Random generators for register transitions and Sr_⊕& data.
#ifndef LSST_TESTS_GEN_H
#define LSST_TESTS_GEN_H

#include <algorithm>
#include <map>
#include <memory>
#include <random>
#include <vector>

#include "lsst/closure.h"
#include "lsst/error.h"
#include "lsst/forest.h"
#include "lsst/streaming.h"
#include "lsst/sst.h"

namespace gen {

using namespace lsst;

// A random copyless transition dom -> cod over the letters of `letters`.
inline RT random_rt(std::mt19937& rng, int dom, int cod, const Word& letters = U"ab",
                    int max_letters = 2) {
  RT t;
  t.dom = dom;
  t.assign.resize(cod);
  std::vector<int> regs(dom);
  for (int r = 0; r < dom; ++r) regs[r] = r;
  std::shuffle(regs.begin(), regs.end(), rng);
  if (cod > 0) {
    for (int r : regs) {
      if (rng() % 4 == 0) continue;  // discarded
      t.assign[rng() % cod].push_back(Sym::reg(r));
    }
  }
  for (auto& w : t.assign) {
    int extra = static_cast<int>(rng() % (max_letters + 1));
    for (int k = 0; k < extra; ++k) {
      size_t pos = rng() % (w.size() + 1);
      w.insert(w.begin() + pos, Sym::letter(letters[rng() % letters.size()]));
    }
  }
  return t;
}

// ⊕ of ≤ max_sum summands, each & of ≤ max_fac ι(≤ max_regs).
inline Obj random_obj(std::mt19937& rng, int max_sum = 2, int max_fac = 2, int max_regs = 2) {
  int ns = 1 + static_cast<int>(rng() % max_sum);
  std::vector<Obj> sums;
  for (int s = 0; s < ns; ++s) {
    int nf = 1 + static_cast<int>(rng() % max_fac);
    std::vector<Obj> facs;
    for (int f = 0; f < nf; ++f) facs.push_back(obj_base(static_cast<int>(rng() % (max_regs + 1))));
    sums.push_back(obj_with(facs));
  }
  return obj_plus(sums);
}

inline Idx random_summand(std::mt19937& rng, const Obj& a) {
  switch (a->kind) {
    case ObjKind::Base: return Idx{};
    case ObjKind::Tensor:
    case ObjKind::With: {
      Idx out;
      for (const auto& p : a->parts) out.kids.push_back(random_summand(rng, p));
      return out;
    }
    case ObjKind::Plus: {
      int k = static_cast<int>(rng() % a->parts.size());
      return Idx{k, {}, {random_summand(rng, a->parts[k])}};
    }
    case ObjKind::Lin: {
      Idx out;
      for (const auto& u : a->lin_domain->summands) {
        auto rx = component_registers(a->parts[0], u);
        Idx v = random_summand(rng, a->parts[1]);
        auto sy = component_registers(a->parts[1], v);
        Idx entry;
        entry.kids.push_back(v);
        for (int s : sy) {
          int x = static_cast<int>(rng() % rx.size());
          auto shapes = hom_shapes(rx[x], s);
          const HomShape& sh = shapes[rng() % shapes.size()];
          Idx c{x, sh.target, {}};
          c.data.insert(c.data.end(), sh.rank.begin(), sh.rank.end());
          entry.kids.push_back(c);
        }
        out.kids.push_back(entry);
      }
      return out;
    }
  }
  return {};
}

// A random morphism, tabulated over the summands of dom. Summands of the
// codomain without components are avoided unless dom has none either.
inline Mor random_mor(std::mt19937& rng, const Obj& dom, const Obj& cod) {
  auto table = std::make_shared<std::map<Idx, MorAt>>();
  for (const auto& u : summands(dom)) {
    auto rx = component_registers(dom, u);
    MorAt m;
    for (int tries = 0; tries < 16; ++tries) {
      m.cod = random_summand(rng, cod);
      if (!rx.empty() || component_count(cod, m.cod) == 0) break;
    }
    auto sy = component_registers(cod, m.cod);
    if (rx.empty() && !sy.empty()) throw IndexMismatch("no morphism from an empty summand");
    for (int s : sy) {
      int x = static_cast<int>(rng() % rx.size());
      m.comps.push_back({x, random_rt(rng, rx[x], s)});
    }
    (*table)[u] = m;
  }
  return Mor{dom, cod, [table](const Idx& i) { return table->at(i); }};
}

// A random forest with parent-first vertex order; leaves are outputs with
// probability 3/4, other vertices with probability 1/4.
inline Forest random_forest(std::mt19937& rng, int max_vertices = 7, int max_regs = 1, int labels = 4) {
  Forest f;
  int n = 1 + static_cast<int>(rng() % max_vertices);
  for (int v = 0; v < n; ++v) {
    int p = (v == 0 || rng() % 5 == 0) ? -1 : static_cast<int>(rng() % v);
    f.add(p, static_cast<int>(rng() % labels), static_cast<int>(rng() % (max_regs + 1)), false);
  }
  for (int v = 0; v < n; ++v) f.output[v] = rng() % 4 < (f.children(v).empty() ? 3u : 1u);
  return f;
}

// A random nondeterministic machine over Sr with one output register.
inline NdSdmSst<SrCat> random_nd(std::mt19937& rng, int max_states = 3, int max_regs = 2, int letters = 2,
                                 const Word& out_letters = U"ab") {
  NdSdmSst<SrCat> m;
  int n = 1 + static_cast<int>(rng() % max_states);
  m.letters = letters;
  for (int q = 0; q < n; ++q) {
    m.memory.push_back(static_cast<int>(rng() % (max_regs + 1)));
    if (rng() % 4 == 0)
      m.output.push_back(std::nullopt);
    else
      m.output.push_back(random_rt(rng, m.memory[q], 1, out_letters));
  }
  int ni = 1 + static_cast<int>(rng() % 2);
  for (int k = 0; k < ni; ++k) {
    int q = static_cast<int>(rng() % n);
    m.initial.push_back({q, random_rt(rng, 0, m.memory[q], out_letters)});
  }
  m.delta.resize(letters);
  for (int a = 0; a < letters; ++a) {
    for (int p = 0; p < n; ++p) {
      int k = static_cast<int>(rng() % 3);
      for (int j = 0; j < k; ++j) {
        int q = static_cast<int>(rng() % n);
        m.delta[a].push_back({p, q, random_rt(rng, m.memory[p], m.memory[q], out_letters)});
      }
    }
  }
  return m;
}

// A random copyless SST with total outputs.
inline SstMachine random_sst(std::mt19937& rng, int max_states, int max_regs, const Word& in, const Word& out) {
  SstMachine m;
  int n = 1 + static_cast<int>(rng() % max_states);
  int r = 1 + static_cast<int>(rng() % max_regs);
  for (int q = 0; q < n; ++q) m.states.push_back("q" + std::to_string(q));
  for (int k = 0; k < r; ++k) m.registers.push_back("r" + std::to_string(k));
  m.alphabet_in = in;
  m.alphabet_out = out;
  m.initial = 0;
  m.init = random_rt(rng, 0, r, out, 1);
  for (int q = 0; q < n; ++q) {
    std::vector<SstTransition> row;
    for (size_t a = 0; a < in.size(); ++a)
      row.push_back({static_cast<int>(rng() % n), random_rt(rng, r, r, out, 2)});
    m.delta.push_back(row);
    m.output.push_back(random_rt(rng, r, 1, out, 1));
  }
  return m;
}

// A random nondeterministic copyless SST: 0 to 2 choices per state and
// letter, 1 or 2 initial states, outputs undefined with probability 1/4.
inline NdSstMachine random_nd_sst(std::mt19937& rng, int max_states, int max_regs, const Word& in, const Word& out) {
  NdSstMachine m;
  int n = 1 + static_cast<int>(rng() % max_states);
  int r = static_cast<int>(rng() % (max_regs + 1));
  for (int q = 0; q < n; ++q) m.states.push_back("q" + std::to_string(q));
  for (int k = 0; k < r; ++k) m.registers.push_back("r" + std::to_string(k));
  m.alphabet_in = in;
  m.alphabet_out = out;
  for (int k = 1 + static_cast<int>(rng() % 2); k > 0; --k)
    m.initial.push_back({static_cast<int>(rng() % n), random_rt(rng, 0, r, out, 1)});
  for (int q = 0; q < n; ++q) {
    std::vector<std::vector<SstTransition>> row(in.size());
    for (auto& choices : row)
      for (int k = static_cast<int>(rng() % 3); k > 0; --k)
        choices.push_back({static_cast<int>(rng() % n), random_rt(rng, r, r, out, 2)});
    m.delta.push_back(row);
    if (rng() % 4 == 0) m.output.push_back(std::nullopt);
    else m.output.push_back(random_rt(rng, r, 1, out, 1));
  }
  return m;
}

inline Word random_word(std::mt19937& rng, const Word& alphabet, int max_len) {
  Word w;
  int len = static_cast<int>(rng() % (max_len + 1));
  for (int k = 0; k < len; ++k) w += alphabet[rng() % alphabet.size()];
  return w;
}

// All words over letters 0..k-1 of length ≤ n.
inline std::vector<std::vector<int>> all_words(int k, int n) {
  std::vector<std::vector<int>> out{{}};
  for (size_t i = 0; i < out.size(); ++i) {
    if (static_cast<int>(out[i].size()) == n) continue;
    for (int a = 0; a < k; ++a) {
      auto w = out[i];
      w.push_back(a);
      out.push_back(std::move(w));
    }
  }
  return out;
}

// All words over the alphabet of length ≤ n, shortest first.
inline std::vector<lsst::Word> all_strings(const lsst::Word& alphabet, int n) {
  std::vector<lsst::Word> out;
  for (const auto& w : all_words(static_cast<int>(alphabet.size()), n)) {
    lsst::Word s;
    for (int a : w) s += alphabet[a];
    out.push_back(s);
  }
  return out;
}

}  // namespace gen

#endif  // LSST_TESTS_GEN_H
