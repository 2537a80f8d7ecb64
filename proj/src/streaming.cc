#include "lsst/streaming.h"

namespace lsst {

GenSst<SrCat> sst_as_gen(const SstMachine& m) {
  GenSst<SrCat> g;
  g.states = m.num_states();
  g.initial = m.initial;
  g.memory = m.num_registers();
  g.letters = static_cast<int>(m.alphabet_in.size());
  for (const auto& row : m.delta) {
    std::vector<std::pair<int, RT>> r;
    for (const auto& t : row) r.push_back({t.next, t.update});
    g.delta.push_back(r);
  }
  g.init = m.init;
  g.output = m.output;
  return g;
}

Word interpret_sr(const RT& f) {
  if (f.dom != 0 || f.cod() != 1) throw DomainMismatch("expected a morphism from ∅ to one register");
  return apply_rt(f, {})[0];
}

std::vector<int> letter_indices(const Word& alphabet, const Word& w) {
  std::vector<int> out;
  for (char32_t c : w) {
    auto k = alphabet.find(c);
    if (k == Word::npos) throw DomainMismatch("letter '" + to_utf8(c) + "' not in the input alphabet");
    out.push_back(static_cast<int>(k));
  }
  return out;
}

namespace {

RT pad(const RT& t, int n) {
  RT out{n, t.assign};
  out.assign.resize(n);
  return out;
}

RT pad_dom(const RT& t, int n) { return RT{n, t.assign}; }

}  // namespace

SstMachine pad_registers(const SdmSst<SrCat>& m, const Word& alphabet_in, const Word& alphabet_out) {
  int n = 0;
  for (int r : m.memory) n = std::max(n, r);
  SstMachine out;
  for (int q = 0; q < m.states(); ++q) out.states.push_back("q" + std::to_string(q));
  for (int r = 0; r < n; ++r) out.registers.push_back("r" + std::to_string(r));
  out.initial = m.initial;
  out.alphabet_in = alphabet_in;
  out.alphabet_out = alphabet_out;
  for (int q = 0; q < m.states(); ++q) {
    std::vector<SstTransition> row;
    for (int a = 0; a < m.letters; ++a) {
      const auto& [next, t] = m.delta[q][a];
      row.push_back({next, pad(pad_dom(t, n), n)});
    }
    out.delta.push_back(row);
    out.output.push_back(m.output[q] ? std::optional<RT>(pad_dom(*m.output[q], n)) : std::nullopt);
  }
  out.init = pad(m.init, n);
  out.init.dom = 0;
  return out;
}

}  // namespace lsst
