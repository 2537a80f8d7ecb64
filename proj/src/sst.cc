#include "lsst/sst.h"

#include <algorithm>

#include "lsst/error.h"

namespace lsst {

RegWord literal_word(const Word& w) {
  RegWord out;
  out.reserve(w.size());
  for (char32_t c : w) out.push_back(Sym::letter(c));
  return out;
}

bool check_copyless(const RT& t) {
  std::vector<int> seen(t.dom, 0);
  for (const auto& w : t.assign) {
    for (const auto& s : w) {
      if (!s.is_reg()) continue;
      int r = s.reg_index();
      if (r < 0 || r >= t.dom) return false;
      if (++seen[r] > 1) return false;
    }
  }
  return true;
}

std::vector<int> discarded_registers(const RT& t) {
  std::vector<bool> used(t.dom, false);
  for (const auto& w : t.assign)
    for (const auto& s : w)
      if (s.is_reg()) used[s.reg_index()] = true;
  std::vector<int> out;
  for (int r = 0; r < t.dom; ++r)
    if (!used[r]) out.push_back(r);
  return out;
}

RT identity_rt(int n) {
  RT t;
  t.dom = n;
  t.assign.resize(n);
  for (int r = 0; r < n; ++r) t.assign[r] = {Sym::reg(r)};
  return t;
}

RT compose_rt(const RT& t, const RT& u) {
  if (t.cod() != u.dom) {
    throw DomainMismatch("composing transition with codomain " + std::to_string(t.cod()) +
                         " into one with domain " + std::to_string(u.dom));
  }
  RT out;
  out.dom = t.dom;
  out.assign.resize(u.cod());
  for (int s = 0; s < u.cod(); ++s) {
    RegWord& dst = out.assign[s];
    for (const auto& sym : u.assign[s]) {
      if (sym.is_reg()) {
        const RegWord& src = t.assign[sym.reg_index()];
        dst.insert(dst.end(), src.begin(), src.end());
      } else {
        dst.push_back(sym);
      }
    }
  }
  return out;
}

Tuple apply_rt(const RT& t, const Tuple& x) {
  if (static_cast<int>(x.size()) != t.dom) {
    throw DomainMismatch("tuple of size " + std::to_string(x.size()) +
                         " given to transition with domain " + std::to_string(t.dom));
  }
  Tuple out(t.cod());
  for (int s = 0; s < t.cod(); ++s) {
    for (const auto& sym : t.assign[s]) {
      if (sym.is_reg())
        out[s] += x[sym.reg_index()];
      else
        out[s].push_back(sym.value);
    }
  }
  return out;
}

RT tensor_rt(const RT& t, const RT& u) {
  RT out;
  out.dom = t.dom + u.dom;
  out.assign = t.assign;
  for (const auto& w : u.assign) {
    RegWord shifted = w;
    for (auto& s : shifted)
      if (s.is_reg()) s = Sym::reg(s.reg_index() + t.dom);
    out.assign.push_back(std::move(shifted));
  }
  return out;
}

RT terminal_rt(int n) {
  RT t;
  t.dom = n;
  return t;
}

RT fill_rt(int n) {
  RT t;
  t.assign.resize(n);
  return t;
}

RT constant_rt(const Tuple& words) {
  RT t;
  for (const auto& w : words) t.assign.push_back(literal_word(w));
  return t;
}

RT permutation_rt(const std::vector<int>& perm) {
  RT t;
  t.dom = static_cast<int>(perm.size());
  t.assign.resize(perm.size());
  for (size_t i = 0; i < perm.size(); ++i) t.assign[perm[i]] = {Sym::reg(static_cast<int>(i))};
  return t;
}

std::string format_word(const RegWord& w, const std::vector<std::string>* names) {
  std::string out;
  bool prev_reg = false;
  for (const auto& s : w) {
    if (s.is_reg()) {
      if (!out.empty()) out += ' ';
      out += '$';
      out += names ? (*names)[s.reg_index()] : std::to_string(s.reg_index());
      prev_reg = true;
    } else {
      if (prev_reg) out += ' ';
      if (s.value == U'$' || s.value == U'\\' || s.value == U' ') out += '\\';
      out += to_utf8(s.value);
      prev_reg = false;
    }
  }
  return out;
}

std::string format_rt(const RT& t, const std::vector<std::string>* dom_names,
                      const std::vector<std::string>* cod_names) {
  std::string out = "{";
  for (int s = 0; s < t.cod(); ++s) {
    if (s) out += ", ";
    out += cod_names ? (*cod_names)[s] : std::to_string(s);
    out += " <- ";
    out += format_word(t.assign[s], dom_names);
  }
  return out + "}";
}

int SstMachine::letter_index(char32_t c) const {
  auto pos = alphabet_in.find(c);
  return pos == Word::npos ? -1 : static_cast<int>(pos);
}

std::vector<std::string> validate_sst(const SstMachine& m) {
  std::vector<std::string> problems;
  int n = m.num_registers();
  auto where = [&](int q) { return "state " + m.states[q]; };
  auto check_letters = [&](const RT& t, const std::string& at) {
    for (const auto& w : t.assign)
      for (const auto& s : w)
        if (!s.is_reg() && m.alphabet_out.find(s.value) == Word::npos)
          problems.push_back(at + ": letter '" + to_utf8(s.value) + "' not in output alphabet");
  };
  if (m.states.empty()) problems.push_back("machine has no states");
  if (m.initial < 0 || m.initial >= m.num_states()) problems.push_back("initial state out of range");
  if (m.init.dom != 0 || m.init.cod() != n) problems.push_back("init must assign every register");
  check_letters(m.init, "init");
  if (static_cast<int>(m.delta.size()) != m.num_states())
    problems.push_back("transition table has wrong number of states");
  for (int q = 0; q < static_cast<int>(m.delta.size()); ++q) {
    if (m.delta[q].size() != m.alphabet_in.size()) {
      problems.push_back(where(q) + ": transition function is not total");
      continue;
    }
    for (size_t k = 0; k < m.delta[q].size(); ++k) {
      const auto& tr = m.delta[q][k];
      std::string at = where(q) + " on '" + to_utf8(m.alphabet_in[k]) + "'";
      if (tr.next < 0 || tr.next >= m.num_states()) problems.push_back(at + ": target out of range");
      if (tr.update.dom != n || tr.update.cod() != n)
        problems.push_back(at + ": update must map all registers to all registers");
      else if (!check_copyless(tr.update))
        problems.push_back(at + ": update is not copyless");
      check_letters(tr.update, at);
    }
  }
  if (static_cast<int>(m.output.size()) != m.num_states())
    problems.push_back("output table has wrong number of states");
  for (int q = 0; q < static_cast<int>(m.output.size()); ++q) {
    if (!m.output[q]) continue;
    const RT& o = *m.output[q];
    if (o.dom != n || o.cod() != 1)
      problems.push_back(where(q) + ": output must be a single word over the registers");
    else if (!check_copyless(o))
      problems.push_back(where(q) + ": output is not copyless");
    check_letters(o, where(q) + " output");
  }
  return problems;
}

std::optional<Word> run_sst_partial(const SstMachine& m, const Word& w) {
  int q = m.initial;
  Tuple regs = apply_rt(m.init, {});
  for (char32_t c : w) {
    int k = m.letter_index(c);
    if (k < 0) throw DomainMismatch("letter '" + to_utf8(c) + "' not in input alphabet");
    const auto& tr = m.delta[q][k];
    regs = apply_rt(tr.update, regs);
    q = tr.next;
  }
  if (!m.output[q]) return std::nullopt;
  return apply_rt(*m.output[q], regs)[0];
}

Word run_sst(const SstMachine& m, const Word& w) {
  auto out = run_sst_partial(m, w);
  if (!out) throw UndefinedOutput("no output in final state for input '" + to_utf8(w) + "'");
  return *out;
}

SstMachine reverse_machine(const Word& alphabet) {
  SstMachine m;
  m.states = {"q"};
  m.registers = {"x", "y"};
  m.alphabet_in = alphabet;
  m.alphabet_out = alphabet;
  m.init = fill_rt(2);
  m.delta.resize(1);
  for (char32_t c : alphabet) {
    RT t;
    t.dom = 2;
    t.assign = {{Sym::reg(0), Sym::letter(c)}, {Sym::letter(c), Sym::reg(1)}};
    m.delta[0].push_back({0, t});
  }
  RT o;
  o.dom = 2;
  o.assign = {{Sym::reg(0), Sym::reg(1)}};
  m.output = {o};
  return m;
}

SstMachine charles_machine(const Word& alphabet, char32_t sep) {
  SstMachine m;
  m.states = {"A", "B"};
  m.registers = {"x", "y"};
  m.alphabet_in = alphabet + sep;
  m.alphabet_out = alphabet;
  m.init = fill_rt(2);
  m.delta.resize(2);
  const Sym x = Sym::reg(0), y = Sym::reg(1);
  for (char32_t c : alphabet) {
    m.delta[0].push_back({0, RT{2, {{x, Sym::letter(c)}, {y}}}});
    m.delta[1].push_back({1, RT{2, {{Sym::letter(c), x}, {y}}}});
  }
  m.delta[0].push_back({1, RT{2, {{}, {y, x}}}});
  m.delta[1].push_back({0, RT{2, {{}, {x, y}}}});
  m.output = {RT{2, {{y}}}, RT{2, {{}}}};
  return m;
}

SstMachine identity_machine(const Word& alphabet) {
  SstMachine m;
  m.states = {"q"};
  m.registers = {"x"};
  m.alphabet_in = alphabet;
  m.alphabet_out = alphabet;
  m.init = fill_rt(1);
  m.delta.resize(1);
  for (char32_t c : alphabet) m.delta[0].push_back({0, RT{1, {{Sym::reg(0), Sym::letter(c)}}}});
  m.output = {RT{1, {{Sym::reg(0)}}}};
  return m;
}

}  // namespace lsst
