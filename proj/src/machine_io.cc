#include <algorithm>
#include <json.hpp>

#include "lsst/error.h"
#include "lsst/io.h"

namespace lsst {

using nlohmann::json;

RegWord parse_reg_word(const std::string& s, const std::vector<std::string>& registers) {
  Word raw = to_u32(s);
  RegWord out;
  auto name_char = [](char32_t c) { return c < 128 && (std::isalnum(static_cast<int>(c)) || c == '_' || c == '\''); };
  for (size_t i = 0; i < raw.size(); ++i) {
    char32_t c = raw[i];
    if (c == U' ') continue;
    if (c == U'\\') {
      if (i + 1 == raw.size()) throw ParseError("dangling escape in '" + s + "'");
      out.push_back(Sym::letter(raw[++i]));
    } else if (c == U'$') {
      size_t j = i + 1;
      while (j < raw.size() && name_char(raw[j])) ++j;
      std::string name = to_utf8(raw.substr(i + 1, j - i - 1));
      auto it = std::find(registers.begin(), registers.end(), name);
      if (it == registers.end()) throw ParseError("unknown register '$" + name + "' in '" + s + "'");
      out.push_back(Sym::reg(static_cast<int>(it - registers.begin())));
      i = j - 1;
    } else {
      out.push_back(Sym::letter(c));
    }
  }
  return out;
}

namespace {

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("JSON: ") + e.what());
  }
}

const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw ParseError("missing field '" + path + key + "'");
  return j.at(key);
}

template <class T>
T get(const json& j, const std::string& key, const std::string& path) {
  try {
    return field(j, key, path).get<T>();
  } catch (const json::exception& e) {
    throw ParseError("field '" + path + key + "': " + e.what());
  }
}

int index_in(const std::vector<std::string>& names, const std::string& name, const std::string& what) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw ParseError("unknown " + what + " '" + name + "'");
  return static_cast<int>(it - names.begin());
}

int letter_in(const Word& alphabet, const std::string& letter, const std::string& path) {
  Word c = to_u32(letter);
  size_t k = c.size() == 1 ? alphabet.find(c[0]) : Word::npos;
  if (k == Word::npos) throw ParseError(path + ": letter '" + letter + "' not in the input alphabet");
  return static_cast<int>(k);
}

json rt_to_json(const RT& t, const std::vector<std::string>& dom, const std::vector<std::string>& cod) {
  json j = json::object();
  for (int s = 0; s < t.cod(); ++s) j[cod[s]] = format_word(t.assign[s], &dom);
  return j;
}

RT rt_from_json(const json& j, const std::vector<std::string>& dom, const std::vector<std::string>& cod,
                const std::string& path) {
  if (!j.is_object()) throw ParseError("field '" + path + "' must map registers to words");
  RT t{static_cast<int>(dom.size()), std::vector<RegWord>(cod.size())};
  for (const auto& [reg, w] : j.items()) {
    if (!w.is_string()) throw ParseError("field '" + path + "." + reg + "' must be a string");
    t.assign[index_in(cod, reg, "register")] = parse_reg_word(w.get<std::string>(), dom);
  }
  return t;
}

RT output_from_json(const std::string& w, const std::vector<std::string>& dom) {
  return RT{static_cast<int>(dom.size()), {parse_reg_word(w, dom)}};
}

}  // namespace

std::string machine_kind(const std::string& json_text) {
  return get<std::string>(parse_json(json_text), "kind", "");
}

std::string sst_to_json(const SstMachine& m) {
  json j;
  j["kind"] = "sst";
  j["states"] = m.states;
  j["initial"] = m.states.at(m.initial);
  j["registers"] = m.registers;
  j["alphabet_in"] = to_utf8(m.alphabet_in);
  j["alphabet_out"] = to_utf8(m.alphabet_out);
  j["init"] = rt_to_json(m.init, {}, m.registers);
  j["delta"] = json::array();
  for (int q = 0; q < m.num_states(); ++q)
    for (size_t a = 0; a < m.delta[q].size(); ++a)
      j["delta"].push_back({{"state", m.states[q]},
                            {"letter", to_utf8(m.alphabet_in[a])},
                            {"next", m.states[m.delta[q][a].next]},
                            {"assign", rt_to_json(m.delta[q][a].update, m.registers, m.registers)}});
  j["output"] = json::object();
  for (int q = 0; q < m.num_states(); ++q)
    if (m.output[q]) j["output"][m.states[q]] = format_word(m.output[q]->assign.at(0), &m.registers);
  return j.dump(2) + "\n";
}

SstMachine sst_from_json(const std::string& json_text) {
  json j = parse_json(json_text);
  SstMachine m;
  m.states = get<std::vector<std::string>>(j, "states", "");
  m.registers = get<std::vector<std::string>>(j, "registers", "");
  m.initial = index_in(m.states, get<std::string>(j, "initial", ""), "state");
  m.alphabet_in = to_u32(get<std::string>(j, "alphabet_in", ""));
  m.alphabet_out = to_u32(get<std::string>(j, "alphabet_out", ""));
  m.init = rt_from_json(field(j, "init", ""), {}, m.registers, "init");
  std::vector<std::vector<std::optional<SstTransition>>> table(
      m.states.size(), std::vector<std::optional<SstTransition>>(m.alphabet_in.size()));
  const json& delta = field(j, "delta", "");
  for (size_t k = 0; k < delta.size(); ++k) {
    std::string path = "delta[" + std::to_string(k) + "].";
    const json& e = delta[k];
    int q = index_in(m.states, get<std::string>(e, "state", path), "state");
    int a = letter_in(m.alphabet_in, get<std::string>(e, "letter", path), path);
    int next = index_in(m.states, get<std::string>(e, "next", path), "state");
    if (table[q][a]) throw ParseError(path + ": repeated transition");
    table[q][a] = SstTransition{next, rt_from_json(field(e, "assign", path), m.registers, m.registers, path + "assign")};
  }
  for (int q = 0; q < m.num_states(); ++q) {
    std::vector<SstTransition> row;
    for (size_t a = 0; a < m.alphabet_in.size(); ++a) {
      if (!table[q][a])
        throw ParseError("no transition from '" + m.states[q] + "' on '" + to_utf8(m.alphabet_in[a]) + "'");
      row.push_back(*table[q][a]);
    }
    m.delta.push_back(row);
  }
  m.output.assign(m.states.size(), std::nullopt);
  if (j.contains("output"))
    for (const auto& [q, w] : j.at("output").items())
      m.output[index_in(m.states, q, "state")] = output_from_json(w.get<std::string>(), m.registers);
  return m;
}

std::string nd_sst_to_json(const NdSstMachine& m) {
  json j;
  j["kind"] = "nd-sst";
  j["states"] = m.states;
  j["registers"] = m.registers;
  j["alphabet_in"] = to_utf8(m.alphabet_in);
  j["alphabet_out"] = to_utf8(m.alphabet_out);
  j["initial"] = json::array();
  for (const auto& [q, t] : m.initial)
    j["initial"].push_back({{"state", m.states[q]}, {"init", rt_to_json(t, {}, m.registers)}});
  j["delta"] = json::array();
  for (int q = 0; q < m.num_states(); ++q)
    for (size_t a = 0; a < m.delta[q].size(); ++a)
      for (const auto& tr : m.delta[q][a])
        j["delta"].push_back({{"state", m.states[q]},
                              {"letter", to_utf8(m.alphabet_in[a])},
                              {"next", m.states[tr.next]},
                              {"assign", rt_to_json(tr.update, m.registers, m.registers)}});
  j["output"] = json::object();
  for (int q = 0; q < m.num_states(); ++q)
    if (m.output[q]) j["output"][m.states[q]] = format_word(m.output[q]->assign.at(0), &m.registers);
  return j.dump(2) + "\n";
}

NdSstMachine nd_sst_from_json(const std::string& json_text) {
  json j = parse_json(json_text);
  NdSstMachine m;
  m.states = get<std::vector<std::string>>(j, "states", "");
  m.registers = get<std::vector<std::string>>(j, "registers", "");
  m.alphabet_in = to_u32(get<std::string>(j, "alphabet_in", ""));
  m.alphabet_out = to_u32(get<std::string>(j, "alphabet_out", ""));
  const json& initial = field(j, "initial", "");
  for (size_t k = 0; k < initial.size(); ++k) {
    std::string path = "initial[" + std::to_string(k) + "].";
    int q = index_in(m.states, get<std::string>(initial[k], "state", path), "state");
    m.initial.push_back({q, rt_from_json(field(initial[k], "init", path), {}, m.registers, path + "init")});
  }
  m.delta.assign(m.states.size(), std::vector<std::vector<SstTransition>>(m.alphabet_in.size()));
  const json& delta = field(j, "delta", "");
  for (size_t k = 0; k < delta.size(); ++k) {
    std::string path = "delta[" + std::to_string(k) + "].";
    const json& e = delta[k];
    int q = index_in(m.states, get<std::string>(e, "state", path), "state");
    int a = letter_in(m.alphabet_in, get<std::string>(e, "letter", path), path);
    int next = index_in(m.states, get<std::string>(e, "next", path), "state");
    m.delta[q][a].push_back({next, rt_from_json(field(e, "assign", path), m.registers, m.registers, path + "assign")});
  }
  m.output.assign(m.states.size(), std::nullopt);
  if (j.contains("output"))
    for (const auto& [q, w] : j.at("output").items())
      m.output[index_in(m.states, q, "state")] = output_from_json(w.get<std::string>(), m.registers);
  return m;
}

std::string brtt_to_json(const SurBrtt& m) {
  json j;
  j["kind"] = "brtt";
  j["states"] = m.states;
  j["alphabet_in"] = format_ranked_alphabet(m.input);
  j["alphabet_out"] = format_ranked_alphabet(m.output);
  j["registers_tree"] = m.tree_registers;
  j["registers_hole"] = m.hole_registers;
  j["conflict"] = json::array();
  for (const auto& [x, y] : m.conflict.pairs()) j["conflict"].push_back({x, y});
  j["delta"] = json::array();
  for (const auto& [key, rule] : m.delta) {
    json children = json::array();
    for (int q : key.second) children.push_back(m.states[q]);
    json assign = json::object();
    for (const auto& [r, e] : rule.assign) assign[r] = format_expr(e);
    j["delta"].push_back({{"letter", m.input.letters[key.first]},
                          {"children", children},
                          {"next", m.states[rule.next]},
                          {"assign", assign}});
  }
  j["output"] = json::object();
  for (int q = 0; q < m.num_states(); ++q)
    if (m.output_fn[q]) j["output"][m.states[q]] = format_expr(*m.output_fn[q]);
  return j.dump(2) + "\n";
}

SurBrtt brtt_from_json(const std::string& json_text) {
  json j = parse_json(json_text);
  SurBrtt m;
  m.states = get<std::vector<std::string>>(j, "states", "");
  m.input = parse_ranked_alphabet(get<std::string>(j, "alphabet_in", ""));
  m.output = parse_ranked_alphabet(get<std::string>(j, "alphabet_out", ""));
  if (j.contains("registers_tree")) m.tree_registers = get<std::vector<std::string>>(j, "registers_tree", "");
  if (j.contains("registers_hole")) m.hole_registers = get<std::vector<std::string>>(j, "registers_hole", "");
  if (j.contains("conflict"))
    for (const auto& p : get<std::vector<std::vector<std::string>>>(j, "conflict", "")) {
      if (p.size() != 2) throw ParseError("field 'conflict' must list pairs");
      m.conflict.add(p[0], p[1]);
    }
  const json& delta = field(j, "delta", "");
  for (size_t k = 0; k < delta.size(); ++k) {
    std::string path = "delta[" + std::to_string(k) + "].";
    const json& e = delta[k];
    std::string letter = get<std::string>(e, "letter", path);
    int a = m.input.index_of(letter);
    if (a < 0) throw ParseError(path + ": letter '" + letter + "' not in the input alphabet");
    std::vector<int> qs;
    for (const auto& q : get<std::vector<std::string>>(e, "children", path)) qs.push_back(index_in(m.states, q, "state"));
    BrttRule rule{index_in(m.states, get<std::string>(e, "next", path), "state"), {}};
    for (const auto& [r, x] : field(e, "assign", path).items()) rule.assign[r] = parse_expr(x.get<std::string>());
    if (!m.delta.emplace(std::make_pair(a, qs), rule).second) throw ParseError(path + ": repeated transition");
  }
  m.output_fn.assign(m.states.size(), std::nullopt);
  if (j.contains("output"))
    for (const auto& [q, x] : j.at("output").items())
      m.output_fn[index_in(m.states, q, "state")] = parse_expr(x.get<std::string>());
  return m;
}

std::string sst_dot(const SstMachine& m) {
  auto quote = [](const std::string& x) { return json(x).dump(); };
  std::string s = "digraph sst {\n  rankdir=LR;\n";
  for (int q = 0; q < m.num_states(); ++q) {
    std::string label = m.states[q];
    if (m.output[q]) label += "\n" + format_word(m.output[q]->assign.at(0), &m.registers);
    s += "  " + quote(m.states[q]) + " [label=" + quote(label) + (q == m.initial ? ", shape=doublecircle" : "") +
         "];\n";
  }
  for (int q = 0; q < m.num_states(); ++q)
    for (size_t a = 0; a < m.delta[q].size(); ++a) {
      const auto& tr = m.delta[q][a];
      std::string label = to_utf8(m.alphabet_in[a]) + " / " + format_rt(tr.update, &m.registers, &m.registers);
      s += "  " + quote(m.states[q]) + " -> " + quote(m.states[tr.next]) + " [label=" + quote(label) + "];\n";
    }
  return s + "}\n";
}

}  // namespace lsst
