#include "lsst/io.h"

#include <fstream>
#include <sstream>

#include "lsst/error.h"

namespace lsst {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Word parse_cli_word(const std::string& s) {
  Word raw = to_u32(s);
  Word out;
  for (size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == U'\\' && i + 1 < raw.size()) {
      out += raw[++i];
    } else if (raw[i] == U'|') {
      out += U'‖';
    } else {
      out += raw[i];
    }
  }
  return out;
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

bool starts_with_word(const std::string& s, size_t pos, const std::string& w) {
  if (s.compare(pos, w.size(), w) != 0) return false;
  size_t e = pos + w.size();
  return e >= s.size() || !(std::isalnum(static_cast<unsigned char>(s[e])) || s[e] == '_');
}

// Replaces free occurrences of name by value without renaming binders, so
// free letters of a macro refer to the binders around its use.
Term splice(const Term& t, const std::string& name, const Term& value) {
  if (!is_free(t, name)) return t;
  if (t->kind == TermKind::Var) return value;
  std::vector<Term> kids;
  for (size_t i = 0; i < t->kids.size(); ++i) {
    bool bound = false;
    switch (t->kind) {
      case TermKind::LamLin:
      case TermKind::LamBang: bound = t->x == name; break;
      case TermKind::LetTensor: bound = i == 1 && (t->x == name || t->y == name); break;
      case TermKind::Case: bound = (i == 1 && t->x == name) || (i == 2 && t->y == name); break;
      default: break;
    }
    kids.push_back(bound ? t->kids[i] : splice(t->kids[i], name, value));
  }
  return rebuild(t, std::move(kids));
}

}  // namespace

TermFile parse_term_file(const std::string& text) {
  TermFile f;
  std::istringstream lines(text);
  std::string line;
  std::string body;
  while (std::getline(lines, line)) {
    std::string t = trim(line);
    if (t.rfind("--", 0) == 0) {
      std::string c = trim(t.substr(2));
      auto colon = c.find(':');
      if (colon != std::string::npos) {
        std::string key = trim(c.substr(0, colon));
        std::string value = trim(c.substr(colon + 1));
        if (key == "type") f.type = parse_type(value);
        else if (key == "kappa") f.kappa = parse_type(value);
        else if (key == "sigma") f.sigma = string_alphabet(parse_cli_word(value));
        else if (key == "gamma") f.gamma = string_alphabet(parse_cli_word(value));
        else if (key == "sigma-tree") f.sigma = parse_ranked_alphabet(value);
        else if (key == "gamma-tree") f.gamma = parse_ranked_alphabet(value);
      }
      continue;
    }
    body += line + "\n";
  }

  // Macro definitions: def NAME = term ;
  std::vector<std::pair<std::string, Term>> defs;
  size_t pos = 0;
  for (;;) {
    while (pos < body.size() && std::isspace(static_cast<unsigned char>(body[pos]))) ++pos;
    if (!starts_with_word(body, pos, "def")) break;
    size_t eq = body.find('=', pos);
    size_t semi = body.find(';', pos);
    if (eq == std::string::npos || semi == std::string::npos || semi < eq)
      throw ParseError("malformed definition near offset " + std::to_string(pos));
    std::string name = trim(body.substr(pos + 3, eq - pos - 3));
    if (name.empty()) throw ParseError("definition without a name");
    Term value = parse_term(body.substr(eq + 1, semi - eq - 1));
    for (auto it = defs.rbegin(); it != defs.rend(); ++it) value = splice(value, it->first, it->second);
    defs.push_back({name, value});
    pos = semi + 1;
  }
  Term t = parse_term(body.substr(pos));
  for (auto it = defs.rbegin(); it != defs.rend(); ++it) t = splice(t, it->first, it->second);
  f.term = t;
  if (!f.type && f.kappa && f.sigma && f.gamma)
    f.type = t_lin(substitute_type(tree_type(*f.sigma), *f.kappa), tree_type(*f.gamma));
  return f;
}

TermFile load_term_file(const std::string& path) { return parse_term_file(read_file(path)); }

}  // namespace lsst
