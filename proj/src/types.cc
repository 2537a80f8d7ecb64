#include <cctype>

#include "lsst/error.h"
#include "lsst/lambda.h"

namespace lsst {

namespace {

Type make(TypeKind k, Type l = nullptr, Type r = nullptr) {
  return std::make_shared<const TypeNode>(TypeNode{k, std::move(l), std::move(r)});
}

bool is_binary(TypeKind k) {
  switch (k) {
    case TypeKind::Lin:
    case TypeKind::Arrow:
    case TypeKind::Tensor:
    case TypeKind::With:
    case TypeKind::Plus:
      return true;
    default:
      return false;
  }
}

// Precedence levels: arrows 0 (right assoc), + 1, & 2, * 3, atoms 4.
int level(TypeKind k) {
  switch (k) {
    case TypeKind::Lin:
    case TypeKind::Arrow:
      return 0;
    case TypeKind::Plus:
      return 1;
    case TypeKind::With:
      return 2;
    case TypeKind::Tensor:
      return 3;
    default:
      return 4;
  }
}

void format_into(const Type& t, int min_level, std::string& out) {
  int l = level(t->kind);
  bool paren = l < min_level;
  if (paren) out += '(';
  switch (t->kind) {
    case TypeKind::Base: out += 'o'; break;
    case TypeKind::One: out += '1'; break;
    case TypeKind::Top: out += 'T'; break;
    case TypeKind::Zero: out += '0'; break;
    default: {
      const char* op = "";
      switch (t->kind) {
        case TypeKind::Lin: op = " -o "; break;
        case TypeKind::Arrow: op = " -> "; break;
        case TypeKind::Tensor: op = " * "; break;
        case TypeKind::With: op = " & "; break;
        case TypeKind::Plus: op = " + "; break;
        default: break;
      }
      // Binary connectives associate to the right.
      format_into(t->left, l + 1, out);
      out += op;
      format_into(t->right, l, out);
      break;
    }
  }
  if (paren) out += ')';
}

class TypeParser {
 public:
  explicit TypeParser(const std::string& s) : s_(s) {}

  Type parse_all() {
    Type t = parse_arrow();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg + " at offset " + std::to_string(pos_) + " in type '" + s_ + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(const std::string& tok) {
    skip();
    if (s_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  Type parse_arrow() {
    Type l = parse_plus();
    if (eat("-o")) return t_lin(l, parse_arrow());
    if (eat("->")) return t_arrow(l, parse_arrow());
    return l;
  }
  Type parse_plus() {
    Type l = parse_with();
    if (eat("+")) return t_plus(l, parse_plus());
    return l;
  }
  Type parse_with() {
    Type l = parse_tensor();
    if (eat("&")) return t_with(l, parse_with());
    return l;
  }
  Type parse_tensor() {
    Type l = parse_atom();
    if (eat("*")) return t_tensor(l, parse_tensor());
    return l;
  }
  Type parse_atom() {
    skip();
    if (eat("(")) {
      Type t = parse_arrow();
      if (!eat(")")) fail("expected ')'");
      return t;
    }
    if (eat("o")) return t_base();
    if (eat("1")) return t_one();
    if (eat("T")) return t_top();
    if (eat("0")) return t_zero();
    fail("expected a type");
  }

  const std::string& s_;
  size_t pos_ = 0;
};

}  // namespace

Type t_base() {
  static const Type t = make(TypeKind::Base);
  return t;
}
Type t_one() {
  static const Type t = make(TypeKind::One);
  return t;
}
Type t_top() {
  static const Type t = make(TypeKind::Top);
  return t;
}
Type t_zero() {
  static const Type t = make(TypeKind::Zero);
  return t;
}
Type t_lin(Type a, Type b) { return make(TypeKind::Lin, std::move(a), std::move(b)); }
Type t_arrow(Type a, Type b) { return make(TypeKind::Arrow, std::move(a), std::move(b)); }
Type t_tensor(Type a, Type b) { return make(TypeKind::Tensor, std::move(a), std::move(b)); }
Type t_with(Type a, Type b) { return make(TypeKind::With, std::move(a), std::move(b)); }
Type t_plus(Type a, Type b) { return make(TypeKind::Plus, std::move(a), std::move(b)); }

bool type_equal(const Type& a, const Type& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  if (!is_binary(a->kind)) return true;
  return type_equal(a->left, b->left) && type_equal(a->right, b->right);
}

std::string format_type(const Type& t) {
  std::string out;
  format_into(t, 0, out);
  return out;
}

Type parse_type(const std::string& text) { return TypeParser(text).parse_all(); }

bool is_purely_linear(const Type& t) {
  if (t->kind == TypeKind::Arrow) return false;
  if (!is_binary(t->kind)) return true;
  return is_purely_linear(t->left) && is_purely_linear(t->right);
}

Type substitute_type(const Type& t, const Type& kappa) {
  if (t->kind == TypeKind::Base) return kappa;
  if (!is_binary(t->kind)) return t;
  return make(t->kind, substitute_type(t->left, kappa), substitute_type(t->right, kappa));
}

}  // namespace lsst
