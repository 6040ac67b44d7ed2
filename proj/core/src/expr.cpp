#include "cde/expr.hpp"

#include <cctype>

#include "cde/detail/expr_node.hpp"
#include "cde/errors.hpp"

namespace cde {

using Node = CoeffExpr::Node;
using NodePtr = std::shared_ptr<const Node>;

namespace {

NodePtr make(Node::Kind k, NodePtr l = nullptr, NodePtr r = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

NodePtr make_const(const Cplx& c) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Const;
  n->value = c;
  return n;
}

class Parser {
 public:
  Parser(std::string_view src, std::string_view var) : src_(src), var_(var) {}

  NodePtr run() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  std::string_view src_;
  std::string_view var_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(pos_, what); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < src_.size() && src_[pos_] == c;
  }

  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!accept(c)) fail(std::string("expected '") + c + "' (" + what + ")");
  }

  NodePtr expr() {
    NodePtr acc = term();
    for (;;) {
      if (accept('+')) {
        acc = make(Node::Kind::Add, acc, term());
      } else if (accept('-')) {
        acc = make(Node::Kind::Sub, acc, term());
      } else {
        return acc;
      }
    }
  }

  NodePtr term() {
    NodePtr acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = make(Node::Kind::Mul, acc, unary());
      } else if (accept('/')) {
        acc = make(Node::Kind::Div, acc, unary());
      } else {
        return acc;
      }
    }
  }

  NodePtr unary() {
    bool neg = false;
    for (;;) {
      if (accept('-')) {
        neg = !neg;
      } else if (accept('+')) {
        // no-op
      } else {
        break;
      }
    }
    NodePtr f = factor();
    return neg ? make(Node::Kind::Neg, f) : f;
  }

  NodePtr factor() {
    NodePtr b = base();
    if (accept('^')) {
      skip_ws();
      bool neg = false;
      if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) {
        neg = src_[pos_] == '-';
        ++pos_;
      }
      std::size_t start = pos_;
      long v = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        v = v * 10 + (src_[pos_] - '0');
        ++pos_;
      }
      if (pos_ == start) fail("expected integer exponent after '^'");
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Pow;
      n->exponent = neg ? -v : v;
      n->lhs = b;
      return n;
    }
    return b;
  }

  NodePtr base() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')', "to close group");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return ident();
    fail("expected number, variable, function or '('");
  }

  NodePtr number() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // 'e' was not an exponent marker
      }
    }
    if (pos_ == start) fail("malformed number");
    return make_const(Cplx(parse_real(std::string(src_.substr(start, pos_ - start)))));
  }

  NodePtr ident() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    std::string_view name = src_.substr(start, pos_ - start);
    if (name == "i") return make_const(Cplx(Real(0), Real(1)));
    if (name == var_) return make(Node::Kind::Var);
    if (name == "exp" || name == "log") {
      expect('(', "function argument");
      NodePtr a = expr();
      expect(')', "to close function argument");
      return make(name == "exp" ? Node::Kind::Exp : Node::Kind::Log, a);
    }
    pos_ = start;
    fail("unknown identifier '" + std::string(name) + "'");
  }
};

Cplx eval_node(const Node& n, const Cplx& at) {
  switch (n.kind) {
    case Node::Kind::Const:
      return n.value;
    case Node::Kind::Var:
      return at;
    case Node::Kind::Add:
      return eval_node(*n.lhs, at) + eval_node(*n.rhs, at);
    case Node::Kind::Sub:
      return eval_node(*n.lhs, at) - eval_node(*n.rhs, at);
    case Node::Kind::Mul:
      return eval_node(*n.lhs, at) * eval_node(*n.rhs, at);
    case Node::Kind::Div: {
      Cplx d = eval_node(*n.rhs, at);
      if (d.is_zero()) throw EvalError("division by zero at " + to_string(at));
      return eval_node(*n.lhs, at) / d;
    }
    case Node::Kind::Neg:
      return -eval_node(*n.lhs, at);
    case Node::Kind::Pow: {
      Cplx b = eval_node(*n.lhs, at);
      if (n.exponent < 0 && b.is_zero())
        throw EvalError("zero raised to negative power at " + to_string(at));
      return pow(b, n.exponent);
    }
    case Node::Kind::Exp:
      return exp(eval_node(*n.lhs, at));
    case Node::Kind::Log: {
      Cplx v = eval_node(*n.lhs, at);
      if (v.is_zero()) throw EvalError("log of zero at " + to_string(at));
      return log(v);
    }
  }
  throw Error("unreachable expression node kind");
}

bool node_is_constant(const Node& n) {
  switch (n.kind) {
    case Node::Kind::Const:
      return true;
    case Node::Kind::Var:
      return false;
    default:
      return (!n.lhs || node_is_constant(*n.lhs)) && (!n.rhs || node_is_constant(*n.rhs));
  }
}

std::string render(const Node& n, std::string_view var) {
  switch (n.kind) {
    case Node::Kind::Const: {
      const Cplx& c = n.value;
      if (c.im.is_zero()) return to_string(c.re);
      if (c.re.is_zero()) return to_string(c.im) + "*i";
      return "(" + to_string(c.re) + "+" + to_string(c.im) + "*i)";
    }
    case Node::Kind::Var:
      return std::string(var);
    case Node::Kind::Add:
      return "(" + render(*n.lhs, var) + "+" + render(*n.rhs, var) + ")";
    case Node::Kind::Sub:
      return "(" + render(*n.lhs, var) + "-" + render(*n.rhs, var) + ")";
    case Node::Kind::Mul:
      return "(" + render(*n.lhs, var) + "*" + render(*n.rhs, var) + ")";
    case Node::Kind::Div:
      return "(" + render(*n.lhs, var) + "/" + render(*n.rhs, var) + ")";
    case Node::Kind::Neg:
      return "(-" + render(*n.lhs, var) + ")";
    case Node::Kind::Pow:
      return "(" + render(*n.lhs, var) + ")^" + std::to_string(n.exponent);
    case Node::Kind::Exp:
      return "exp(" + render(*n.lhs, var) + ")";
    case Node::Kind::Log:
      return "log(" + render(*n.lhs, var) + ")";
  }
  return "?";
}

}  // namespace

CoeffExpr::CoeffExpr() : node_(make_const(Cplx(0))) {}

CoeffExpr CoeffExpr::parse(std::string_view src, std::string_view var) {
  return CoeffExpr(Parser(src, var).run());
}

CoeffExpr CoeffExpr::constant(const Cplx& c) { return CoeffExpr(make_const(c)); }

CoeffExpr CoeffExpr::variable() { return CoeffExpr(make(Node::Kind::Var)); }

Cplx CoeffExpr::eval(const Cplx& at) const { return eval_node(*node_, at); }

bool CoeffExpr::is_constant() const { return node_is_constant(*node_); }

std::string CoeffExpr::to_string(std::string_view var) const { return render(*node_, var); }

CoeffExpr operator+(const CoeffExpr& a, const CoeffExpr& b) {
  return CoeffExpr(make(Node::Kind::Add, a.node(), b.node()));
}
CoeffExpr operator-(const CoeffExpr& a, const CoeffExpr& b) {
  return CoeffExpr(make(Node::Kind::Sub, a.node(), b.node()));
}
CoeffExpr operator*(const CoeffExpr& a, const CoeffExpr& b) {
  return CoeffExpr(make(Node::Kind::Mul, a.node(), b.node()));
}
CoeffExpr operator/(const CoeffExpr& a, const CoeffExpr& b) {
  return CoeffExpr(make(Node::Kind::Div, a.node(), b.node()));
}
CoeffExpr operator-(const CoeffExpr& a) {
  return CoeffExpr(make(Node::Kind::Neg, a.node()));
}
CoeffExpr CoeffExpr::pow(const CoeffExpr& a, long n) {
  auto node = std::make_shared<Node>();
  node->kind = Node::Kind::Pow;
  node->exponent = n;
  node->lhs = a.node();
  return CoeffExpr(node);
}

}  // namespace cde
