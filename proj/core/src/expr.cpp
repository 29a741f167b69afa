#include "nordenlab/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>

namespace nordenlab {

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error(message + " at position " + std::to_string(position)), position_(position) {}

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

struct Token {
  enum class Kind { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };
  Kind kind;
  std::size_t pos;
  std::string text;
  double number = 0.0;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      while (i < src.size() && (std::isdigit(static_cast<unsigned char>(src[i])) || src[i] == '.')) ++i;
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
          i = j;
          while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
        }
      }
      Token t{Token::Kind::number, start, std::string(src.substr(start, i - start))};
      const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
      if (res.ec != std::errc() || res.ptr != t.text.data() + t.text.size())
        throw ParseError("malformed number '" + t.text + "'", start);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) ++i;
      out.push_back({Token::Kind::ident, start, std::string(src.substr(start, i - start))});
      continue;
    }
    Token::Kind kind;
    switch (c) {
      case '+': kind = Token::Kind::plus; break;
      case '-': kind = Token::Kind::minus; break;
      case '*': kind = Token::Kind::star; break;
      case '/': kind = Token::Kind::slash; break;
      case '^': kind = Token::Kind::caret; break;
      case '(': kind = Token::Kind::lparen; break;
      case ')': kind = Token::Kind::rparen; break;
      default: throw ParseError(std::string("unknown token '") + c + "'", start);
    }
    out.push_back({kind, start, std::string(1, c)});
    ++i;
  }
  out.push_back({Token::Kind::end, src.size(), ""});
  return out;
}

bool is_function_name(const std::string& s) { return s == "sin" || s == "cos" || s == "exp"; }

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  NodePtr parse_all() {
    NodePtr e = expr();
    if (peek().kind == Token::Kind::rparen) throw ParseError("unbalanced parenthesis", peek().pos);
    if (peek().kind != Token::Kind::end) throw ParseError("unexpected token '" + peek().text + "'", peek().pos);
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() { return tokens_[pos_++]; }

  static NodePtr binary(ExprNode::Kind kind, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<ExprNode>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (peek().kind == Token::Kind::plus || peek().kind == Token::Kind::minus) {
      const auto kind = take().kind == Token::Kind::plus ? ExprNode::Kind::add : ExprNode::Kind::sub;
      lhs = binary(kind, lhs, term());
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = factor();
    while (peek().kind == Token::Kind::star || peek().kind == Token::Kind::slash) {
      const auto kind = take().kind == Token::Kind::star ? ExprNode::Kind::mul : ExprNode::Kind::div;
      lhs = binary(kind, lhs, factor());
    }
    return lhs;
  }

  NodePtr factor() {
    if (peek().kind == Token::Kind::minus) {
      take();
      auto n = std::make_shared<ExprNode>();
      n->kind = ExprNode::Kind::neg;
      n->lhs = factor();
      return n;
    }
    NodePtr b = base();
    if (peek().kind == Token::Kind::caret) {
      take();
      const Token& t = peek();
      const bool is_uint = t.kind == Token::Kind::number &&
                           t.text.find_first_not_of("0123456789") == std::string::npos;
      if (!is_uint) throw ParseError("exponent must be a nonnegative integer", t.pos);
      take();
      auto n = std::make_shared<ExprNode>();
      n->kind = ExprNode::Kind::pow;
      n->lhs = b;
      n->exponent = static_cast<unsigned>(t.number);
      return n;
    }
    return b;
  }

  NodePtr base() {
    const Token& t = take();
    switch (t.kind) {
      case Token::Kind::number: {
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprNode::Kind::number;
        n->number = t.number;
        return n;
      }
      case Token::Kind::ident: {
        if (is_function_name(t.text)) {
          if (peek().kind != Token::Kind::lparen) throw ParseError("expected '(' after " + t.text, peek().pos);
          const std::size_t open = take().pos;
          auto n = std::make_shared<ExprNode>();
          n->kind = ExprNode::Kind::call;
          n->func = t.text == "sin" ? Func::sin : t.text == "cos" ? Func::cos : Func::exp;
          n->lhs = expr();
          close(open);
          return n;
        }
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprNode::Kind::identifier;
        n->name = t.text;
        return n;
      }
      case Token::Kind::lparen: {
        NodePtr inner = expr();
        close(t.pos);
        return inner;
      }
      case Token::Kind::rparen: throw ParseError("unbalanced parenthesis", t.pos);
      case Token::Kind::end: throw ParseError("unexpected end of expression", t.pos);
      default: throw ParseError("unexpected token '" + t.text + "'", t.pos);
    }
  }

  void close(std::size_t open) {
    if (peek().kind != Token::Kind::rparen) {
      if (peek().kind == Token::Kind::end) throw ParseError("unbalanced parenthesis", open);
      throw ParseError("expected ')' but found '" + peek().text + "'", peek().pos);
    }
    take();
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::string number_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print(const ExprNode& n, std::string& out) {
  using K = ExprNode::Kind;
  switch (n.kind) {
    case K::number: out += number_text(n.number); return;
    case K::identifier: out += n.name; return;
    case K::neg:
      out += "-(";
      print(*n.lhs, out);
      out += ")";
      return;
    case K::pow:
      out += "(";
      print(*n.lhs, out);
      out += ")^" + std::to_string(n.exponent);
      return;
    case K::call:
      out += n.func == Func::sin ? "sin(" : n.func == Func::cos ? "cos(" : "exp(";
      print(*n.lhs, out);
      out += ")";
      return;
    default: {
      const char* op = n.kind == K::add ? " + " : n.kind == K::sub ? " - " : n.kind == K::mul ? " * " : " / ";
      out += "(";
      print(*n.lhs, out);
      out += op;
      print(*n.rhs, out);
      out += ")";
    }
  }
}

bool equal(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  using K = ExprNode::Kind;
  switch (a.kind) {
    case K::number: return a.number == b.number;
    case K::identifier: return a.name == b.name;
    case K::neg: return equal(*a.lhs, *b.lhs);
    case K::pow: return a.exponent == b.exponent && equal(*a.lhs, *b.lhs);
    case K::call: return a.func == b.func && equal(*a.lhs, *b.lhs);
    default: return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
  }
}

}  // namespace

Expression parse(std::string_view source) { return Expression(Parser(tokenize(source)).parse_all()); }

std::string Expression::str() const {
  std::string out;
  print(*root_, out);
  return out;
}

bool operator==(const Expression& a, const Expression& b) { return equal(*a.root_, *b.root_); }

BoundExpression Expression::bind(std::span<const std::string> coordinates) const {
  BoundExpression bound;
  bound.expression_ = std::make_shared<const Expression>(*this);
  bound.arity_ = coordinates.size();
  using Op = BoundExpression::Op;
  using K = ExprNode::Kind;
  std::function<void(const ExprNode&)> emit = [&](const ExprNode& n) {
    switch (n.kind) {
      case K::number: bound.program_.push_back({Op::constant, n.number}); return;
      case K::identifier: {
        for (std::size_t i = 0; i < coordinates.size(); ++i) {
          if (coordinates[i] == n.name) {
            bound.program_.push_back({Op::variable, 0.0, i});
            return;
          }
        }
        throw BindError("unbound identifier '" + n.name + "'");
      }
      case K::neg: emit(*n.lhs); bound.program_.push_back({Op::neg}); return;
      case K::pow: emit(*n.lhs); bound.program_.push_back({Op::pow, 0.0, 0, n.exponent}); return;
      case K::call:
        emit(*n.lhs);
        bound.program_.push_back({n.func == Func::sin ? Op::sin : n.func == Func::cos ? Op::cos : Op::exp});
        return;
      default:
        emit(*n.lhs);
        emit(*n.rhs);
        bound.program_.push_back({n.kind == K::add ? Op::add : n.kind == K::sub ? Op::sub : n.kind == K::mul ? Op::mul : Op::div});
    }
  };
  emit(*root_);
  return bound;
}

namespace {

double ipow(double b, unsigned e) {
  double r = 1.0;
  while (e > 0) {
    if (e & 1U) r *= b;
    e >>= 1U;
    if (e > 0) b *= b;
  }
  return r;
}

double divide(double a, double b) {
  if (b == 0.0) throw DomainError("division by zero at evaluation point");
  return a / b;
}

}  // namespace

template <class T, class MakeConst>
T BoundExpression::run(std::span<const T> inputs, MakeConst make_const) const {
  if (inputs.size() != arity_) throw std::invalid_argument("expression evaluated with wrong number of coordinates");
  std::vector<T> stack;
  stack.reserve(program_.size());
  for (const Instr& ins : program_) {
    switch (ins.op) {
      case Op::constant: stack.push_back(make_const(ins.value)); break;
      case Op::variable: stack.push_back(inputs[ins.index]); break;
      case Op::neg: stack.back() = -stack.back(); break;
      case Op::pow: {
        using std::pow;
        if constexpr (std::is_same_v<T, double>) {
          stack.back() = ipow(stack.back(), ins.exponent);
        } else {
          stack.back() = pow(stack.back(), ins.exponent);
        }
        break;
      }
      case Op::sin: { using std::sin; stack.back() = sin(stack.back()); break; }
      case Op::cos: { using std::cos; stack.back() = cos(stack.back()); break; }
      case Op::exp: { using std::exp; stack.back() = exp(stack.back()); break; }
      default: {
        T rhs = std::move(stack.back());
        stack.pop_back();
        T& lhs = stack.back();
        switch (ins.op) {
          case Op::add: lhs = lhs + rhs; break;
          case Op::sub: lhs = lhs - rhs; break;
          case Op::mul: lhs = lhs * rhs; break;
          default:
            if constexpr (std::is_same_v<T, double>) {
              lhs = divide(lhs, rhs);
            } else {
              lhs = lhs / rhs;
            }
        }
      }
    }
  }
  return stack.back();
}

double BoundExpression::eval(std::span<const double> point) const {
  return run<double>(point, [](double v) { return v; });
}

Jet BoundExpression::eval(std::span<const Jet> inputs) const {
  if (inputs.empty()) {
    throw std::invalid_argument("jet evaluation needs at least one coordinate");
  }
  const Jet& like = inputs.front();
  return run<Jet>(inputs, [&](double v) { return Jet::constant_like(like, v); });
}

Jet eval_jet(const BoundExpression& e, std::span<const double> point, int order) {
  const auto seeds = seed_variables(point, order);
  return e.eval(std::span<const Jet>(seeds));
}

}  // namespace nordenlab
