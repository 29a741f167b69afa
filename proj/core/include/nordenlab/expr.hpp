#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nordenlab/jet.hpp"

namespace nordenlab {

/// Syntax error in a coordinate expression; position is a 0-based byte offset.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// An identifier that does not name a chart coordinate.
class BindError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Func { sin, cos, exp };

struct ExprNode {
  enum class Kind { number, identifier, neg, add, sub, mul, div, pow, call };
  Kind kind;
  double number = 0.0;
  std::string name;
  unsigned exponent = 0;
  Func func = Func::sin;
  std::shared_ptr<const ExprNode> lhs;
  std::shared_ptr<const ExprNode> rhs;
};

class BoundExpression;

/// Immutable AST of a coordinate expression.
///
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := '-' factor | base ('^' uint)?
///   base   := number | ident | '(' expr ')' | func '(' expr ')'
///   func   := 'sin' | 'cos' | 'exp'
class Expression {
 public:
  explicit Expression(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}

  const ExprNode& root() const { return *root_; }
  /// Fully parenthesised form that reparses to an equal AST.
  std::string str() const;
  /// Resolves identifiers against the chart coordinates; throws BindError.
  BoundExpression bind(std::span<const std::string> coordinates) const;

  friend bool operator==(const Expression& a, const Expression& b);

 private:
  std::shared_ptr<const ExprNode> root_;
};

Expression parse(std::string_view source);

/// An expression compiled to a postfix program over coordinate indices.
class BoundExpression {
 public:
  BoundExpression() = default;

  const Expression& expression() const { return *expression_; }
  std::size_t arity() const { return arity_; }

  double eval(std::span<const double> point) const;
  /// Evaluates with each coordinate replaced by the matching input jet.
  Jet eval(std::span<const Jet> inputs) const;

 private:
  friend class Expression;
  enum class Op : std::uint8_t { constant, variable, neg, add, sub, mul, div, pow, sin, cos, exp };
  struct Instr {
    Op op;
    double value = 0.0;
    std::size_t index = 0;
    unsigned exponent = 0;
  };

  template <class T, class MakeConst>
  T run(std::span<const T> inputs, MakeConst make_const) const;

  std::shared_ptr<const Expression> expression_;
  std::vector<Instr> program_;
  std::size_t arity_ = 0;
};

/// Value and all partials of order <= `order` of `e` at `point`.
Jet eval_jet(const BoundExpression& e, std::span<const double> point, int order);

}  // namespace nordenlab
