#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "addilope/scalar.hpp"

namespace addilope {

struct parse_error : std::runtime_error {
  parse_error(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
  std::size_t position;
};

struct eval_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExprNode {
  enum class Kind { constant, variable, negate, add, sub, mul, div, pow, min, max };
  Kind kind;
  Rat value;    // constant
  int var = 0;  // variable, 1-based
  std::shared_ptr<const ExprNode> lhs, rhs;  // negate uses lhs only
};
using ExprPtr = std::shared_ptr<const ExprNode>;

struct FuncExpr {
  ExprPtr root;
  int arity = 1;
};

// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' factor)?
//   atom   := number | 'x'digits | '(' expr ')'
//           | ('min'|'max') '(' expr ',' expr ')' | '-' atom
FuncExpr parse_expr(std::string_view text, int arity);

// Fully parenthesized rendering; parse(print(e)) evaluates identically to e.
std::string print_expr(const FuncExpr& e);

// True when the expression evaluates in exact rational arithmetic: every
// exponent is a constant integer (no roots).
bool exact_compatible(const FuncExpr& e);

// Continuous piecewise-linear function of one variable, exact knots.
struct PL1DSpec {
  std::vector<std::pair<Rat, Rat>> knots;  // strictly increasing x, y >= 0
  Rat tail_slope;                          // slope beyond the last knot, >= 0

  PL1DSpec(std::vector<std::pair<Rat, Rat>> k, Rat tail);
};

// JSON form: { "knots": [[x, y], ...], "tail_slope": s } where each number is
// a decimal string ("1.25"), a [num, den] integer pair, or a bare integer.
PL1DSpec load_pl_json(std::istream& in);
PL1DSpec load_pl_json_text(std::string_view text);

class FuncSpec {
public:
  static FuncSpec from_expr(FuncExpr e, std::string name = {});
  static FuncSpec from_pl(PL1DSpec pl, std::string name = {});
  // base(x1) + x2 + ... + xn for a one-variable base.
  static FuncSpec lift(FuncSpec base, int arity);

  int arity() const { return arity_; }
  const std::string& name() const { return name_; }

  template <Scalar S>
  S eval(std::span<const S> point) const;

  template <Scalar S>
  S eval(const std::vector<S>& point) const {
    return eval(std::span<const S>(point));
  }

  bool exact_compatible() const;

  const PL1DSpec* pl() const { return std::get_if<PL1DSpec>(&body_); }
  const FuncExpr* expr() const { return std::get_if<FuncExpr>(&body_); }
  const FuncSpec* lifted_base() const {
    auto* l = std::get_if<Lift>(&body_);
    return l ? l->base.get() : nullptr;
  }

private:
  struct Lift {
    std::shared_ptr<const FuncSpec> base;
  };

  FuncSpec() = default;

  int arity_ = 1;
  std::string name_;
  std::variant<FuncExpr, PL1DSpec, Lift> body_{FuncExpr{}};
};

using ParamMap = std::map<std::string, Rat, std::less<>>;

// Looks up a builtin by name. The name may carry inline arguments,
// e.g. "power(2)", "linear(2,3)", "lifted(example1_A)"; numeric arguments
// bind to the entry's parameters in declaration order. `arity` selects the
// dimension for entries that accept any (linear, lifted); 0 means default.
FuncSpec catalog_get(std::string_view name, const ParamMap& params = {},
                     int arity = 0);

std::vector<std::string> catalog_names();

}  // namespace addilope
