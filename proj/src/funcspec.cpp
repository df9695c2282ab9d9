#include "addilope/funcspec.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <istream>
#include <sstream>

#include "json.hpp"

namespace addilope {

namespace {

ExprPtr node(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

ExprPtr constant(Rat v) {
  ExprNode n;
  n.kind = ExprNode::Kind::constant;
  n.value = v;
  return node(std::move(n));
}

ExprPtr variable(int idx) {
  ExprNode n;
  n.kind = ExprNode::Kind::variable;
  n.var = idx;
  return node(std::move(n));
}

ExprPtr unary(ExprNode::Kind k, ExprPtr a) {
  ExprNode n;
  n.kind = k;
  n.lhs = std::move(a);
  return node(std::move(n));
}

ExprPtr binary(ExprNode::Kind k, ExprPtr a, ExprPtr b) {
  ExprNode n;
  n.kind = k;
  n.lhs = std::move(a);
  n.rhs = std::move(b);
  return node(std::move(n));
}

class Parser {
public:
  Parser(std::string_view text, int arity) : text_(text), arity_(arity) {}

  ExprPtr run() {
    if (arity_ < 1) throw parse_error("arity must be >= 1", 0);
    skip_ws();
    if (at_end()) throw parse_error("empty expression", 0);
    ExprPtr e = expr();
    skip_ws();
    if (!at_end()) throw parse_error("unexpected trailing input", pos_);
    return e;
  }

private:
  ExprPtr expr() {
    ExprPtr lhs = term();
    for (;;) {
      skip_ws();
      if (accept('+'))
        lhs = binary(ExprNode::Kind::add, std::move(lhs), term());
      else if (accept('-'))
        lhs = binary(ExprNode::Kind::sub, std::move(lhs), term());
      else
        return lhs;
    }
  }

  ExprPtr term() {
    ExprPtr lhs = factor();
    for (;;) {
      skip_ws();
      if (accept('*'))
        lhs = binary(ExprNode::Kind::mul, std::move(lhs), factor());
      else if (accept('/'))
        lhs = binary(ExprNode::Kind::div, std::move(lhs), factor());
      else
        return lhs;
    }
  }

  ExprPtr factor() {
    ExprPtr base = atom();
    skip_ws();
    if (accept('^'))
      return binary(ExprNode::Kind::pow, std::move(base), factor());
    return base;
  }

  ExprPtr atom() {
    skip_ws();
    if (at_end()) throw parse_error("expected an operand", pos_);
    char c = text_[pos_];
    if (c == '-') {
      ++pos_;
      return unary(ExprNode::Kind::negate, atom());
    }
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (c == 'x') return var_ref();
    if (text_.substr(pos_, 3) == "min" || text_.substr(pos_, 3) == "max") {
      bool is_min = text_[pos_] == 'm' && text_[pos_ + 1] == 'i';
      pos_ += 3;
      skip_ws();
      expect('(');
      ExprPtr a = expr();
      skip_ws();
      expect(',');
      ExprPtr b = expr();
      skip_ws();
      expect(')');
      return binary(is_min ? ExprNode::Kind::min : ExprNode::Kind::max,
                    std::move(a), std::move(b));
    }
    throw parse_error(std::string("unexpected character '") + c + "'", pos_);
  }

  ExprPtr number() {
    std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (!at_end() && text_[pos_] == '.') {
      ++pos_;
      if (at_end() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        throw parse_error("expected digits after decimal point", pos_);
      while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    try {
      return constant(Rat::parse(text_.substr(start, pos_ - start)));
    } catch (const std::overflow_error&) {
      throw parse_error("number literal too large", start);
    }
  }

  ExprPtr var_ref() {
    std::size_t start = pos_;
    ++pos_;  // 'x'
    if (at_end() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      throw parse_error("expected a variable index after 'x'", pos_);
    long long idx = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      idx = idx * 10 + (text_[pos_] - '0');
      if (idx > 1'000'000) throw parse_error("variable index too large", start);
      ++pos_;
    }
    if (idx < 1 || idx > arity_)
      throw parse_error("variable x" + std::to_string(idx) +
                            " out of range for arity " + std::to_string(arity_),
                        start);
    return variable(static_cast<int>(idx));
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  bool accept(char c) {
    if (!at_end() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    skip_ws();
    if (!accept(c))
      throw parse_error(std::string("expected '") + c + "'", pos_);
  }

  std::string_view text_;
  int arity_;
  std::size_t pos_ = 0;
};

void print_node(const ExprNode& n, std::string& out) {
  using K = ExprNode::Kind;
  auto bin = [&](const char* op) {
    out += '(';
    print_node(*n.lhs, out);
    out += op;
    print_node(*n.rhs, out);
    out += ')';
  };
  switch (n.kind) {
    case K::constant:
      if (n.value.is_integer() && n.value.num() >= 0) {
        out += n.value.str();
      } else {
        out += '(';
        out += std::to_string(n.value.num());
        out += '/';
        out += std::to_string(n.value.den());
        out += ')';
      }
      break;
    case K::variable:
      out += 'x';
      out += std::to_string(n.var);
      break;
    case K::negate:
      out += "(-";
      print_node(*n.lhs, out);
      out += ')';
      break;
    case K::add: bin("+"); break;
    case K::sub: bin("-"); break;
    case K::mul: bin("*"); break;
    case K::div: bin("/"); break;
    case K::pow: bin("^"); break;
    case K::min:
    case K::max:
      out += n.kind == K::min ? "min(" : "max(";
      print_node(*n.lhs, out);
      out += ',';
      print_node(*n.rhs, out);
      out += ')';
      break;
  }
}

bool node_exact_compatible(const ExprNode& n) {
  using K = ExprNode::Kind;
  if (n.kind == K::pow) {
    if (n.rhs->kind != K::constant || !n.rhs->value.is_integer()) return false;
    return node_exact_compatible(*n.lhs);
  }
  if (n.lhs && !node_exact_compatible(*n.lhs)) return false;
  if (n.rhs && !node_exact_compatible(*n.rhs)) return false;
  return true;
}

template <Scalar S>
S eval_node(const ExprNode& n, std::span<const S> pt) {
  using K = ExprNode::Kind;
  switch (n.kind) {
    case K::constant: return scalar_ops<S>::from_rat(n.value);
    case K::variable: return pt[static_cast<std::size_t>(n.var - 1)];
    case K::negate: return -eval_node(*n.lhs, pt);
    case K::add: return eval_node(*n.lhs, pt) + eval_node(*n.rhs, pt);
    case K::sub: return eval_node(*n.lhs, pt) - eval_node(*n.rhs, pt);
    case K::mul: return eval_node(*n.lhs, pt) * eval_node(*n.rhs, pt);
    case K::div: {
      S denom = eval_node(*n.rhs, pt);
      if (denom == scalar_ops<S>::from_int(0))
        throw eval_error("division by zero");
      return eval_node(*n.lhs, pt) / denom;
    }
    case K::pow: {
      S base = eval_node(*n.lhs, pt);
      S exp = eval_node(*n.rhs, pt);
      if constexpr (is_exact_v<S>) {
        if (!exp.is_integer())
          throw eval_error("exact evaluation requires integer exponents");
        if (base.is_zero() && exp.num() < 0)
          throw eval_error("zero raised to a negative power");
        return base.pow_int(exp.num());
      } else {
        double v = std::pow(base, exp);
        if (!std::isfinite(v))
          throw eval_error("power produced a non-finite value");
        return v;
      }
    }
    case K::min: {
      S a = eval_node(*n.lhs, pt), b = eval_node(*n.rhs, pt);
      return a < b ? a : b;
    }
    case K::max: {
      S a = eval_node(*n.lhs, pt), b = eval_node(*n.rhs, pt);
      return a < b ? b : a;
    }
  }
  throw eval_error("corrupt expression node");
}

template <Scalar S>
S pl_eval(const PL1DSpec& pl, const S& x) {
  auto cv = [](const Rat& r) { return scalar_ops<S>::from_rat(r); };
  const auto& ks = pl.knots;
  if (x < cv(ks.front().first))
    throw eval_error("point below the first knot of a piecewise-linear spec");
  // Last knot whose x-coordinate is <= x.
  std::size_t i = 0;
  while (i + 1 < ks.size() && !(x < cv(ks[i + 1].first))) ++i;
  S x0 = cv(ks[i].first), y0 = cv(ks[i].second);
  if (i + 1 == ks.size())
    return y0 + (x - x0) * cv(pl.tail_slope);
  S slope = (cv(ks[i + 1].second) - y0) / (cv(ks[i + 1].first) - x0);
  return y0 + (x - x0) * slope;
}

template <Scalar S>
std::string point_str(std::span<const S> pt) {
  std::string s = "(";
  for (std::size_t i = 0; i < pt.size(); ++i) {
    if (i) s += ", ";
    s += scalar_str(pt[i]);
  }
  return s + ")";
}

}  // namespace

FuncExpr parse_expr(std::string_view text, int arity) {
  if (text.empty()) throw parse_error("empty expression", 0);
  Parser p(text, arity);
  return FuncExpr{p.run(), arity};
}

std::string print_expr(const FuncExpr& e) {
  std::string out;
  print_node(*e.root, out);
  return out;
}

bool exact_compatible(const FuncExpr& e) { return node_exact_compatible(*e.root); }

PL1DSpec::PL1DSpec(std::vector<std::pair<Rat, Rat>> k, Rat tail)
    : knots(std::move(k)), tail_slope(tail) {
  if (knots.empty()) throw std::invalid_argument("piecewise-linear spec needs at least one knot");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (knots[i].first < Rat(0) || knots[i].second < Rat(0))
      throw std::invalid_argument("piecewise-linear knots must be non-negative");
    if (i > 0 && !(knots[i - 1].first < knots[i].first))
      throw std::invalid_argument("piecewise-linear knots must be strictly increasing in x");
  }
  if (tail_slope < Rat(0))
    throw std::invalid_argument("piecewise-linear tail slope must be non-negative");
}

FuncSpec FuncSpec::from_expr(FuncExpr e, std::string name) {
  FuncSpec f;
  f.arity_ = e.arity;
  f.name_ = std::move(name);
  f.body_ = std::move(e);
  return f;
}

FuncSpec FuncSpec::from_pl(PL1DSpec pl, std::string name) {
  FuncSpec f;
  f.arity_ = 1;
  f.name_ = std::move(name);
  f.body_ = std::move(pl);
  return f;
}

FuncSpec FuncSpec::lift(FuncSpec base, int arity) {
  if (base.arity() != 1)
    throw std::invalid_argument("only one-variable functions can be lifted");
  if (arity < 1) throw std::invalid_argument("lift arity must be >= 1");
  FuncSpec f;
  f.arity_ = arity;
  f.name_ = "lifted(" + (base.name().empty() ? std::string("fn") : base.name()) + ")";
  f.body_ = Lift{std::make_shared<const FuncSpec>(std::move(base))};
  return f;
}

template <Scalar S>
S FuncSpec::eval(std::span<const S> point) const {
  if (static_cast<int>(point.size()) != arity_)
    throw eval_error("point arity does not match function arity");
  for (const S& c : point)
    if (c < scalar_ops<S>::from_int(0) || !scalar_ops<S>::is_valid(c))
      throw eval_error("point outside the domain [0,inf)^n: " + point_str(point));
  S result = scalar_ops<S>::from_int(0);
  try {
    if (const FuncExpr* e = std::get_if<FuncExpr>(&body_)) {
      result = eval_node<S>(*e->root, point);
    } else if (const PL1DSpec* pl = std::get_if<PL1DSpec>(&body_)) {
      result = pl_eval<S>(*pl, point[0]);
    } else {
      const Lift& l = std::get<Lift>(body_);
      result = l.base->eval(point.subspan(0, 1));
      for (std::size_t i = 1; i < point.size(); ++i) result = result + point[i];
    }
  } catch (const eval_error& err) {
    throw eval_error(std::string(err.what()) + " at " + point_str(point));
  } catch (const std::domain_error& err) {
    throw eval_error(std::string(err.what()) + " at " + point_str(point));
  }
  if (!scalar_ops<S>::is_valid(result) || result < scalar_ops<S>::from_int(0))
    throw eval_error("negative or non-finite value " + scalar_str(result) +
                     " at " + point_str(point));
  return result;
}

template double FuncSpec::eval<double>(std::span<const double>) const;
template Rat FuncSpec::eval<Rat>(std::span<const Rat>) const;

bool FuncSpec::exact_compatible() const {
  if (const FuncExpr* e = std::get_if<FuncExpr>(&body_))
    return addilope::exact_compatible(*e);
  if (const FuncSpec* base = lifted_base()) return base->exact_compatible();
  return true;  // piecewise-linear specs are exact by construction
}

namespace {

struct NameAndArgs {
  std::string name;
  std::vector<std::string> args;
};

NameAndArgs split_name(std::string_view full) {
  NameAndArgs out;
  auto open = full.find('(');
  if (open == std::string_view::npos) {
    out.name = std::string(full);
    return out;
  }
  if (full.back() != ')')
    throw std::invalid_argument("malformed catalog name: " + std::string(full));
  out.name = std::string(full.substr(0, open));
  std::string_view inner = full.substr(open + 1, full.size() - open - 2);
  // split at top-level commas only; lifted(...) may nest
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= inner.size(); ++i) {
    if (i == inner.size() || (inner[i] == ',' && depth == 0)) {
      auto piece = inner.substr(start, i - start);
      while (!piece.empty() && piece.front() == ' ') piece.remove_prefix(1);
      while (!piece.empty() && piece.back() == ' ') piece.remove_suffix(1);
      if (!piece.empty()) out.args.emplace_back(piece);
      start = i + 1;
    } else if (i < inner.size() && inner[i] == '(') {
      ++depth;
    } else if (i < inner.size() && inner[i] == ')') {
      --depth;
    }
  }
  return out;
}

Rat require_param(const ParamMap& params, const std::vector<std::string>& args,
                  std::size_t arg_pos, const std::string& key) {
  if (arg_pos < args.size()) return Rat::parse(args[arg_pos]);
  if (auto it = params.find(key); it != params.end()) return it->second;
  throw std::invalid_argument("missing parameter '" + key + "'");
}

ExprPtr pow_const(ExprPtr base, Rat exponent) {
  return binary(ExprNode::Kind::pow, std::move(base), constant(exponent));
}

}  // namespace

FuncSpec catalog_get(std::string_view name, const ParamMap& params, int arity) {
  auto [id, args] = split_name(name);

  auto fixed_arity = [&](int n) {
    if (arity != 0 && arity != n)
      throw std::invalid_argument("catalog entry '" + id + "' has arity " +
                                  std::to_string(n));
    return n;
  };

  if (id == "example1_A") {
    fixed_arity(1);
    return FuncSpec::from_pl(
        PL1DSpec({{Rat(0), Rat(0)}, {Rat(4), Rat(4)}, {Rat(6), Rat(5)}, {Rat(12), Rat(10)}},
                 Rat(5, 4)),
        "example1_A");
  }
  if (id == "example1_f") {
    fixed_arity(1);
    return FuncSpec::from_pl(
        PL1DSpec({{Rat(0), Rat(0)}, {Rat(4), Rat(4)}, {Rat(6), Rat(5)}}, Rat(5, 6)),
        "example1_f");
  }
  if (id == "example1_g") {
    fixed_arity(1);
    return FuncSpec::from_pl(PL1DSpec({{Rat(0), Rat(0)}, {Rat(20), Rat(20)}}, Rat(5, 4)),
                             "example1_g");
  }
  if (id == "product_minus_one") {
    fixed_arity(2);
    return FuncSpec::from_expr(parse_expr("(x1+1)*(x2+1) - 1", 2), "product_minus_one");
  }
  if (id == "skew_quadratic") {
    fixed_arity(2);
    return FuncSpec::from_expr(parse_expr("(x1-x2)^2 + 4*x2^2", 2), "skew_quadratic");
  }
  if (id == "skew_quad_strict") {
    fixed_arity(2);
    return FuncSpec::from_expr(parse_expr("x1^2 + x2^2 + x1*x2", 2), "skew_quad_strict");
  }
  if (id == "power") {
    fixed_arity(1);
    Rat p = require_param(params, args, 0, "p");
    FuncExpr e{pow_const(variable(1), p), 1};
    return FuncSpec::from_expr(std::move(e), "power(" + p.str() + ")");
  }
  if (id == "sqrt") {
    fixed_arity(1);
    FuncExpr e{pow_const(variable(1), Rat(1, 2)), 1};
    return FuncSpec::from_expr(std::move(e), "sqrt");
  }
  if (id == "linear") {
    // slopes from inline args, from c1..cn, or a single c broadcast to n axes
    std::vector<Rat> slopes;
    if (!args.empty()) {
      for (const auto& a : args) slopes.push_back(Rat::parse(a));
    } else if (params.count("c1")) {
      for (int i = 1;; ++i) {
        auto it = params.find("c" + std::to_string(i));
        if (it == params.end()) break;
        slopes.push_back(it->second);
      }
    } else if (auto it = params.find("c"); it != params.end()) {
      slopes.assign(arity == 0 ? 1 : static_cast<std::size_t>(arity), it->second);
    } else {
      throw std::invalid_argument("linear needs slopes: linear(c1,...,cn) or c=/c1=...");
    }
    int n = arity == 0 ? static_cast<int>(slopes.size()) : arity;
    if (static_cast<int>(slopes.size()) != n)
      throw std::invalid_argument("linear got " + std::to_string(slopes.size()) +
                                  " slopes for arity " + std::to_string(n));
    ExprPtr sum;
    std::string label = "linear(";
    for (int i = 0; i < n; ++i) {
      ExprPtr term = binary(ExprNode::Kind::mul, constant(slopes[i]), variable(i + 1));
      sum = sum ? binary(ExprNode::Kind::add, std::move(sum), std::move(term))
                : std::move(term);
      label += (i ? "," : "") + slopes[static_cast<std::size_t>(i)].str();
    }
    return FuncSpec::from_expr(FuncExpr{std::move(sum), n}, label + ")");
  }
  if (id == "lifted") {
    if (args.size() != 1)
      throw std::invalid_argument("lifted takes exactly one base function name");
    FuncSpec base = catalog_get(args[0], params, 1);
    int n = arity == 0 ? 2 : arity;
    return FuncSpec::lift(std::move(base), n);
  }
  throw std::invalid_argument("unknown catalog entry '" + id + "'");
}

std::vector<std::string> catalog_names() {
  return {"example1_A", "example1_f", "example1_g", "product_minus_one",
          "skew_quadratic", "skew_quad_strict", "power", "sqrt", "linear", "lifted"};
}

namespace {

Rat json_number(const nlohmann::json& j) {
  if (j.is_string()) return Rat::parse(j.get<std::string>());
  if (j.is_array()) {
    if (j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
      throw std::invalid_argument("rational pair must be two integers");
    return Rat(j[0].get<long long>(), j[1].get<long long>());
  }
  if (j.is_number_integer()) return Rat(j.get<long long>());
  throw std::invalid_argument(
      "numbers must be decimal strings, [num,den] pairs, or integers; got " + j.dump());
}

}  // namespace

PL1DSpec load_pl_json_text(std::string_view text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.is_object() || !j.contains("knots") || !j.contains("tail_slope"))
    throw std::invalid_argument("piecewise-linear spec needs 'knots' and 'tail_slope'");
  std::vector<std::pair<Rat, Rat>> knots;
  for (const auto& k : j.at("knots")) {
    if (!k.is_array() || k.size() != 2)
      throw std::invalid_argument("each knot must be an [x, y] pair");
    knots.emplace_back(json_number(k[0]), json_number(k[1]));
  }
  return PL1DSpec(std::move(knots), json_number(j.at("tail_slope")));
}

PL1DSpec load_pl_json(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_pl_json_text(ss.str());
}

}  // namespace addilope
