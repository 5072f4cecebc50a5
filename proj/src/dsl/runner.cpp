#include "valint/dsl/runner.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <variant>

#include "valint/error.hpp"
#include "valint/generators.hpp"
#include "valint/lift_integrate.hpp"
#include "valint/matrix_integrals.hpp"

namespace valint::dsl {

namespace {

// ---------------------------------------------------------------- builtins

const std::map<std::string, std::vector<std::string>>& builtin_params() {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"Qp", {"p", "prec"}},
      {"FpLaurent", {"p", "prec"}},
      {"laurent", {"K", "rank", "prec"}},
      {"ball", {"c", "k"}},
      {"indicator", {"box"}},
      {"haar", {"g"}},
      {"section", {"g", "r", "v"}},
      {"partial", {"f", "r"}},
      {"pullback", {"g", "A", "b"}},
      {"lift", {"g", "a", "gamma"}},
      {"liftm", {"g", "N"}},
      {"liftgl", {"g", "N", "vmax"}},
      {"glweight", {"g", "N", "vmax"}},
      {"nu", {"x"}},
      {"abs", {"x"}},
      {"residue", {"x"}},
      {"inv", {"x"}},
      {"det", {"M"}},
      {"detabs", {"M"}},
      {"O", {"c"}},
  };
  return table;
}

// t, t1.., X, X1.., u, i
bool is_builtin_variable(const std::string& name) {
  if (name == "t" || name == "X" || name == "u" || name == "i") return true;
  if (name.size() < 2 || (name[0] != 't' && name[0] != 'X') || name[1] == '0') return false;
  return std::all_of(name.begin() + 1, name.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

// ------------------------------------------------------------------ values

struct Value;
struct TupleV {
  std::vector<Value> items;
};
struct BigO {
  GroupElement cutoff;
};

struct Value {
  std::variant<GaussRat, GroupElement, GammaValue, KElem, FElem, Ball, BoxN, StepFunction, FFunction, GLFunction,
               LocalFieldSpec, ValuedFieldSpec, TupleV, KMatrix, FMatrix, BigO>
      v;

  template <class T>
  bool is() const {
    return std::holds_alternative<T>(v);
  }
  template <class T>
  const T& as() const {
    return std::get<T>(v);
  }
};

std::string type_name(const Value& x) {
  static const char* names[] = {"number",        "group element", "value in C(Gamma)", "element of K",
                                "element of F",  "ball",          "box",               "step function",
                                "function on F^n", "function on GL_N", "residue field", "valued field",
                                "tuple",         "matrix over K", "matrix over F",     "O-term"};
  return names[x.v.index()];
}

std::string render_value(const Value& x) {
  return std::visit(
      [](const auto& y) -> std::string {
        using T = std::decay_t<decltype(y)>;
        if constexpr (std::is_same_v<T, TupleV>) {
          std::string out = "(";
          for (std::size_t i = 0; i < y.items.size(); ++i) out += (i ? ", " : "") + render_value(y.items[i]);
          return out + (y.items.size() == 1 ? ",)" : ")");
        } else if constexpr (std::is_same_v<T, GLFunction>) {
          return "gl(N=" + std::to_string(y.N) + ", " + y.description + ")";
        } else if constexpr (std::is_same_v<T, LocalFieldSpec>) {
          return y.name() + " (prec " + std::to_string(y.default_precision) + ")";
        } else if constexpr (std::is_same_v<T, ValuedFieldSpec>) {
          return y.name() + " (prec " + std::to_string(y.precision) + ")";
        } else if constexpr (std::is_same_v<T, BigO>) {
          return "O(t^" + y.cutoff.to_string() + ")";
        } else {
          return y.to_string();
        }
      },
      x.v);
}

bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

template <class T, class Mul, class Inv>
T power(T base, long e, T one, Mul mul, Inv inv) {
  if (e < 0) {
    base = inv(base);
    e = -e;
  }
  T out = std::move(one);
  while (e > 0) {
    if (e & 1) out = mul(out, base);
    e >>= 1;
    if (e) base = mul(base, base);
  }
  return out;
}

constexpr long kMaxExponent = 1000;

// Largest exponent of u written in an expression; plain u counts as 1.
std::optional<long> max_u_exponent(const Expr& e) {
  if (e.kind == Expr::Kind::kName && e.text == "u") return 1;
  if (e.kind == Expr::Kind::kPower && e.args[0]->kind == Expr::Kind::kName && e.args[0]->text == "u") return e.exponent;
  std::optional<long> best;
  for (const auto& a : e.args)
    if (auto m = max_u_exponent(*a)) best = best ? std::max(*best, *m) : *m;
  return best;
}

// One past the highest term written in a series; a term without u is u^0.
long series_precision(const Expr& e) {
  if (e.kind == Expr::Kind::kBinary && (e.text == "+" || e.text == "-"))
    return std::max(series_precision(*e.args[0]), series_precision(*e.args[1]));
  return max_u_exponent(e).value_or(0) + 1;
}

// ------------------------------------------------------------------ runner

class Runner {
 public:
  explicit Runner(const Options& opt) : opt_(opt) {}

  RunResult run(const Script& script) {
    std::uint64_t saved_limit = enumeration_limit();
    if (opt_.depth_limit) set_enumeration_limit(opt_.depth_limit);
    for (const auto& st : script.stmts) {
      if (st.kind == Stmt::Kind::kComment) continue;
      try {
        execute(st);
      } catch (const Error& e) {
        report({e.code(), st.span, e.what()});
        if (st.kind == Stmt::Kind::kDecl) break;
      } catch (const std::exception& e) {
        report({ErrorCode::kDomain, st.span, std::string("internal: ") + e.what()});
        if (st.kind == Stmt::Kind::kDecl) break;
      }
    }
    set_enumeration_limit(saved_limit);
    res_.exit_code = res_.diagnostics.empty() ? 0 : 1;
    return std::move(res_);
  }

 private:
  void emit(const std::string& line) { res_.transcript += line + "\n"; }
  void report(Diagnostic d) {
    emit(d.format());
    res_.diagnostics.push_back(std::move(d));
  }

  // ---------------------------------------------------------- session
  int rank() const { return valued_ ? valued_->rank : opt_.rank; }
  const LocalFieldSpec& field() const {
    if (valued_) return valued_->base;
    if (field_) return *field_;
    fail(ErrorCode::kSession, "no residue field declared");
  }
  const ValuedFieldSpec& vfield() const {
    if (!valued_) fail(ErrorCode::kSession, "no valued field declared");
    return *valued_;
  }

  // ---------------------------------------------------------- coercions
  [[noreturn]] static void type_error(const Value& x, const std::string& wanted) {
    fail(ErrorCode::kType, "expected " + wanted + ", got " + type_name(x));
  }

  static long to_int(const Value& x, const std::string& what, long lo = -1000000, long hi = 1000000) {
    if (!x.is<GaussRat>()) type_error(x, "an integer for " + what);
    const GaussRat& q = x.as<GaussRat>();
    if (!q.is_real() || q.re.get_den() != 1) type_error(x, "an integer for " + what);
    if (q.re < lo || q.re > hi)
      fail(ErrorCode::kDomain, what + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return q.re.get_num().get_si();
  }

  GammaValue to_gamma(const Value& x) const {
    if (x.is<GammaValue>()) {
      if (x.as<GammaValue>().rank() != rank()) fail(ErrorCode::kSession, "value has rank " + std::to_string(x.as<GammaValue>().rank()) + " but the session rank is " + std::to_string(rank()));
      return x.as<GammaValue>();
    }
    if (x.is<GaussRat>()) return GammaValue::constant(rank(), x.as<GaussRat>());
    type_error(x, "a value in C(Gamma)");
  }

  KElem to_k(const Value& x) const {
    if (x.is<KElem>()) {
      const KElem& k = x.as<KElem>();
      if (!k.spec().same_field(field())) fail(ErrorCode::kSession, "element of " + k.spec().name() + " used with residue field " + field().name());
      return k;
    }
    if (x.is<GaussRat>()) {
      const GaussRat& q = x.as<GaussRat>();
      if (!q.is_real()) fail(ErrorCode::kType, "complex number " + q.to_string() + " is not in K");
      if (field().kind == LocalFieldSpec::Kind::kLaurentFF && q.re.get_den() % field().p == 0)
        fail(ErrorCode::kDomain, q.to_string() + " is not in " + field().name());
      return KElem::from_rational(field(), q.re);
    }
    type_error(x, "an element of K");
  }

  FElem to_f(const Value& x) const {
    if (x.is<FElem>()) return x.as<FElem>();
    if (x.is<KElem>() || x.is<GaussRat>()) return FElem::constant(vfield(), to_k(x));
    type_error(x, "an element of F");
  }

  GroupElement to_group(const Value& x) const {
    if (x.is<GroupElement>()) {
      if (x.as<GroupElement>().rank() != rank()) fail(ErrorCode::kDimension, "group element has rank " + std::to_string(x.as<GroupElement>().rank()));
      return x.as<GroupElement>();
    }
    if (x.is<GaussRat>() && rank() == 1) return GroupElement{to_int(x, "an exponent")};
    if (x.is<TupleV>() && static_cast<int>(x.as<TupleV>().items.size()) == rank()) {
      std::vector<std::int64_t> e;
      for (const auto& it : x.as<TupleV>().items) e.push_back(to_int(it, "an exponent"));
      return GroupElement(e);
    }
    type_error(x, "a group element of rank " + std::to_string(rank()));
  }

  // A tuple of length n, or a bare value when n = 1, or the number 0 for the zero vector.
  template <class F>
  auto to_vec(const Value& x, int n, F coerce) const -> std::vector<decltype(coerce(x))> {
    std::vector<decltype(coerce(x))> out;
    if (x.is<TupleV>()) {
      const auto& items = x.as<TupleV>().items;
      if (static_cast<int>(items.size()) != n)
        fail(ErrorCode::kDimension, "expected " + std::to_string(n) + " coordinates, got " + std::to_string(items.size()));
      for (const auto& it : items) out.push_back(coerce(it));
      return out;
    }
    if (n == 1) return {coerce(x)};
    if (x.is<GaussRat>() && x.as<GaussRat>().is_zero()) {
      for (int i = 0; i < n; ++i) out.push_back(coerce(x));
      return out;
    }
    fail(ErrorCode::kDimension, "expected a tuple of " + std::to_string(n) + " coordinates");
  }
  std::vector<KElem> to_kvec(const Value& x, int n) const {
    return to_vec(x, n, [this](const Value& y) { return to_k(y); });
  }
  std::vector<FElem> to_fvec(const Value& x, int n) const {
    return to_vec(x, n, [this](const Value& y) { return to_f(y); });
  }
  std::vector<GroupElement> to_groupvec(const Value& x, int n) const {
    if (n == 1 && !(x.is<TupleV>() && x.as<TupleV>().items.size() == 1)) return {to_group(x)};
    return to_vec(x, n, [this](const Value& y) { return to_group(y); });
  }

  KMatrix to_kmat(const Value& x) const {
    if (x.is<KMatrix>()) return x.as<KMatrix>();
    if (x.is<FMatrix>()) {
      const FMatrix& m = x.as<FMatrix>();
      KMatrix out(m.spec().base, m.size());
      for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) {
          const FElem& e = m.at(i, j);
          if (!e.is_exact() || e.terms().size() > 1 || (e.terms().size() == 1 && !e.terms().begin()->first.is_zero()))
            fail(ErrorCode::kType, "matrix entry " + e.to_string() + " is not in K");
          out.at(i, j) = e.terms().empty() ? KElem(m.spec().base) : e.terms().begin()->second;
        }
      return out;
    }
    type_error(x, "a matrix");
  }
  FMatrix to_fmat(const Value& x) const {
    if (x.is<FMatrix>()) return x.as<FMatrix>();
    if (x.is<KMatrix>()) {
      const KMatrix& m = x.as<KMatrix>();
      FMatrix out(vfield(), m.size());
      for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) out.at(i, j) = FElem::constant(vfield(), to_k(Value{m.at(i, j)}));
      return out;
    }
    type_error(x, "a matrix");
  }

  template <class T>
  static const T& expect(const Value& x, const std::string& wanted) {
    if (!x.is<T>()) type_error(x, wanted);
    return x.as<T>();
  }

  // ---------------------------------------------------------- arithmetic
  static int level(const Value& x) {
    if (x.is<GaussRat>()) return 0;
    if (x.is<KElem>()) return 1;
    if (x.is<FElem>()) return 2;
    return -1;
  }

  Value neg(const Value& x) const {
    if (x.is<GaussRat>()) return {-x.as<GaussRat>()};
    if (x.is<GroupElement>()) return {-x.as<GroupElement>()};
    if (x.is<GammaValue>()) return {-x.as<GammaValue>()};
    if (x.is<KElem>()) return {-x.as<KElem>()};
    if (x.is<FElem>()) return {-x.as<FElem>()};
    if (x.is<StepFunction>()) return {sf_scale(GammaValue::constant(x.as<StepFunction>().rank(), -1), x.as<StepFunction>())};
    if (x.is<FFunction>()) return {ff_scale(GammaValue::constant(x.as<FFunction>().rank(), -1), x.as<FFunction>())};
    fail(ErrorCode::kType, "cannot negate a " + type_name(x));
  }

  Value inverse(const Value& x) const {
    if (x.is<GaussRat>()) return {GaussRat(1) / x.as<GaussRat>()};
    if (x.is<GammaValue>()) return {x.as<GammaValue>().inverse()};
    if (x.is<KElem>()) return {to_k(x).inverse()};
    if (x.is<FElem>()) return {x.as<FElem>().inverse()};
    if (x.is<KMatrix>()) return {x.as<KMatrix>().inverse()};
    if (x.is<FMatrix>()) return {x.as<FMatrix>().inverse()};
    fail(ErrorCode::kType, "cannot invert a " + type_name(x));
  }

  bool is_scalar(const Value& x) const { return x.is<GaussRat>() || x.is<GammaValue>(); }

  Value binary(const std::string& op, const Value& a, const Value& b) const {
    if (op == "x") return box_product(a, b);
    if (b.is<BigO>()) {
      if (op != "+") fail(ErrorCode::kType, "an O-term can only be added");
      FElem f = to_f(a);
      const GroupElement& c = b.as<BigO>().cutoff;
      FElem::Terms kept;
      for (const auto& [g, k] : f.terms())
        if (g < c) kept.emplace(g, k);
      return {FElem(f.spec(), kept, cutoff_min(f.cutoff(), c))};
    }
    if (a.is<BigO>()) fail(ErrorCode::kType, "an O-term must come last in a series");

    if (a.is<StepFunction>() || b.is<StepFunction>()) return step_binary(op, a, b);
    if (a.is<FFunction>() || b.is<FFunction>()) return ffun_binary(op, a, b);
    if (a.is<KMatrix>() || a.is<FMatrix>() || b.is<KMatrix>() || b.is<FMatrix>()) {
      if (op != "*") fail(ErrorCode::kType, "matrices support only '*'");
      if (a.is<KMatrix>() && b.is<KMatrix>()) {
        if (a.as<KMatrix>().size() != b.as<KMatrix>().size()) fail(ErrorCode::kDimension, "matrix sizes differ");
        return {a.as<KMatrix>() * b.as<KMatrix>()};
      }
      FMatrix x = to_fmat(a), y = to_fmat(b);
      if (x.size() != y.size()) fail(ErrorCode::kDimension, "matrix sizes differ");
      return {x * y};
    }
    if (a.is<GroupElement>() || b.is<GroupElement>()) {
      if (op == "+" || op == "-") {
        GroupElement x = to_group(a), y = to_group(b);
        return {op == "+" ? x + y : x - y};
      }
      if (op == "*" && a.is<GaussRat>()) return {static_cast<std::int64_t>(to_int(a, "a multiplier")) * to_group(b)};
      if (op == "*" && b.is<GaussRat>()) return {static_cast<std::int64_t>(to_int(b, "a multiplier")) * to_group(a)};
      fail(ErrorCode::kType, "group elements support '+', '-' and integer multiples");
    }
    if (a.is<GammaValue>() || b.is<GammaValue>()) {
      GammaValue x = to_gamma(a), y = to_gamma(b);
      if (op == "+") return {x + y};
      if (op == "-") return {x - y};
      if (op == "*") return {x * y};
      return {x / y};
    }
    int la = level(a), lb = level(b);
    if (la < 0) type_error(a, "a number");
    if (lb < 0) type_error(b, "a number");
    switch (std::max(la, lb)) {
      case 0: {
        const GaussRat &x = a.as<GaussRat>(), &y = b.as<GaussRat>();
        if (op == "+") return {x + y};
        if (op == "-") return {x - y};
        if (op == "*") return {x * y};
        return {x / y};
      }
      case 1: {
        KElem x = to_k(a), y = to_k(b);
        if (op == "+") return {x + y};
        if (op == "-") return {x - y};
        if (op == "*") return {x * y};
        return {x / y};
      }
      default: {
        FElem x = to_f(a), y = to_f(b);
        if (op == "+") return {x + y};
        if (op == "-") return {x - y};
        if (op == "*") return {x * y};
        return {x / y};
      }
    }
  }

  Value box_product(const Value& a, const Value& b) const {
    auto balls = [](const Value& x) -> std::vector<Ball> {
      if (x.is<Ball>()) return {x.as<Ball>()};
      if (x.is<BoxN>()) return x.as<BoxN>().balls;
      type_error(x, "a ball or box");
    };
    BoxN out{balls(a)};
    for (const auto& ball : balls(b)) {
      if (!out.balls.empty() && !ball.spec().same_field(out.balls.front().spec())) fail(ErrorCode::kType, "balls from different fields");
      out.balls.push_back(ball);
    }
    return {out};
  }

  Value step_binary(const std::string& op, const Value& a, const Value& b) const {
    if (a.is<StepFunction>() && b.is<StepFunction>()) {
      const StepFunction &f = a.as<StepFunction>(), &g = b.as<StepFunction>();
      if (f.dim() != g.dim()) fail(ErrorCode::kDimension, "step functions on spaces of different dimension");
      if (f.rank() != g.rank() || !f.spec().same_field(g.spec())) fail(ErrorCode::kType, "step functions over different fields");
      if (op == "+") return {sf_add(f, g)};
      if (op == "-") return {sf_sub(f, g)};
      fail(ErrorCode::kType, "step functions support '+' and '-' between them");
    }
    if (op == "*" && is_scalar(a)) return {sf_scale(to_gamma(a), b.as<StepFunction>())};
    if (op == "*" && is_scalar(b)) return {sf_scale(to_gamma(b), a.as<StepFunction>())};
    if (op == "/" && is_scalar(b)) return {sf_scale(to_gamma(b).inverse(), a.as<StepFunction>())};
    fail(ErrorCode::kType, "cannot combine " + type_name(a) + " and " + type_name(b) + " with '" + op + "'");
  }

  Value ffun_binary(const std::string& op, const Value& a, const Value& b) const {
    if (a.is<FFunction>() && b.is<FFunction>()) {
      if (op == "+") return {ff_add(a.as<FFunction>(), b.as<FFunction>())};
      if (op == "-") return {ff_add(a.as<FFunction>(), neg(b).as<FFunction>())};
      fail(ErrorCode::kType, "functions on F^n support '+' and '-' between them");
    }
    if (op == "*" && is_scalar(a)) return {ff_scale(to_gamma(a), b.as<FFunction>())};
    if (op == "*" && is_scalar(b)) return {ff_scale(to_gamma(b), a.as<FFunction>())};
    if (op == "/" && is_scalar(b)) return {ff_scale(to_gamma(b).inverse(), a.as<FFunction>())};
    fail(ErrorCode::kType, "cannot combine " + type_name(a) + " and " + type_name(b) + " with '" + op + "'");
  }

  Value raise(const Value& x, long e) const {
    if (e > kMaxExponent || e < -kMaxExponent) fail(ErrorCode::kDomain, "exponent " + std::to_string(e) + " is too large");
    if (x.is<GaussRat>())
      return {power(x.as<GaussRat>(), e, GaussRat(1), std::multiplies<>(), [](const GaussRat& y) { return GaussRat(1) / y; })};
    if (x.is<GammaValue>()) return {x.as<GammaValue>().pow(e)};
    if (x.is<KElem>()) {
      KElem k = to_k(x);
      return {power(k, e, KElem::from_int(k.spec(), 1), std::multiplies<>(), [](const KElem& y) { return y.inverse(); })};
    }
    if (x.is<FElem>()) {
      const FElem& f = x.as<FElem>();
      if (f.is_exact() && f.terms().size() == 1) {
        const auto& [g, c] = *f.terms().begin();
        KElem k = power(c, e, KElem::from_int(c.spec(), 1), std::multiplies<>(), [](const KElem& y) { return y.inverse(); });
        return {FElem::monomial(f.spec(), k, static_cast<std::int64_t>(e) * g)};
      }
      return {power(f, e, FElem::from_int(f.spec(), 1), std::multiplies<>(), [](const FElem& y) { return y.inverse(); })};
    }
    fail(ErrorCode::kType, "cannot raise a " + type_name(x) + " to a power");
  }

  // ---------------------------------------------------------- evaluation
  Value variable(const std::string& name) const {
    if (name == "i") return {GaussRat(0, 1)};
    if (name == "u") {
      if (field().kind != LocalFieldSpec::Kind::kLaurentFF) fail(ErrorCode::kSession, "'u' needs a residue field F_p((u))");
      return {KElem::pi_power(field(), 1)};
    }
    int idx = name.size() == 1 ? 1 : std::stoi(name.substr(1));
    if (name.size() == 1 && rank() != 1)
      fail(ErrorCode::kSession, "'" + name + "' is only defined in rank 1; use " + name + "1.." + name + std::to_string(rank()));
    if (name.size() > 1 && (rank() == 1 || idx > rank()))
      fail(ErrorCode::kSession, "'" + name + "' is not a variable in rank " + std::to_string(rank()));
    GroupElement g = GroupElement::unit(rank(), idx - 1);
    if (name[0] == 'X') return {GammaValue::monomial(1, g)};
    return {FElem::monomial(vfield(), KElem::from_int(vfield().base, 1), g)};
  }

  Value eval(const Expr& e) const {
    switch (e.kind) {
      case Expr::Kind::kNumber:
        return {GaussRat(mpq_class(e.text))};
      case Expr::Kind::kName: {
        if (auto it = env_.find(e.text); it != env_.end()) return it->second;
        if (is_builtin_variable(e.text)) return variable(e.text);
        fail(ErrorCode::kUnboundName, "unbound name '" + e.text + "'");
      }
      case Expr::Kind::kCall:
        return call(e);
      case Expr::Kind::kTuple: {
        TupleV t;
        for (const auto& a : e.args) t.items.push_back(eval(*a));
        return {t};
      }
      case Expr::Kind::kMatrix:
        return matrix(e);
      case Expr::Kind::kNeg:
        return neg(eval(*e.args[0]));
      case Expr::Kind::kBinary:
        if (e.args[1]->kind == Expr::Kind::kEllipsis) return series(e);
        return binary(e.text, eval(*e.args[0]), eval(*e.args[1]));
      case Expr::Kind::kPower:
        return raise(eval(*e.args[0]), e.exponent);
      case Expr::Kind::kPadic: {
        const LocalFieldSpec& k = field();
        if (k.kind != LocalFieldSpec::Kind::kPAdic || k.p != e.prime)
          fail(ErrorCode::kSession, "digit literal in Q" + std::to_string(e.prime) + " used with residue field " + k.name());
        for (long d : e.digits)
          if (d >= e.prime) fail(ErrorCode::kDomain, "digit " + std::to_string(d) + " is not below " + std::to_string(e.prime));
        if (e.exponent < -100000 || e.exponent > 100000) fail(ErrorCode::kDomain, "digit literal valuation out of range");
        std::vector<std::int64_t> digits(e.digits.begin(), e.digits.end());
        return {KElem::from_digits(k, static_cast<int>(e.exponent), digits, e.exact)};
      }
      case Expr::Kind::kEllipsis:
        fail(ErrorCode::kType, "'...' may only end a series");
      case Expr::Kind::kCompose: {
        FFunction f = expect<FFunction>(eval(*e.args[0]), "a function on F^n");
        FMatrix tau = to_fmat(eval(*e.args[1]));
        if (tau.size() != f.dim()) fail(ErrorCode::kDimension, "tau must be " + std::to_string(f.dim()) + "x" + std::to_string(f.dim()));
        std::vector<FElem> shift = e.args.size() > 2 ? to_fvec(eval(*e.args[2]), f.dim())
                                                     : std::vector<FElem>(static_cast<std::size_t>(f.dim()), FElem(vfield()));
        return {ff_compose(f, tau, shift)};
      }
      case Expr::Kind::kScale: {
        FFunction f = expect<FFunction>(eval(*e.args[0]), "a function on F^n");
        std::vector<FElem> alpha = to_fvec(eval(*e.args[1]), f.dim());
        std::vector<FElem> shift = e.args.size() > 2 ? to_fvec(eval(*e.args[2]), f.dim())
                                                     : std::vector<FElem>(static_cast<std::size_t>(f.dim()), FElem(vfield()));
        return {scale_translate(f, alpha, shift)};
      }
      case Expr::Kind::kTranslate: {
        GLFunction phi = expect<GLFunction>(eval(*e.args[0]), "a function on GL_N");
        FMatrix sigma = to_fmat(eval(*e.args[1]));
        return {gl_translate(phi, sigma, e.text == "left" ? Side::kLeft : Side::kRight)};
      }
    }
    fail(ErrorCode::kType, "unsupported expression");
  }

  Value series(const Expr& e) const {
    KElem k = to_k(eval(*e.args[0]));
    if (k.is_padic()) fail(ErrorCode::kType, "'...' series need a residue field F_p((u)); use a digit literal in Q_p");
    return {k.with_precision(static_cast<int>(series_precision(*e.args[0])))};
  }

  Value matrix(const Expr& e) const {
    int n = static_cast<int>(e.args.size());
    std::vector<std::vector<Value>> rows;
    bool over_f = false;
    for (const auto& r : e.args) {
      if (static_cast<int>(r->args.size()) != n) fail(ErrorCode::kDimension, "matrix literal is not square");
      rows.emplace_back();
      for (const auto& x : r->args) {
        rows.back().push_back(eval(*x));
        over_f = over_f || rows.back().back().is<FElem>();
      }
    }
    if (over_f) {
      FMatrix m(vfield(), n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.at(i, j) = to_f(rows[i][j]);
      return {m};
    }
    KMatrix m(field(), n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m.at(i, j) = to_k(rows[i][j]);
    return {m};
  }

  // Positional and keyword arguments matched against the parameter list.
  struct Args {
    std::string fn;
    std::vector<std::string> names;
    std::vector<std::optional<Value>> vals;

    const Value& need(std::size_t i) const {
      if (!vals[i]) fail(ErrorCode::kType, fn + "() is missing argument '" + names[i] + "'");
      return *vals[i];
    }
    bool has(std::size_t i) const { return vals[i].has_value(); }
  };

  Value call(const Expr& e) const {
    auto it = builtin_params().find(e.text);
    if (it == builtin_params().end()) fail(ErrorCode::kUnboundName, "unknown function '" + e.text + "'");
    Args a{e.text, it->second, std::vector<std::optional<Value>>(it->second.size())};
    std::size_t next = 0;
    for (std::size_t i = 0; i < e.args.size(); ++i) {
      const std::string& kw = i < e.arg_names.size() ? e.arg_names[i] : std::string();
      std::size_t slot;
      if (kw.empty()) {
        if (next >= a.names.size()) fail(ErrorCode::kType, e.text + "() takes at most " + std::to_string(a.names.size()) + " arguments");
        slot = next++;
      } else {
        auto f = std::find(a.names.begin(), a.names.end(), kw);
        if (f == a.names.end()) fail(ErrorCode::kType, e.text + "() has no argument '" + kw + "'");
        slot = static_cast<std::size_t>(f - a.names.begin());
      }
      if (a.vals[slot]) fail(ErrorCode::kType, e.text + "() got argument '" + a.names[slot] + "' twice");
      a.vals[slot] = eval(*e.args[i]);
    }
    return builtin(e.text, a);
  }

  Value builtin(const std::string& fn, const Args& a) const {
    auto int_or = [&](std::size_t i, long dflt, long lo, long hi) {
      return a.has(i) ? to_int(a.need(i), a.names[i], lo, hi) : dflt;
    };
    if (fn == "Qp" || fn == "FpLaurent") {
      long p = to_int(a.need(0), "p", 2, 1L << 30);
      if (!is_prime(p)) fail(ErrorCode::kDomain, std::to_string(p) + " is not prime");
      int prec = static_cast<int>(int_or(1, opt_.prec, 1, 1000));
      return {fn == "Qp" ? LocalFieldSpec::padic(p, prec) : LocalFieldSpec::laurent_ff(p, prec)};
    }
    if (fn == "laurent") {
      const auto& k = expect<LocalFieldSpec>(a.need(0), "a residue field");
      return {ValuedFieldSpec{k, static_cast<int>(int_or(1, opt_.rank, 1, 9)), static_cast<int>(int_or(2, opt_.prec, 1, 1000))}};
    }
    if (fn == "ball") {
      KElem c = to_k(a.need(0));
      int k = static_cast<int>(to_int(a.need(1), "k", -1000, 1000));
      return {Ball(c, k)};
    }
    if (fn == "indicator") {
      const Value& b = a.need(0);
      BoxN box = b.is<Ball>() ? BoxN{{b.as<Ball>()}} : expect<BoxN>(b, "a ball or box");
      if (!box.balls.empty() && !box.balls.front().spec().same_field(field())) fail(ErrorCode::kSession, "box is not in the current residue field");
      return {sf_indicator(field(), box, rank())};
    }
    if (fn == "haar") return {sf_haar_integral(expect<StepFunction>(a.need(0), "a step function"))};
    if (fn == "section") {
      const auto& g = expect<StepFunction>(a.need(0), "a step function");
      int r = static_cast<int>(to_int(a.need(1), "r", 1, std::max(1, g.dim())));
      return {sf_section(g, r, to_k(a.need(2)))};
    }
    if (fn == "partial") {
      const Value& f = a.need(0);
      if (f.is<StepFunction>()) {
        int r = static_cast<int>(to_int(a.need(1), "r", 1, std::max(1, f.as<StepFunction>().dim())));
        return {sf_partial_integral(f.as<StepFunction>(), r)};
      }
      const auto& ff = expect<FFunction>(f, "a step function or a function on F^n");
      int r = static_cast<int>(to_int(a.need(1), "r", 1, std::max(1, ff.dim())));
      return {partial_integral(ff, r)};
    }
    if (fn == "pullback") {
      const auto& g = expect<StepFunction>(a.need(0), "a step function");
      KMatrix A = to_kmat(a.need(1));
      if (A.size() != g.dim()) fail(ErrorCode::kDimension, "pullback matrix must be " + std::to_string(g.dim()) + "x" + std::to_string(g.dim()));
      std::vector<KElem> b = a.has(2) ? to_kvec(a.need(2), g.dim()) : std::vector<KElem>(static_cast<std::size_t>(g.dim()), KElem(field()));
      return {sf_affine_pullback(g, A, b)};
    }
    if (fn == "lift") {
      const auto& g = expect<StepFunction>(a.need(0), "a step function");
      int n = g.dim();
      Value zero{GaussRat(0)};
      std::vector<FElem> pt = to_fvec(a.has(1) ? a.need(1) : zero, n);
      std::vector<GroupElement> gam = to_groupvec(a.has(2) ? a.need(2) : zero, n);
      return {ff_from_lift(vfield(), lift(vfield(), g, pt, gam))};
    }
    if (fn == "liftm" || fn == "liftgl" || fn == "glweight") {
      const auto& g = expect<StepFunction>(a.need(0), "a step function");
      int N = static_cast<int>(int_or(1, 2, 1, 4));
      int vmax = fn == "liftm" ? kDefaultVmax : static_cast<int>(int_or(2, kDefaultVmax, 0, 64));
      if (fn == "glweight") {
        if (g.dim() != N * N) fail(ErrorCode::kDimension, "step function on M_" + std::to_string(N) + " needs " + std::to_string(N * N) + " coordinates");
        return {gl_weight(g, N, vmax)};
      }
      if (fn == "liftm") return {lift_mn(vfield(), g, N)};
      return {lift_gl(vfield(), g, N, vmax)};
    }
    if (fn == "nu" || fn == "abs") {
      const Value& x = a.need(0);
      if (x.is<FElem>()) return fn == "nu" ? Value{x.as<FElem>().nu()} : Value{x.as<FElem>().abs()};
      KElem k = to_k(x);
      return fn == "nu" ? Value{GaussRat(k.valuation())} : Value{GaussRat(k.abs())};
    }
    if (fn == "residue") return {expect<FElem>(a.need(0), "an element of F").residue()};
    if (fn == "inv") return inverse(a.need(0));
    if (fn == "det") {
      const Value& m = a.need(0);
      if (m.is<KMatrix>()) return {m.as<KMatrix>().det()};
      return {to_fmat(m).det()};
    }
    if (fn == "detabs") return {det_abs(to_fmat(a.need(0)))};
    if (fn == "O") {
      const Value& c = a.need(0);
      if (c.is<FElem>()) {
        const FElem& f = c.as<FElem>();
        if (!f.is_exact() || f.terms().size() != 1) fail(ErrorCode::kType, "O() takes a monomial in t");
        return {BigO{f.nu()}};
      }
      return {BigO{to_group(c)}};
    }
    fail(ErrorCode::kUnboundName, "unknown function '" + fn + "'");
  }

  // ---------------------------------------------------------- statements
  std::vector<int> order_of(const Stmt& st, int n) const {
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 1);
    if (st.exprs.size() < 2) return order;
    Value v = eval(*st.exprs[1]);
    order.clear();
    if (v.is<TupleV>()) {
      for (const auto& x : v.as<TupleV>().items) order.push_back(static_cast<int>(to_int(x, "order entry")));
    } else {
      order.push_back(static_cast<int>(to_int(v, "order entry")));
    }
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> expected(static_cast<std::size_t>(n));
    std::iota(expected.begin(), expected.end(), 1);
    if (sorted != expected)
      fail(ErrorCode::kDimension, "order " + order_to_string(order) + " is not a permutation of 1.." + std::to_string(n));
    return order;
  }

  GammaValue integrate(const Value& v, const Stmt& st) const {
    if (v.is<FFunction>()) return repeated_integral(v.as<FFunction>(), order_of(st, v.as<FFunction>().dim()));
    if (v.is<StepFunction>()) {
      StepFunction g = v.as<StepFunction>();
      std::vector<int> remaining(static_cast<std::size_t>(g.dim()));
      std::iota(remaining.begin(), remaining.end(), 1);
      for (int o : order_of(st, g.dim())) {
        auto pos = std::find(remaining.begin(), remaining.end(), o);
        g = sf_partial_integral(g, static_cast<int>(pos - remaining.begin()) + 1);
        remaining.erase(pos);
      }
      return sf_haar_integral(g);
    }
    if (v.is<GLFunction>()) {
      if (st.exprs.size() > 1) fail(ErrorCode::kType, "order= is not available for functions on GL_N");
      return gl_integral(v.as<GLFunction>());
    }
    type_error(v, "a function to integrate");
  }

  bool equal(const Value& a, const Value& b) const {
    if (a.is<GroupElement>() || b.is<GroupElement>()) return to_group(a) == to_group(b);
    if (a.is<TupleV>() || b.is<TupleV>()) {
      const auto& x = expect<TupleV>(a, "a tuple").items;
      const auto& y = expect<TupleV>(b, "a tuple").items;
      if (x.size() != y.size()) return false;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (!equal(x[i], y[i])) return false;
      return true;
    }
    if (a.is<StepFunction>() || b.is<StepFunction>())
      return sf_equal(expect<StepFunction>(a, "a step function"), expect<StepFunction>(b, "a step function"));
    if (a.is<Ball>() || a.is<BoxN>()) return a.is<Ball>() ? b.is<Ball>() && a.as<Ball>() == b.as<Ball>() : b.is<BoxN>() && a.as<BoxN>() == b.as<BoxN>();
    if (a.is<KMatrix>() && b.is<KMatrix>()) {
      const KMatrix &x = a.as<KMatrix>(), &y = b.as<KMatrix>();
      if (x.size() != y.size()) return false;
      for (int i = 0; i < x.size(); ++i)
        for (int j = 0; j < x.size(); ++j)
          if (!(x.at(i, j) - y.at(i, j)).is_zero()) return false;
      return true;
    }
    if (a.is<KMatrix>() || a.is<FMatrix>() || b.is<KMatrix>() || b.is<FMatrix>()) {
      FMatrix x = to_fmat(a), y = to_fmat(b);
      return x.size() == y.size() && x.agrees_with(y);
    }
    if (a.is<GammaValue>() || b.is<GammaValue>()) return to_gamma(a) == to_gamma(b);
    if (level(a) < 0) type_error(a, "a comparable value");
    if (level(b) < 0) type_error(b, "a comparable value");
    switch (std::max(level(a), level(b))) {
      case 0:
        return a.as<GaussRat>() == b.as<GaussRat>();
      case 1:
        return (to_k(a) - to_k(b)).is_zero();
      default:
        return (to_f(a) - to_f(b)).is_zero();
    }
  }

  void execute(const Stmt& st) {
    auto ex = [&](std::size_t i) { return eval(*st.exprs.at(i)); };
    switch (st.kind) {
      case Stmt::Kind::kComment:
        return;
      case Stmt::Kind::kDecl:
        return declare(st, ex(0));
      case Stmt::Kind::kIntegrate:
        return emit("= " + integrate(ex(0), st).to_string());
      case Stmt::Kind::kClosedForm:
        return emit("= " + integral_closed_form(expect<FFunction>(ex(0), "a function on F^n")).to_string());
      case Stmt::Kind::kGlIntegrate:
        return emit("= " + gl_integral(expect<GLFunction>(ex(0), "a function on GL_N")).to_string());
      case Stmt::Kind::kPrint:
        return emit(render_value(ex(0)));
      case Stmt::Kind::kIwasawa: {
        FMatrix tau = to_fmat(ex(0));
        IwasawaFactors f = iwasawa(tau);
        emit("A = " + f.A.to_string());
        emit("U = " + f.U.to_string());
        return emit("Lambda = " + f.Lambda.to_string());
      }
      case Stmt::Kind::kEval: {
        Value f = ex(0), x = ex(1);
        if (f.is<StepFunction>()) {
          const auto& g = f.as<StepFunction>();
          return emit("= " + sf_eval(g, to_kvec(x, g.dim())).to_string());
        }
        const auto& ff = expect<FFunction>(f, "a step function or a function on F^n");
        return emit("= " + ff_eval(ff, to_fvec(x, ff.dim())).to_string());
      }
      case Stmt::Kind::kCheckFubini: {
        FubiniReport r = fubini_report(expect<FFunction>(ex(0), "a function on F^n"));
        if (!r.pass) fail(ErrorCode::kCheckFailed, r.to_string());
        return emit(r.to_string());
      }
      case Stmt::Kind::kCheckEqual: {
        Value a = ex(0), b = ex(1);
        if (!equal(a, b)) fail(ErrorCode::kCheckFailed, "EQUAL FAIL left=" + render_value(a) + " right=" + render_value(b));
        return emit("EQUAL PASS");
      }
      case Stmt::Kind::kCheckInvariance:
        return check_invariance(ex(0), ex(1));
      case Stmt::Kind::kCheckRandom:
        return check_random(st);
    }
  }

  void check_invariance(const Value& f, const Value& by) {
    if (f.is<GLFunction>()) {
      const auto& phi = f.as<GLFunction>();
      FMatrix sigma = to_fmat(by);
      GammaValue base = gl_integral(phi);
      for (Side side : {Side::kLeft, Side::kRight}) {
        GammaValue moved = gl_integral(gl_translate(phi, sigma, side));
        if (!(moved == base))
          fail(ErrorCode::kCheckFailed, std::string("INVARIANCE FAIL side=") + (side == Side::kLeft ? "left" : "right") +
                                            " value=" + base.to_string() + " translated=" + moved.to_string());
      }
      return emit("INVARIANCE PASS value=" + base.to_string());
    }
    const auto& ff = expect<FFunction>(f, "a function on F^n or GL_N");
    GammaValue base = integral_closed_form(ff);
    std::vector<int> identity(static_cast<std::size_t>(ff.dim()));
    std::iota(identity.begin(), identity.end(), 1);
    GammaValue moved;
    if (by.is<KMatrix>() || by.is<FMatrix>()) {
      FMatrix tau = to_fmat(by);
      if (tau.size() != ff.dim()) fail(ErrorCode::kDimension, "tau must be " + std::to_string(ff.dim()) + "x" + std::to_string(ff.dim()));
      moved = repeated_integral(ff_compose(ff, tau, std::vector<FElem>(static_cast<std::size_t>(ff.dim()), FElem(vfield()))), identity) * det_abs(tau);
    } else {
      std::vector<FElem> shift = to_fvec(by, ff.dim());
      moved = repeated_integral(ff_compose(ff, FMatrix::identity(vfield(), ff.dim()), shift), identity);
    }
    if (!(moved == base)) fail(ErrorCode::kCheckFailed, "INVARIANCE FAIL value=" + base.to_string() + " moved=" + moved.to_string());
    emit("INVARIANCE PASS value=" + base.to_string());
  }

  void check_random(const Stmt& st) {
    if (st.n < 1 || st.n > 3) fail(ErrorCode::kDimension, "random Fubini checks support n = 1..3");
    if (st.count < 1 || st.count > 1000) fail(ErrorCode::kDomain, "count must lie in [1, 1000]");
    Rng rng(opt_.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(st.span.line));
    for (long trial = 0; trial < st.count; ++trial) {
      FFunction f = random_ffunction(rng, vfield(), static_cast<int>(st.n), 2);
      FubiniReport r = fubini_report(f);
      if (!r.pass) fail(ErrorCode::kCheckFailed, "RANDOM FUBINI FAIL trial=" + std::to_string(trial + 1) + " " + r.to_string());
    }
    emit("RANDOM FUBINI PASS n=" + std::to_string(st.n) + " count=" + std::to_string(st.count));
  }

  void declare(const Stmt& st, Value v) {
    const std::string& k = st.keyword;
    if (k == "field") {
      field_ = expect<LocalFieldSpec>(v, "a residue field");
    } else if (k == "valued") {
      const auto& f = expect<ValuedFieldSpec>(v, "a valued field");
      if (valued_) fail(ErrorCode::kSession, "a valued field is already active (" + valued_->name() + ")");
      valued_ = f;
    } else if (k == "kelem") {
      v = Value{to_k(v)};
    } else if (k == "elem") {
      v = Value{to_f(v)};
    } else if (k == "gamma") {
      v = Value{to_gamma(v)};
    } else if (k == "step") {
      expect<StepFunction>(v, "a step function");
    } else if (k == "liftfn") {
      expect<FFunction>(v, "a function on F^n");
    } else if (k == "matrix") {
      if (!v.is<KMatrix>() && !v.is<FMatrix>()) type_error(v, "a matrix");
    } else if (k == "glfn") {
      expect<GLFunction>(v, "a function on GL_N");
    }
    env_.emplace(st.name, std::move(v));
  }

  Options opt_;
  RunResult res_;
  std::map<std::string, Value> env_;
  std::optional<LocalFieldSpec> field_;
  std::optional<ValuedFieldSpec> valued_;
};

// ---------------------------------------------------------------- resolver

class Resolver {
 public:
  std::vector<Diagnostic> run(const Script& s) {
    for (const auto& st : s.stmts)
      if (st.kind == Stmt::Kind::kDecl) later_.insert(st.name);
    for (const auto& st : s.stmts) {
      for (const auto& e : st.exprs) visit(*e);
      if (st.kind != Stmt::Kind::kDecl) continue;
      if (is_reserved(st.name)) {
        out_.push_back({ErrorCode::kRebound, st.name_span, "'" + st.name + "' is reserved and cannot be bound"});
      } else if (!bound_.insert(st.name).second) {
        out_.push_back({ErrorCode::kRebound, st.name_span, "'" + st.name + "' is already bound"});
      }
    }
    return out_;
  }

 private:
  void visit(const Expr& e) {
    if (e.kind == Expr::Kind::kName && !bound_.count(e.text) && !is_builtin_variable(e.text)) {
      out_.push_back({ErrorCode::kUnboundName, e.span,
                      (later_.count(e.text) ? "forward reference to '" : "unbound name '") + e.text + "'"});
    }
    if (e.kind == Expr::Kind::kCall && !builtin_params().count(e.text))
      out_.push_back({ErrorCode::kUnboundName, e.span, "unknown function '" + e.text + "'"});
    for (const auto& a : e.args) visit(*a);
  }

  std::set<std::string> bound_, later_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> resolve(const Script& script) { return Resolver().run(script); }

RunResult run(const Script& script, const Options& options) { return Runner(options).run(script); }

RunResult run_source(std::string_view source, const Options& options) {
  ParseResult parsed = parse(source);
  std::vector<Diagnostic> diags = parsed.ok() ? resolve(parsed.script) : parsed.diagnostics;
  if (diags.empty()) return run(parsed.script, options);
  RunResult res;
  for (const auto& d : diags) res.transcript += d.format() + "\n";
  res.diagnostics = std::move(diags);
  res.exit_code = 1;
  return res;
}

RunResult format_source(std::string_view source) {
  ParseResult parsed = parse(source);
  RunResult res;
  if (parsed.ok()) {
    res.transcript = render(parsed.script);
    return res;
  }
  for (const auto& d : parsed.diagnostics) res.transcript += d.format() + "\n";
  res.diagnostics = std::move(parsed.diagnostics);
  res.exit_code = 1;
  return res;
}

}  // namespace valint::dsl
