#include "valint/dsl/ast.hpp"

namespace valint::dsl {

namespace {

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::kCompose:
    case Expr::Kind::kScale:
    case Expr::Kind::kTranslate:
      return 0;
    case Expr::Kind::kBinary:
      return (e.text == "+" || e.text == "-") ? 1 : 2;
    case Expr::Kind::kNeg:
      return 3;
    case Expr::Kind::kPower:
      return 4;
    default:
      return 5;
  }
}

std::string at_least(const Expr& e, int prec) {
  std::string s = render(e);
  return precedence(e) < prec ? "(" + s + ")" : s;
}

std::string join(const std::vector<ExprPtr>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += render(*xs[i]);
  }
  return out;
}

}  // namespace

std::string render(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::kNumber:
    case Expr::Kind::kName:
      return e.text;
    case Expr::Kind::kEllipsis:
      return "...";
    case Expr::Kind::kCall: {
      std::string out = e.text + "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        if (i < e.arg_names.size() && !e.arg_names[i].empty()) out += e.arg_names[i] + "=";
        out += render(*e.args[i]);
      }
      return out + ")";
    }
    case Expr::Kind::kTuple:
      if (e.args.size() == 1) return "(" + render(*e.args[0]) + ",)";
      return "(" + join(e.args) + ")";
    case Expr::Kind::kMatrix: {
      std::string out = "[";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        out += "[" + join(e.args[i]->args) + "]";
      }
      return out + "]";
    }
    case Expr::Kind::kNeg:
      return "-" + at_least(*e.args[0], 3);
    case Expr::Kind::kBinary: {
      if (e.text == "+" || e.text == "-") return at_least(*e.args[0], 1) + " " + e.text + " " + at_least(*e.args[1], 2);
      std::string op = e.text == "x" ? " x " : e.text;
      return at_least(*e.args[0], 2) + op + at_least(*e.args[1], 3);
    }
    case Expr::Kind::kPower:
      return at_least(*e.args[0], 5) + "^" + std::to_string(e.exponent);
    case Expr::Kind::kPadic: {
      std::string out = std::to_string(e.prime) + "adic: v=" + std::to_string(e.exponent) + " digits=[";
      for (std::size_t i = 0; i < e.digits.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(e.digits[i]);
      }
      if (!e.exact) out += e.digits.empty() ? "..." : ",...";
      return out + "]";
    }
    case Expr::Kind::kCompose:
    case Expr::Kind::kScale: {
      bool compose = e.kind == Expr::Kind::kCompose;
      std::string out = std::string(compose ? "compose " : "scale ") + at_least(*e.args[0], 1) +
                        (compose ? " with tau=" : " by ") + at_least(*e.args[1], 1);
      if (e.args.size() > 2) out += " shift=" + at_least(*e.args[2], 1);
      return out;
    }
    case Expr::Kind::kTranslate:
      return "translate " + at_least(*e.args[0], 1) + " by " + at_least(*e.args[1], 1) + " side=" + e.text;
  }
  return "";
}

std::string render(const Stmt& s) {
  auto e = [&](std::size_t i) { return render(*s.exprs.at(i)); };
  switch (s.kind) {
    case Stmt::Kind::kComment:
      return s.text.empty() ? "#" : "# " + s.text;
    case Stmt::Kind::kDecl:
      return s.keyword + " " + s.name + " = " + e(0) + ";";
    case Stmt::Kind::kIntegrate:
      return "integrate " + e(0) + (s.exprs.size() > 1 ? " order=" + e(1) : "") + ";";
    case Stmt::Kind::kClosedForm:
      return "closedform " + e(0) + ";";
    case Stmt::Kind::kCheckFubini:
      return "check fubini " + e(0) + ";";
    case Stmt::Kind::kCheckInvariance:
      return "check invariance " + e(0) + " by " + e(1) + ";";
    case Stmt::Kind::kCheckRandom:
      return "check random fubini n=" + std::to_string(s.n) + " count=" + std::to_string(s.count) + ";";
    case Stmt::Kind::kCheckEqual:
      return "check equal " + e(0) + ", " + e(1) + ";";
    case Stmt::Kind::kIwasawa:
      return "iwasawa " + e(0) + ";";
    case Stmt::Kind::kGlIntegrate:
      return "glintegrate " + e(0) + ";";
    case Stmt::Kind::kPrint:
      return "print " + e(0) + ";";
    case Stmt::Kind::kEval:
      return "eval " + e(0) + " at " + e(1) + ";";
  }
  return "";
}

std::string render(const Script& s) {
  std::string out;
  for (const auto& st : s.stmts) out += render(st) + "\n";
  return out;
}

bool same(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.text != b.text || a.exponent != b.exponent || a.prime != b.prime ||
      a.digits != b.digits || a.exact != b.exact || a.arg_names != b.arg_names || a.args.size() != b.args.size())
    return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!same(*a.args[i], *b.args[i])) return false;
  return true;
}

bool same(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind || a.keyword != b.keyword || a.name != b.name || a.n != b.n || a.count != b.count ||
      a.text != b.text || a.exprs.size() != b.exprs.size())
    return false;
  for (std::size_t i = 0; i < a.exprs.size(); ++i)
    if (!same(*a.exprs[i], *b.exprs[i])) return false;
  return true;
}

bool same(const Script& a, const Script& b) {
  if (a.stmts.size() != b.stmts.size()) return false;
  for (std::size_t i = 0; i < a.stmts.size(); ++i)
    if (!same(a.stmts[i], b.stmts[i])) return false;
  return true;
}

}  // namespace valint::dsl
