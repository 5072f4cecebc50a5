#pragma once

// Syntax tree of the script language. See docs/grammar.ebnf.

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace valint::dsl {

struct Span {
  int line = 1;
  int col = 1;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind {
    kNumber,     // text
    kName,       // text
    kCall,       // text = callee, args / arg_names
    kTuple,      // args
    kMatrix,     // args = rows (each a kTuple)
    kNeg,        // args[0]
    kBinary,     // text in {"+", "-", "*", "/", "x"}, args[0], args[1]
    kPower,      // args[0] ^ exponent
    kPadic,      // prime, exponent (= v), digits, exact
    kEllipsis,   // trailing "+ ..." of a series
    kCompose,    // args = {f, tau, shift?}
    kScale,      // args = {f, alpha, shift?}
    kTranslate,  // args = {phi, sigma}, text = "left" | "right"
  };

  Kind kind = Kind::kNumber;
  Span span;
  std::string text;
  std::vector<ExprPtr> args;
  /// Keyword of each call argument; empty for positional ones.
  std::vector<std::string> arg_names;
  long exponent = 0;
  long prime = 0;
  std::vector<long> digits;
  bool exact = true;
};

struct Stmt {
  enum class Kind {
    kComment,         // text
    kDecl,            // keyword = declaration kind, name, exprs[0]
    kIntegrate,       // exprs[0], optional exprs[1] = order tuple
    kClosedForm,      // exprs[0]
    kCheckFubini,     // exprs[0]
    kCheckInvariance, // exprs[0] by exprs[1]
    kCheckRandom,     // ints: n, count
    kCheckEqual,      // exprs[0], exprs[1]
    kIwasawa,         // exprs[0]
    kGlIntegrate,     // exprs[0]
    kPrint,           // exprs[0]
    kEval,            // exprs[0] at exprs[1]
  };

  Kind kind = Kind::kPrint;
  Span span;
  std::string keyword;
  std::string name;
  Span name_span;
  std::vector<ExprPtr> exprs;
  long n = 0;
  long count = 0;
  std::string text;
};

struct Script {
  std::vector<Stmt> stmts;
};

/// Canonical source text; parse(render(s)) is structurally equal to s.
std::string render(const Expr& e);
std::string render(const Stmt& s);
std::string render(const Script& s);

/// Structural equality, ignoring spans.
bool same(const Expr& a, const Expr& b);
bool same(const Stmt& a, const Stmt& b);
bool same(const Script& a, const Script& b);

}  // namespace valint::dsl
