#include "valint/dsl/parser.hpp"

#include <cctype>
#include <set>

namespace valint::dsl {

namespace {

struct Token {
  enum class Kind { kInt, kIdent, kPadic, kPunct, kEllipsis, kComment, kError, kEnd };
  Kind kind = Kind::kEnd;
  std::string text;
  Span span;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    Span here{line, col};
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != '\n') ++j;
      std::string text(src.substr(i + 1, j - i - 1));
      while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.erase(text.begin());
      while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
      out.push_back({Token::Kind::kComment, text, here});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      std::string digits(src.substr(i, j - i));
      if (src.substr(j, 5) == "adic:") {
        out.push_back({Token::Kind::kPadic, digits, here});
        advance(j + 5 - i);
      } else {
        out.push_back({Token::Kind::kInt, digits, here});
        advance(j - i);
      }
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Token::Kind::kIdent, std::string(src.substr(i, j - i)), here});
      advance(j - i);
      continue;
    }
    if (src.substr(i, 3) == "...") {
      out.push_back({Token::Kind::kEllipsis, "...", here});
      advance(3);
      continue;
    }
    if (std::string_view("()[],;=+-*/^").find(c) != std::string_view::npos) {
      out.push_back({Token::Kind::kPunct, std::string(1, c), here});
      advance(1);
      continue;
    }
    std::string shown = std::isprint(static_cast<unsigned char>(c)) ? std::string(1, c) : "\\x" + std::to_string(static_cast<unsigned char>(c));
    out.push_back({Token::Kind::kError, "unexpected character '" + shown + "'", here});
    advance(1);
  }
  out.push_back({Token::Kind::kEnd, "", Span{line, col}});
  return out;
}

const std::set<std::string> kDeclKinds = {"field", "valued", "kelem", "elem", "gamma", "step", "liftfn", "matrix", "glfn"};

struct SyntaxError {
  Span span;
  std::string message;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  ParseResult run() {
    ParseResult res;
    while (true) {
      while (toks_[pos_].kind == Token::Kind::kComment) {
        Stmt s;
        s.kind = Stmt::Kind::kComment;
        s.span = toks_[pos_].span;
        s.text = toks_[pos_].text;
        res.script.stmts.push_back(std::move(s));
        ++pos_;
      }
      if (toks_[pos_].kind == Token::Kind::kEnd) break;
      try {
        res.script.stmts.push_back(statement());
      } catch (const SyntaxError& e) {
        res.diagnostics.push_back({ErrorCode::kSyntax, e.span, e.message});
        recover();
      }
    }
    return res;
  }

 private:
  // Comments inside a statement are dropped.
  const Token& peek(std::size_t ahead = 0) {
    std::size_t p = pos_;
    while (true) {
      while (toks_[p].kind == Token::Kind::kComment) ++p;
      if (ahead == 0 || toks_[p].kind == Token::Kind::kEnd) return toks_[p];
      --ahead;
      ++p;
    }
  }
  Token next() {
    while (toks_[pos_].kind == Token::Kind::kComment) ++pos_;
    Token t = toks_[pos_];
    if (t.kind == Token::Kind::kError) throw SyntaxError{t.span, t.text};
    if (t.kind != Token::Kind::kEnd) ++pos_;
    return t;
  }
  [[noreturn]] void error(const Token& t, const std::string& what) {
    if (t.kind == Token::Kind::kError) throw SyntaxError{t.span, t.text};
    std::string found = t.kind == Token::Kind::kEnd ? "end of input" : "'" + t.text + "'";
    throw SyntaxError{t.span, "expected " + what + ", found " + found};
  }
  bool at_punct(const char* p, std::size_t ahead = 0) {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::kPunct && t.text == p;
  }
  bool at_word(const char* w, std::size_t ahead = 0) {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::kIdent && t.text == w;
  }
  Token expect_punct(const char* p) {
    if (!at_punct(p)) error(peek(), std::string("'") + p + "'");
    return next();
  }
  Token expect_word(const char* w) {
    if (!at_word(w)) error(peek(), std::string("'") + w + "'");
    return next();
  }
  Token expect_ident(const char* what) {
    if (peek().kind != Token::Kind::kIdent) error(peek(), what);
    return next();
  }
  long expect_int(bool allow_negative) {
    bool neg = false;
    if (allow_negative && at_punct("-")) {
      next();
      neg = true;
    }
    if (peek().kind != Token::Kind::kInt) error(peek(), "an integer");
    Token t = next();
    if (t.text.size() > 15) throw SyntaxError{t.span, "integer literal too large"};
    long v = std::stol(t.text);
    return neg ? -v : v;
  }

  void recover() {
    while (true) {
      const Token& t = toks_[pos_];
      if (t.kind == Token::Kind::kEnd) return;
      ++pos_;
      if (t.kind == Token::Kind::kPunct && t.text == ";") return;
    }
  }

  Stmt statement() {
    Token head = peek();
    if (head.kind != Token::Kind::kIdent) error(head, "a statement");
    Stmt s;
    s.span = head.span;
    const std::string& w = head.text;
    if (kDeclKinds.count(w)) {
      next();
      s.kind = Stmt::Kind::kDecl;
      s.keyword = w;
      Token name = expect_ident("a name");
      s.name = name.text;
      s.name_span = name.span;
      expect_punct("=");
      s.exprs.push_back(expr());
    } else if (w == "integrate") {
      next();
      s.kind = Stmt::Kind::kIntegrate;
      s.exprs.push_back(expr());
      if (at_word("order")) {
        next();
        expect_punct("=");
        s.exprs.push_back(primary());
      }
    } else if (w == "closedform" || w == "iwasawa" || w == "glintegrate" || w == "print") {
      next();
      s.kind = w == "closedform" ? Stmt::Kind::kClosedForm
               : w == "iwasawa"  ? Stmt::Kind::kIwasawa
               : w == "print"    ? Stmt::Kind::kPrint
                                 : Stmt::Kind::kGlIntegrate;
      s.exprs.push_back(expr());
    } else if (w == "eval") {
      next();
      s.kind = Stmt::Kind::kEval;
      s.exprs.push_back(expr());
      expect_word("at");
      s.exprs.push_back(expr());
    } else if (w == "check") {
      next();
      Token what = expect_ident("'fubini', 'invariance', 'random' or 'equal'");
      if (what.text == "fubini") {
        s.kind = Stmt::Kind::kCheckFubini;
        s.exprs.push_back(expr());
      } else if (what.text == "invariance") {
        s.kind = Stmt::Kind::kCheckInvariance;
        s.exprs.push_back(expr());
        expect_word("by");
        s.exprs.push_back(expr());
      } else if (what.text == "random") {
        s.kind = Stmt::Kind::kCheckRandom;
        expect_word("fubini");
        expect_word("n");
        expect_punct("=");
        s.n = expect_int(false);
        expect_word("count");
        expect_punct("=");
        s.count = expect_int(false);
      } else if (what.text == "equal") {
        s.kind = Stmt::Kind::kCheckEqual;
        s.exprs.push_back(expr());
        expect_punct(",");
        s.exprs.push_back(expr());
      } else {
        error(what, "'fubini', 'invariance', 'random' or 'equal'");
      }
    } else {
      error(head, "a statement");
    }
    expect_punct(";");
    return s;
  }

  static ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

  ExprPtr expr() {
    Token head = peek();
    if (head.kind == Token::Kind::kIdent && (head.text == "compose" || head.text == "scale" || head.text == "translate")) {
      next();
      Expr e;
      e.span = head.span;
      e.args.push_back(sum());
      if (head.text == "compose") {
        e.kind = Expr::Kind::kCompose;
        expect_word("with");
        expect_word("tau");
        expect_punct("=");
        e.args.push_back(sum());
      } else {
        e.kind = head.text == "scale" ? Expr::Kind::kScale : Expr::Kind::kTranslate;
        expect_word("by");
        e.args.push_back(sum());
      }
      if (e.kind == Expr::Kind::kTranslate) {
        expect_word("side");
        expect_punct("=");
        Token side = expect_ident("'left' or 'right'");
        if (side.text != "left" && side.text != "right") error(side, "'left' or 'right'");
        e.text = side.text;
      } else if (at_word("shift")) {
        next();
        expect_punct("=");
        e.args.push_back(sum());
      }
      return make(std::move(e));
    }
    return sum();
  }

  ExprPtr sum() {
    ExprPtr lhs = term();
    while (at_punct("+") || at_punct("-")) {
      Token op = next();
      Expr e;
      e.kind = Expr::Kind::kBinary;
      e.span = op.span;
      e.text = op.text;
      e.args.push_back(lhs);
      if (op.text == "+" && peek().kind == Token::Kind::kEllipsis) {
        Expr dots;
        dots.kind = Expr::Kind::kEllipsis;
        dots.span = next().span;
        e.args.push_back(make(std::move(dots)));
        lhs = make(std::move(e));
        if (at_punct("+") || at_punct("-")) error(peek(), "the end of the series after '...'");
        break;
      }
      e.args.push_back(term());
      lhs = make(std::move(e));
    }
    return lhs;
  }

  ExprPtr term() {
    ExprPtr lhs = factor();
    while (at_punct("*") || at_punct("/") || at_word("x")) {
      Token op = next();
      Expr e;
      e.kind = Expr::Kind::kBinary;
      e.span = op.span;
      e.text = op.text;
      e.args = {lhs, factor()};
      lhs = make(std::move(e));
    }
    return lhs;
  }

  ExprPtr factor() {
    if (at_punct("-")) {
      Token op = next();
      Expr e;
      e.kind = Expr::Kind::kNeg;
      e.span = op.span;
      e.args.push_back(factor());
      return make(std::move(e));
    }
    ExprPtr base = primary();
    if (at_punct("^")) {
      Token op = next();
      Expr e;
      e.kind = Expr::Kind::kPower;
      e.span = op.span;
      e.args.push_back(base);
      e.exponent = expect_int(true);
      return make(std::move(e));
    }
    return base;
  }

  ExprPtr primary() {
    Token t = peek();
    Expr e;
    e.span = t.span;
    switch (t.kind) {
      case Token::Kind::kInt:
        next();
        e.kind = Expr::Kind::kNumber;
        e.text = t.text;
        return make(std::move(e));
      case Token::Kind::kPadic:
        return padic();
      case Token::Kind::kIdent:
        next();
        if (at_punct("(")) return call(t);
        e.kind = Expr::Kind::kName;
        e.text = t.text;
        return make(std::move(e));
      case Token::Kind::kPunct:
        if (t.text == "(") return paren();
        if (t.text == "[") return matrix();
        break;
      default:
        break;
    }
    error(t, "an expression");
  }

  ExprPtr padic() {
    Token t = next();
    Expr e;
    e.kind = Expr::Kind::kPadic;
    e.span = t.span;
    if (t.text.size() > 9) throw SyntaxError{t.span, "prime in digit literal too large"};
    e.prime = std::stol(t.text);
    expect_word("v");
    expect_punct("=");
    e.exponent = expect_int(true);
    expect_word("digits");
    expect_punct("=");
    expect_punct("[");
    while (!at_punct("]")) {
      if (peek().kind == Token::Kind::kEllipsis) {
        next();
        e.exact = false;
        break;
      }
      e.digits.push_back(expect_int(false));
      if (!at_punct("]")) expect_punct(",");
    }
    expect_punct("]");
    return make(std::move(e));
  }

  ExprPtr call(const Token& callee) {
    Expr e;
    e.kind = Expr::Kind::kCall;
    e.span = callee.span;
    e.text = callee.text;
    expect_punct("(");
    while (!at_punct(")")) {
      if (peek().kind == Token::Kind::kIdent && at_punct("=", 1)) {
        e.arg_names.push_back(next().text);
        next();
      } else {
        e.arg_names.emplace_back();
      }
      e.args.push_back(expr());
      if (!at_punct(")")) expect_punct(",");
    }
    expect_punct(")");
    return make(std::move(e));
  }

  ExprPtr paren() {
    Token open = next();
    Expr e;
    e.kind = Expr::Kind::kTuple;
    e.span = open.span;
    if (at_punct(")")) {
      next();
      return make(std::move(e));
    }
    ExprPtr first = expr();
    if (at_punct(")")) {
      next();
      return first;
    }
    e.args.push_back(first);
    while (at_punct(",")) {
      next();
      if (at_punct(")")) break;
      e.args.push_back(expr());
    }
    expect_punct(")");
    return make(std::move(e));
  }

  ExprPtr matrix() {
    Token open = next();
    Expr m;
    m.kind = Expr::Kind::kMatrix;
    m.span = open.span;
    do {
      Token ro = expect_punct("[");
      Expr row;
      row.kind = Expr::Kind::kTuple;
      row.span = ro.span;
      row.args.push_back(expr());
      while (at_punct(",")) {
        next();
        row.args.push_back(expr());
      }
      expect_punct("]");
      m.args.push_back(make(std::move(row)));
    } while (at_punct(",") && (next(), true));
    expect_punct("]");
    return make(std::move(m));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string Diagnostic::format() const {
  return "error[" + code_string(code) + "] line " + std::to_string(span.line) + ", col " + std::to_string(span.col) + ": " + message;
}

ParseResult parse(std::string_view source) { return Parser(lex(source)).run(); }

bool is_reserved(const std::string& name) {
  static const std::set<std::string> words = {
      "field", "valued", "kelem", "elem", "gamma", "step", "liftfn", "matrix", "glfn", "integrate", "closedform",
      "check", "iwasawa", "glintegrate", "print", "eval", "compose", "scale", "translate", "with", "by", "at",
      "x", "t", "u", "X", "i", "O"};
  if (words.count(name)) return true;
  // t1.., X1..: the split-valuation variables and their X counterparts.
  if (name.size() >= 2 && (name[0] == 't' || name[0] == 'X')) {
    for (std::size_t k = 1; k < name.size(); ++k)
      if (!std::isdigit(static_cast<unsigned char>(name[k]))) return false;
    return true;
  }
  return false;
}

}  // namespace valint::dsl
