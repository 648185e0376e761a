#include "mfl/parser.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <utility>

namespace mfl {
namespace {

enum class Tok { Ident, Int, Keyword, Sym, Eof };

struct Token {
  Tok kind;
  std::string text;
  std::int64_t value = 0;
  Pos pos;
};

const std::set<std::string, std::less<>> kKeywords = {
    "val",   "main",  "type",  "mfun",  "is",     "end",  "return", "let",  "in",
    "and",   "of",    "mcase", "mif",   "case",   "split", "as",     "if",   "then",
    "else",  "box",   "unbox", "keyof", "roll",   "unroll", "inl",   "inr",  "rec",
    "int",   "unit",  "div"};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      Pos p{line_, col_};
      if (at_end()) {
        out.push_back({Tok::Eof, "", 0, last_pos()});
        return out;
      }
      const char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t start = i_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) advance();
        std::string_view digits = src_.substr(start, i_ - start);
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
        if (ec != std::errc()) throw SyntaxError(p, "integer literal out of range");
        out.push_back({Tok::Int, std::string(digits), v, p});
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = i_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                             peek() == '\''))
          advance();
        std::string word(src_.substr(start, i_ - start));
        const Tok k = kKeywords.count(word) ? Tok::Keyword : Tok::Ident;
        out.push_back({k, std::move(word), 0, p});
        continue;
      }
      static const char* const two[] = {"<=", "==", "=>", "->"};
      bool matched = false;
      for (const char* s : two) {
        if (src_.substr(i_, 2) == s) {
          advance();
          advance();
          out.push_back({Tok::Sym, s, 0, p});
          matched = true;
          break;
        }
      }
      if (matched) continue;
      if (std::string_view("(),:!*+-<=|[].").find(c) != std::string_view::npos) {
        advance();
        out.push_back({Tok::Sym, std::string(1, c), 0, p});
        continue;
      }
      throw SyntaxError(p, std::string("unexpected character '") + c + "'");
    }
  }

 private:
  bool at_end() const { return i_ >= src_.size(); }
  char peek(std::size_t k = 0) const { return i_ + k < src_.size() ? src_[i_ + k] : '\0'; }

  void advance() {
    if (src_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    last_ = {line_, col_};
    ++i_;
  }

  Pos last_pos() const {
    if (src_.empty()) return {1, 1};
    // Position of the final character of the input.
    int line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < src_.size(); ++k) {
      if (src_[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return {line, col};
  }

  void skip_space_and_comments() {
    for (;;) {
      while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
      if (peek() == '(' && peek(1) == '*') {
        Pos open{line_, col_};
        advance();
        advance();
        int depth = 1;
        while (depth > 0) {
          if (at_end()) throw SyntaxError(open, "unterminated comment");
          if (peek() == '(' && peek(1) == '*') {
            advance();
            advance();
            ++depth;
          } else if (peek() == '*' && peek(1) == ')') {
            advance();
            advance();
            --depth;
          } else {
            advance();
          }
        }
        continue;
      }
      return;
    }
  }

  std::string_view src_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
  Pos last_{1, 1};
};

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

  Program program() {
    Program prog;
    std::set<std::string> declared;
    for (;;) {
      if (is_kw("type")) {
        Pos p = next().pos;
        Token name = expect_ident();
        if (aliases_.count(name.text)) throw DuplicateDecl(name.pos, name.text);
        expect_sym("=");
        aliases_[name.text] = type();
        (void)p;
      } else if (is_kw("val")) {
        Pos p = next().pos;
        Token name = expect_ident();
        if (name.text == "_") throw SyntaxError(name.pos, "'_' cannot name a declaration");
        if (declared.count(name.text)) throw DuplicateDecl(name.pos, name.text);
        expect_sym("=");
        TermPtr t = term();
        declared.insert(name.text);
        scope_.push_back({name.text, Sort::Variable});
        prog.decls.push_back({name.text, std::move(t), p});
      } else if (is_kw("main")) {
        next();
        prog.main = term();
        if (peek().kind != Tok::Eof) fail("expected end of input after main term");
        return prog;
      } else {
        fail("expected 'type', 'val' or 'main'");
      }
    }
  }

  TermPtr standalone_term() {
    TermPtr t = term();
    if (peek().kind != Tok::Eof) fail("unexpected trailing input");
    return t;
  }

  ExprPtr standalone_expr(const std::vector<std::string>& resources) {
    for (const auto& r : resources) scope_.push_back({r, Sort::Resource});
    ExprPtr e = expr();
    if (peek().kind != Tok::Eof) fail("unexpected trailing input");
    return e;
  }

  TypePtr standalone_type() {
    TypePtr t = type();
    if (peek().kind != Tok::Eof) fail("unexpected trailing input");
    return t;
  }

 private:
  // -- token helpers --------------------------------------------------------

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool is_kw(std::string_view kw, std::size_t k = 0) const {
    return peek(k).kind == Tok::Keyword && peek(k).text == kw;
  }
  bool is_sym(std::string_view s, std::size_t k = 0) const {
    return peek(k).kind == Tok::Sym && peek(k).text == s;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::Eof ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(t.pos, msg + " (found " + found + ")");
  }

  Token expect_kw(std::string_view kw) {
    if (!is_kw(kw)) fail("expected '" + std::string(kw) + "'");
    return next();
  }
  Token expect_sym(std::string_view s) {
    if (!is_sym(s)) fail("expected '" + std::string(s) + "'");
    return next();
  }
  Token expect_ident() {
    if (peek().kind != Tok::Ident) fail("expected identifier");
    return next();
  }

  // -- scoping --------------------------------------------------------------

  struct ScopeEntry {
    std::string name;
    Sort sort;
  };

  class ScopeGuard {
   public:
    ScopeGuard(std::vector<ScopeEntry>& scope, std::initializer_list<ScopeEntry> entries)
        : scope_(scope), n_(entries.size()) {
      for (const auto& e : entries) scope_.push_back(e);
    }
    ~ScopeGuard() { scope_.resize(scope_.size() - n_); }
    ScopeGuard(const ScopeGuard&) = delete;
    ScopeGuard& operator=(const ScopeGuard&) = delete;

   private:
    std::vector<ScopeEntry>& scope_;
    std::size_t n_;
  };

  TermPtr reference(const Token& name) {
    if (name.text == "_") throw SyntaxError(name.pos, "'_' cannot be referenced");
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->name == name.text) {
        return it->sort == Sort::Resource ? mk::res(name.text, name.pos)
                                          : mk::var(name.text, name.pos);
      }
    }
    // Unbound names are left to the typechecker.
    return mk::var(name.text, name.pos);
  }

  // -- types ----------------------------------------------------------------
  //   type    := sum ('->' type)?
  //   sum     := prod ('+' sum)?
  //   prod    := prefix ('*' prod)?
  //   prefix  := '!' prefix | postfix
  //   postfix := atom 'box'*

  TypePtr type() {
    TypePtr lhs = sum_type();
    if (is_sym("->")) {
      next();
      return ty::arrow(lhs, type());
    }
    return lhs;
  }

  TypePtr sum_type() {
    TypePtr lhs = prod_type();
    if (is_sym("+")) {
      next();
      return ty::sum(lhs, sum_type());
    }
    return lhs;
  }

  TypePtr prod_type() {
    TypePtr lhs = prefix_type();
    if (is_sym("*")) {
      next();
      return ty::prod(lhs, prod_type());
    }
    return lhs;
  }

  TypePtr prefix_type() {
    if (is_sym("!")) {
      next();
      return ty::bang(prefix_type());
    }
    TypePtr t = atom_type();
    while (is_kw("box")) {
      next();
      t = ty::box(t);
    }
    return t;
  }

  TypePtr atom_type() {
    if (is_kw("int")) {
      next();
      return ty::integer();
    }
    if (is_kw("unit")) {
      next();
      return ty::unit();
    }
    if (is_sym("(")) {
      next();
      TypePtr t = type();
      expect_sym(")");
      return t;
    }
    if (is_kw("rec")) {
      next();
      Token v = expect_ident();
      expect_sym(".");
      type_vars_.push_back(v.text);
      TypePtr body = type();
      type_vars_.pop_back();
      return ty::rec(v.text, body);
    }
    if (peek().kind == Tok::Ident) {
      Token name = next();
      for (auto it = type_vars_.rbegin(); it != type_vars_.rend(); ++it)
        if (*it == name.text) return ty::var(name.text);
      auto a = aliases_.find(name.text);
      if (a != aliases_.end()) return a->second;
      throw SyntaxError(name.pos, "unknown type '" + name.text + "'");
    }
    fail("expected a type");
  }

  TypePtr bracket_type() {
    expect_sym("[");
    TypePtr t = type();
    expect_sym("]");
    return t;
  }

  TypePtr opt_annotation() {
    if (is_sym(":")) {
      next();
      return type();
    }
    return nullptr;
  }

  // -- terms ----------------------------------------------------------------

  TermPtr term() {
    const Token& t = peek();
    if (is_kw("if")) {
      Pos p = next().pos;
      TermPtr c = term();
      expect_kw("then");
      TermPtr a = term();
      expect_kw("else");
      TermPtr b = term();
      return mk::if_then_else(c, a, b, p);
    }
    if (is_kw("split")) {
      Pos p = next().pos;
      TermPtr s = term();
      expect_kw("as");
      expect_sym("(");
      Token x = expect_ident();
      expect_sym(",");
      Token y = expect_ident();
      expect_sym(")");
      expect_kw("in");
      ScopeGuard g(scope_, {{x.text, Sort::Variable}, {y.text, Sort::Variable}});
      TermPtr body = term();
      return mk::split(s, x.text, y.text, body, p);
    }
    if (is_kw("let")) {
      if (is_kw("val", 1)) {
        Pos p = next().pos;
        next();
        Token x = expect_ident();
        expect_sym("=");
        TermPtr bound = term();
        expect_kw("in");
        ScopeGuard g(scope_, {{x.text, Sort::Variable}, {"_", Sort::Variable}});
        TermPtr body = term();
        return mk::split(mk::pair(bound, mk::unit(p), p), x.text, "_", body, p);
      }
      throw SyntaxError(t.pos, "expression form 'let' where a term is expected");
    }
    if (is_kw("return") || is_kw("mcase") || is_kw("mif")) {
      throw SyntaxError(t.pos, "expression form '" + t.text + "' where a term is expected");
    }
    return comparison();
  }

  TermPtr comparison() {
    TermPtr lhs = additive();
    std::optional<PrimOpKind> op;
    if (is_sym("<")) op = PrimOpKind::Lt;
    if (is_sym("<=")) op = PrimOpKind::Le;
    if (is_sym("==")) op = PrimOpKind::Eq;
    if (!op) return lhs;
    Pos p = next().pos;
    TermPtr rhs = additive();
    if (is_sym("<") || is_sym("<=") || is_sym("==")) fail("comparison operators do not chain");
    return mk::primop(*op, {lhs, rhs}, p);
  }

  TermPtr additive() {
    TermPtr lhs = multiplicative();
    while (is_sym("+") || is_sym("-")) {
      Token op = next();
      TermPtr rhs = multiplicative();
      lhs = mk::primop(op.text == "+" ? PrimOpKind::Add : PrimOpKind::Sub, {lhs, rhs}, op.pos);
    }
    return lhs;
  }

  TermPtr multiplicative() {
    TermPtr lhs = unary();
    while (is_sym("*") || is_kw("div")) {
      Token op = next();
      TermPtr rhs = unary();
      lhs = mk::primop(op.text == "*" ? PrimOpKind::Mul : PrimOpKind::Div, {lhs, rhs}, op.pos);
    }
    return lhs;
  }

  TermPtr unary() {
    if (is_sym("-")) {
      Pos p = next().pos;
      TermPtr operand = unary();
      if (operand->kind == TermKind::Int && operand->num != std::numeric_limits<std::int64_t>::min())
        return mk::integer(-operand->num, p);
      return mk::primop(PrimOpKind::Sub, {mk::integer(0, p), operand}, p);
    }
    return application();
  }

  bool starts_prefix() const {
    const Token& t = peek();
    if (t.kind == Tok::Int || t.kind == Tok::Ident) return true;
    if (t.kind == Tok::Sym) return t.text == "(" || t.text == "!";
    if (t.kind == Tok::Keyword) {
      static const std::set<std::string, std::less<>> starters = {
          "box", "unbox", "keyof", "roll", "unroll", "inl", "inr", "mfun", "case"};
      return starters.count(t.text) > 0;
    }
    return false;
  }

  TermPtr application() {
    TermPtr f = prefix();
    while (starts_prefix()) {
      Pos p = peek().pos;
      TermPtr arg = prefix();
      f = mk::apply(f, arg, p);
    }
    return f;
  }

  TermPtr prefix() {
    const Token& t = peek();
    if (is_sym("!")) {
      Pos p = next().pos;
      return mk::bang(prefix(), p);
    }
    if (t.kind == Tok::Keyword) {
      if (t.text == "box") {
        Pos p = next().pos;
        return mk::box(prefix(), p);
      }
      if (t.text == "unbox") {
        Pos p = next().pos;
        return mk::unbox(prefix(), p);
      }
      if (t.text == "keyof") {
        Pos p = next().pos;
        return mk::keyof(prefix(), p);
      }
      if (t.text == "unroll") {
        Pos p = next().pos;
        return mk::unroll(prefix(), p);
      }
      if (t.text == "roll") {
        Pos p = next().pos;
        Pos tp = peek(1).pos;
        TypePtr r = bracket_type();
        if (r->kind != TypeKind::Rec) throw SyntaxError(tp, "roll annotation must be a rec type");
        return mk::roll(prefix(), r, p);
      }
      if (t.text == "inl" || t.text == "inr") {
        const bool left = t.text == "inl";
        Pos p = next().pos;
        Pos tp = peek(1).pos;
        TypePtr s = bracket_type();
        if (s->kind != TypeKind::Sum)
          throw SyntaxError(tp, "injection annotation must be a sum type");
        TermPtr sub = prefix();
        return left ? mk::inl(sub, s->left, s->right, p) : mk::inr(sub, s->left, s->right, p);
      }
    }
    return atom();
  }

  TermPtr atom() {
    const Token& t = peek();
    if (t.kind == Tok::Int) {
      Token n = next();
      return mk::integer(n.value, n.pos);
    }
    if (t.kind == Tok::Ident) {
      Token n = next();
      return reference(n);
    }
    if (is_sym("(")) {
      Pos p = next().pos;
      if (is_sym(")")) {
        next();
        return mk::unit(p);
      }
      std::vector<TermPtr> items{term()};
      while (is_sym(",")) {
        next();
        items.push_back(term());
      }
      expect_sym(")");
      // (a, b, c) is (a, (b, c))
      TermPtr acc = items.back();
      for (std::size_t i = items.size() - 1; i-- > 0;) acc = mk::pair(items[i], acc, p);
      return acc;
    }
    if (is_kw("mfun")) return mfun();
    if (is_kw("case")) return term_case();
    fail("expected a term");
  }

  TermPtr mfun() {
    Pos p = expect_kw("mfun").pos;
    Token self = expect_ident();
    expect_sym("(");
    Token param = expect_ident();
    expect_sym(":");
    TypePtr arg = type();
    expect_sym(")");
    expect_sym(":");
    TypePtr result = type();
    expect_kw("is");
    ScopeGuard g(scope_, {{self.text, Sort::Variable}, {param.text, Sort::Resource}});
    ExprPtr body = expr();
    expect_kw("end");
    return mk::mfun(self.text, param.text, arg, result, body, p);
  }

  TermPtr term_case() {
    Pos p = expect_kw("case").pos;
    TermPtr s = term();
    expect_kw("of");
    expect_kw("inl");
    Token x = expect_ident();
    expect_sym("=>");
    TermPtr a;
    {
      ScopeGuard g(scope_, {{x.text, Sort::Variable}});
      a = term();
    }
    expect_sym("|");
    expect_kw("inr");
    Token y = expect_ident();
    expect_sym("=>");
    TermPtr b;
    {
      ScopeGuard g(scope_, {{y.text, Sort::Variable}});
      b = term();
    }
    expect_kw("end");
    return mk::term_case(s, x.text, a, y.text, b, p);
  }

  // -- expressions ----------------------------------------------------------

  ExprPtr expr() {
    const Token& t = peek();
    if (is_kw("return")) {
      Pos p = next().pos;
      return mk::ret(term(), p);
    }
    if (is_kw("let")) {
      if (is_sym("!", 1)) return let_bang();
      if (is_sym("*", 1)) return let_pair();
      if (is_kw("val", 1)) throw SyntaxError(t.pos, "term form 'let val' where an expression is expected");
      next();
      fail("expected '!' or '*' after 'let'");
    }
    if (is_kw("mcase")) return mcase();
    if (is_kw("mif")) {
      Pos p = next().pos;
      TermPtr c = term();
      expect_kw("then");
      ExprPtr a = expr();
      expect_kw("else");
      ExprPtr b = expr();
      expect_kw("end");
      return mk::mcase(mk::primop(PrimOpKind::IntToSum, {c}, p), "_", nullptr, a, "_", nullptr, b,
                       p);
    }
    if (is_sym("(")) {
      next();
      ExprPtr e = expr();
      expect_sym(")");
      return e;
    }
    fail("expected an expression ('return', 'let', 'mcase' or 'mif')");
  }

  ExprPtr let_bang() {
    // let !x = t and !y = u in e  ==  let !x = t in let !y = u in e
    struct Binder {
      Pos pos;
      std::string name;
      TypePtr eta;
      TermPtr bound;
    };
    std::vector<Binder> binders;
    Pos p = expect_kw("let").pos;
    std::size_t pushed = 0;
    for (;;) {
      expect_sym("!");
      Token x = expect_ident();
      TypePtr eta = opt_annotation();
      expect_sym("=");
      TermPtr bound = term();
      binders.push_back({p, x.text, eta, bound});
      scope_.push_back({x.text, Sort::Variable});
      ++pushed;
      if (!is_kw("and")) break;
      p = next().pos;
    }
    expect_kw("in");
    ExprPtr body = expr();
    scope_.resize(scope_.size() - pushed);
    for (auto it = binders.rbegin(); it != binders.rend(); ++it)
      body = mk::let_bang(it->name, it->eta, it->bound, body, it->pos);
    return body;
  }

  ExprPtr let_pair() {
    Pos p = expect_kw("let").pos;
    expect_sym("*");
    expect_sym("(");
    Token a1 = expect_ident();
    TypePtr t1 = opt_annotation();
    expect_sym(",");
    Token a2 = expect_ident();
    TypePtr t2 = opt_annotation();
    expect_sym(")");
    expect_sym("=");
    TermPtr bound = term();
    expect_kw("in");
    ScopeGuard g(scope_, {{a1.text, Sort::Resource}, {a2.text, Sort::Resource}});
    ExprPtr body = expr();
    return mk::let_pair(a1.text, t1, a2.text, t2, bound, body, p);
  }

  ExprPtr mcase() {
    Pos p = expect_kw("mcase").pos;
    TermPtr s = term();
    expect_kw("of");
    expect_kw("inl");
    Token a1 = expect_ident();
    TypePtr t1 = opt_annotation();
    expect_sym("=>");
    ExprPtr e1;
    {
      ScopeGuard g(scope_, {{a1.text, Sort::Resource}});
      e1 = expr();
    }
    expect_sym("|");
    expect_kw("inr");
    Token a2 = expect_ident();
    TypePtr t2 = opt_annotation();
    expect_sym("=>");
    ExprPtr e2;
    {
      ScopeGuard g(scope_, {{a2.text, Sort::Resource}});
      e2 = expr();
    }
    expect_kw("end");
    return mk::mcase(s, a1.text, t1, e1, a2.text, t2, e2, p);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<ScopeEntry> scope_;
  std::vector<std::string> type_vars_;
  std::map<std::string, TypePtr> aliases_;
};

}  // namespace

Program parse(std::string_view source) { return Parser(source).program(); }

TermPtr parse_term(std::string_view source) { return Parser(source).standalone_term(); }

ExprPtr parse_expr(std::string_view source, const std::vector<std::string>& resources) {
  return Parser(source).standalone_expr(resources);
}

TypePtr parse_type(std::string_view source) { return Parser(source).standalone_type(); }

}  // namespace mfl
