#include "redlab/parse.hpp"

#include <cctype>
#include <sstream>

#include "redlab/error.hpp"

namespace redlab {

namespace {

enum class Tok {
  Ident,    // [a-zA-Z][a-zA-Z0-9_']*
  Meta,     // $ident
  SVar,     // ?ident
  Number,   // [0-9]+
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Dot,
  Colon,
  Arrow,     // ->
  Turnstile, // |-
  Implies,   // ==>
  Reduces,   // ~>
  Slash,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

bool ident_start(char c) { return isalpha(static_cast<unsigned char>(c)); }
bool ident_cont(char c) {
  return isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class Lexer {
 public:
  Lexer(const std::string& src, int line_base) : src_(src), line_(line_base) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      if (pos_ >= src_.size()) break;
      int l = line_, c = col_;
      char ch = src_[pos_];
      if (ch == '#') {  // comment to end of line
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        continue;
      }
      if (ident_start(ch)) {
        std::string s;
        while (pos_ < src_.size() && ident_cont(src_[pos_])) s += take();
        out.push_back({Tok::Ident, s, l, c});
        continue;
      }
      if (isdigit(static_cast<unsigned char>(ch))) {
        std::string s;
        while (pos_ < src_.size() &&
               isdigit(static_cast<unsigned char>(src_[pos_])))
          s += take();
        out.push_back({Tok::Number, s, l, c});
        continue;
      }
      switch (ch) {
        case '$':
        case '?': {
          advance();
          if (pos_ >= src_.size() || !ident_start(src_[pos_]))
            throw ParseError(std::string("expected identifier after '") + ch +
                                 "'",
                             l, c);
          std::string s;
          while (pos_ < src_.size() && ident_cont(src_[pos_])) s += take();
          out.push_back({ch == '$' ? Tok::Meta : Tok::SVar, s, l, c});
          continue;
        }
        case '(': advance(); out.push_back({Tok::LParen, "(", l, c}); continue;
        case ')': advance(); out.push_back({Tok::RParen, ")", l, c}); continue;
        case '[': advance(); out.push_back({Tok::LBracket, "[", l, c}); continue;
        case ']': advance(); out.push_back({Tok::RBracket, "]", l, c}); continue;
        case ',': advance(); out.push_back({Tok::Comma, ",", l, c}); continue;
        case '.': advance(); out.push_back({Tok::Dot, ".", l, c}); continue;
        case ':': advance(); out.push_back({Tok::Colon, ":", l, c}); continue;
        case '/': advance(); out.push_back({Tok::Slash, "/", l, c}); continue;
        case '-':
          advance();
          expect_char('>', l, c, "'->'");
          out.push_back({Tok::Arrow, "->", l, c});
          continue;
        case '|':
          advance();
          expect_char('-', l, c, "'|-'");
          out.push_back({Tok::Turnstile, "|-", l, c});
          continue;
        case '~':
          advance();
          expect_char('>', l, c, "'~>'");
          out.push_back({Tok::Reduces, "~>", l, c});
          continue;
        case '=':
          advance();
          expect_char('=', l, c, "'==>'");
          expect_char('>', l, c, "'==>'");
          out.push_back({Tok::Implies, "==>", l, c});
          continue;
        default:
          throw ParseError(std::string("unexpected character '") + ch + "'", l,
                           c);
      }
    }
    out.push_back({Tok::End, "", line_, col_});
    return out;
  }

 private:
  void skip_space() {
    while (pos_ < src_.size() &&
           isspace(static_cast<unsigned char>(src_[pos_])))
      advance();
  }
  char take() {
    char c = src_[pos_];
    advance();
    return c;
  }
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  void expect_char(char c, int l, int cc, const char* what) {
    if (pos_ >= src_.size() || src_[pos_] != c)
      throw ParseError(std::string("malformed token, expected ") + what, l, cc);
    advance();
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, TypeStyle style)
      : toks_(std::move(toks)), style_(std::move(style)) {}

  const Token& peek(int k = 0) const {
    size_t i = pos_ + k;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool accept(Tok k) {
    if (!at(k)) return false;
    next();
    return true;
  }
  Token expect(Tok k, const char* what) {
    if (!at(k))
      throw ParseError(std::string("expected ") + what + ", found '" +
                           (peek().text.empty() ? "end of input" : peek().text) +
                           "'",
                       peek().line, peek().col);
    return next();
  }
  void expect_end() {
    if (!at(Tok::End))
      throw ParseError("trailing input after expression: '" + peek().text + "'",
                       peek().line, peek().col);
  }

  // term := ident | ident ident '.' term | ident '(' args ')' | '$'m | '(' term ')'
  TermRef term(bool allow_meta) {
    if (at(Tok::Meta)) {
      if (!allow_meta)
        throw ParseError("term metavariable '$" + peek().text +
                             "' is only allowed in rule schemas",
                         peek().line, peek().col);
      return tmeta(next().text);
    }
    if (accept(Tok::LParen)) {
      TermRef t = term(allow_meta);
      expect(Tok::RParen, "')'");
      return t;
    }
    Token id = expect(Tok::Ident, "a term");
    if (at(Tok::Ident) && peek(1).kind == Tok::Dot) {
      Token v = next();
      next();  // dot
      return tbinder(id.text, v.text, term(allow_meta));
    }
    if (accept(Tok::LParen)) {
      std::vector<TermRef> args;
      if (!at(Tok::RParen)) {
        args.push_back(term(allow_meta));
        while (accept(Tok::Comma)) args.push_back(term(allow_meta));
      }
      expect(Tok::RParen, "')'");
      return tnode(id.text, std::move(args));
    }
    return tvar(id.text);
  }

  // type  := infixty [ '->' type ]          (right-assoc arrow, loosest)
  // infixty := atomty [ NAME atomty ]       (declared infix, non-assoc)
  // atomty := ident | ident '(' types ')' | '?'v | '(' type ')'
  TypeRef type() {
    TypeRef lhs = infix_type();
    if (accept(Tok::Arrow)) return arrow(lhs, type());
    return lhs;
  }

  TypeRef infix_type() {
    TypeRef lhs = atom_type();
    if (at(Tok::Ident) && style_.infix.count(peek().text)) {
      std::string con = next().text;
      TypeRef rhs = atom_type();
      return tcon(con, {lhs, rhs});
    }
    return lhs;
  }

  TypeRef atom_type() {
    if (at(Tok::SVar)) return tysvar(next().text);
    if (accept(Tok::LParen)) {
      TypeRef t = type();
      expect(Tok::RParen, "')'");
      return t;
    }
    Token id = expect(Tok::Ident, "a type");
    if (accept(Tok::LParen)) {
      std::vector<TypeRef> args;
      if (!at(Tok::RParen)) {
        args.push_back(type());
        while (accept(Tok::Comma)) args.push_back(type());
      }
      expect(Tok::RParen, "')'");
      return tcon(id.text, std::move(args));
    }
    return atom(id.text);
  }

  Hat hat(bool allow_frown) {
    if (at(Tok::Ident) && peek().text == "FROWN") {
      if (!allow_frown)
        throw ParseError("FROWN is not a type and is not allowed here",
                         peek().line, peek().col);
      next();
      return Hat::frown();
    }
    return Hat::ty(type());
  }

 private:
  std::vector<Token> toks_;
  TypeStyle style_;
  size_t pos_ = 0;
};

std::vector<Token> lex(const std::string& src, int line_base = 1) {
  return Lexer(src, line_base).run();
}

}  // namespace

TermRef parse_term(const std::string& src, bool allow_meta) {
  Parser p(lex(src), {});
  TermRef t = p.term(allow_meta);
  p.expect_end();
  return t;
}

TypeRef parse_type(const std::string& src, const TypeStyle& style) {
  Parser p(lex(src), style);
  TypeRef t = p.type();
  p.expect_end();
  return t;
}

Hat parse_hat(const std::string& src, const TypeStyle& style,
              bool allow_frown) {
  Parser p(lex(src), style);
  Hat h = p.hat(allow_frown);
  p.expect_end();
  return h;
}

std::vector<std::pair<std::string, Hat>> parse_context(
    const std::string& src, const TypeStyle& style) {
  std::vector<std::pair<std::string, Hat>> out;
  Parser p(lex(src), style);
  if (p.at(Tok::End)) return out;
  do {
    Token v = p.expect(Tok::Ident, "a variable name");
    p.expect(Tok::Colon, "':'");
    for (const auto& [seen, h] : out)
      if (seen == v.text)
        throw ParseError("variable '" + v.text + "' bound twice in context",
                         v.line, v.col);
    out.emplace_back(v.text, p.hat(false));
  } while (p.accept(Tok::Comma));
  p.expect_end();
  return out;
}

namespace {

// Lines of the .rcalc format. Rule and reduction names may contain characters
// outside the identifier lexer (e.g. '-'), so names are cut at the ':' before
// the body is tokenized.
struct Line {
  int number;
  std::string text;
};

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& s) {
  size_t h = s.find('#');
  return h == std::string::npos ? s : s.substr(0, h);
}

Premise parse_premise(Parser& p) {
  Premise pr;
  if (p.accept(Tok::LBracket)) {
    Token v = p.expect(Tok::Ident, "a hypothesis variable");
    p.expect(Tok::Colon, "':'");
    pr.hyp_var = v.text;
    pr.hyp_type = p.type();
    p.expect(Tok::RBracket, "']'");
    p.expect(Tok::Turnstile, "'|-'");
  }
  Token m = p.expect(Tok::Meta, "a premise subject '$m'");
  pr.subject_meta = m.text;
  p.expect(Tok::Colon, "':'");
  pr.hat = p.hat(true);
  return pr;
}

}  // namespace

Calculus parse_calculus_raw(const std::string& src) {
  Calculus c;
  std::vector<Line> lines;
  {
    std::istringstream in(src);
    std::string raw;
    int n = 0;
    while (std::getline(in, raw)) {
      ++n;
      std::string t = trim(strip_comment(raw));
      if (!t.empty()) lines.push_back({n, t});
    }
  }

  TypeStyle style;  // accumulates infix typecons as they are declared
  for (const Line& line : lines) {
    std::istringstream ls(line.text);
    std::string kw;
    ls >> kw;
    std::string rest;
    std::getline(ls, rest);
    rest = trim(rest);

    if (kw == "calculus") {
      if (rest.empty())
        throw ParseError("calculus declaration needs a name", line.number, 1);
      c.name = rest;
    } else if (kw == "typecon") {
      std::istringstream rs(rest);
      TypeConDecl d;
      std::string arity;
      rs >> d.name >> arity;
      if (d.name.empty() || arity.empty())
        throw ParseError("typecon needs a name and an arity", line.number, 1);
      try {
        d.arity = std::stoi(arity);
      } catch (...) {
        throw ParseError("typecon arity must be a number", line.number, 1);
      }
      std::string flag;
      if (rs >> flag) {
        if (flag != "infix")
          throw ParseError("unknown typecon flag '" + flag + "'", line.number,
                           1);
        d.infix = true;
        style.infix.insert(d.name);
      }
      c.typecons.push_back(std::move(d));
    } else if (kw == "head") {
      std::istringstream rs(rest);
      HeadDecl d;
      std::string role, arity;
      rs >> d.name >> role >> arity;
      if (d.name.empty() || role.empty() || arity.empty())
        throw ParseError("head needs a name, a role and an arity", line.number,
                         1);
      if (role != "constructor" && role != "destructor")
        throw ParseError("head role must be constructor or destructor",
                         line.number, 1);
      d.constructor = role == "constructor";
      try {
        d.arity = std::stoi(arity);
      } catch (...) {
        throw ParseError("head arity must be a number", line.number, 1);
      }
      std::string flag;
      if (rs >> flag) {
        if (flag != "binds")
          throw ParseError("unknown head flag '" + flag + "'", line.number, 1);
        std::string idx;
        if (!(rs >> idx))
          throw ParseError("binds needs an argument index", line.number, 1);
        try {
          d.binds = std::stoi(idx);
        } catch (...) {
          throw ParseError("binds index must be a number", line.number, 1);
        }
      }
      c.heads.push_back(std::move(d));
    } else if (kw == "rule" || kw == "reduction") {
      size_t colon = rest.find(':');
      if (colon == std::string::npos)
        throw ParseError(kw + " needs a ':' after its name", line.number, 1);
      std::string name = trim(rest.substr(0, colon));
      if (name.empty())
        throw ParseError(kw + " needs a name", line.number, 1);
      std::string body = rest.substr(colon + 1);
      Parser p(lex(body, line.number), style);
      if (kw == "rule") {
        TypeRule r;
        r.name = name;
        if (!p.at(Tok::Implies)) {
          r.premises.push_back(parse_premise(p));
          while (p.accept(Tok::Comma)) r.premises.push_back(parse_premise(p));
        }
        p.expect(Tok::Implies, "'==>'");
        r.conclusion_subject = p.term(true);
        p.expect(Tok::Colon, "':'");
        r.conclusion_hat = p.hat(true);
        p.expect_end();
        c.rules.push_back(std::move(r));
      } else {
        ReductionRule r;
        r.name = name;
        r.redex = p.term(true);
        p.expect(Tok::Reduces, "'~>'");
        Token m = p.expect(Tok::Meta, "a contractum metavariable '$m'");
        r.contractum.meta = m.text;
        if (p.accept(Tok::LBracket)) {
          Token sm = p.expect(Tok::Meta, "a metavariable '$m'");
          p.expect(Tok::Slash, "'/'");
          Token v = p.expect(Tok::Ident, "a variable");
          p.expect(Tok::RBracket, "']'");
          r.contractum.is_subst = true;
          r.contractum.subst_meta = sm.text;
          r.contractum.subst_var = v.text;
        }
        p.expect_end();
        c.reductions.push_back(std::move(r));
      }
    } else {
      throw ParseError("unknown declaration '" + kw + "'", line.number, 1);
    }
  }
  if (c.name.empty()) throw ParseError("missing 'calculus <name>' declaration");
  return c;
}

Calculus parse_calculus(const std::string& src) {
  Calculus c = parse_calculus_raw(src);
  std::vector<Diagnostic> diags = validate(c);
  if (!diags.empty()) {
    std::string msg = "calculus '" + c.name + "' failed validation:";
    for (const auto& d : diags) msg += "\n  [" + d.code + "] " + d.message;
    throw ParseError(msg);
  }
  return c;
}

}  // namespace redlab
