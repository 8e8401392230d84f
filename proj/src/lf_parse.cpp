#include <algorithm>
#include <cctype>
#include <sstream>

#include "lfhh/lf_syntax.hpp"

namespace lfhh {

namespace {

enum class Tok { Ident, Type, Colon, Dot, LBrace, RBrace, LBrack, RBrack, LParen, RParen, Arrow, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '%') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    int l = line, cc = col;
    auto single = [&](Tok k) {
      out.push_back({k, std::string(1, c), l, cc});
      advance(1);
    };
    switch (c) {
      case ':': single(Tok::Colon); continue;
      case '.': single(Tok::Dot); continue;
      case '{': single(Tok::LBrace); continue;
      case '}': single(Tok::RBrace); continue;
      case '[': single(Tok::LBrack); continue;
      case ']': single(Tok::RBrack); continue;
      case '(': single(Tok::LParen); continue;
      case ')': single(Tok::RParen); continue;
      default: break;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      out.push_back({Tok::Arrow, "->", l, cc});
      advance(2);
      continue;
    }
    if (ident_char(c) && c != '\'') {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      std::string word(src.substr(i, j - i));
      out.push_back({word == "type" ? Tok::Type : Tok::Ident, word, l, cc});
      advance(j - i);
      continue;
    }
    throw LfError("parse", "line " + std::to_string(l) + ", column " + std::to_string(cc) +
                               ": unexpected character '" + std::string(1, c) + "'");
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

bool uppercase_initial(std::string_view s) {
  return !s.empty() && std::isupper(static_cast<unsigned char>(s[0]));
}

class Parser {
 public:
  enum class Mode { Signature, Query, Expr };

  Parser(std::string_view src, Mode mode, const Signature* sig)
      : toks_(lex(src)), mode_(mode), sig_(sig) {}

  Signature signature() {
    Signature out;
    while (peek().kind != Tok::End) {
      const Token& name = expect(Tok::Ident, "declaration name");
      expect(Tok::Colon, "':'");
      Expr cls = expr();
      expect(Tok::Dot, "'.' ending the declaration");
      if (out.find(name.text))
        fail(name, "duplicate declaration of " + name.text);
      out.add(Decl{name.text, cls, sort_of_classifier(cls), name.line, name.col});
    }
    return out;
  }

  Expr whole_expr() {
    Expr e = expr();
    if (peek().kind == Tok::Dot) ++pos_;
    if (peek().kind != Tok::End) fail(peek(), "unexpected '" + peek().text + "'");
    return e;
  }

  std::vector<std::string> metas() const { return metas_; }

 private:
  const Token& peek() const { return toks_[pos_]; }

  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw LfError("parse", "line " + std::to_string(t.line) + ", column " + std::to_string(t.col) + ": " + msg);
  }

  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k)
      fail(peek(), std::string("expected ") + what + ", found " +
                       (peek().kind == Tok::End ? std::string("end of input") : "'" + peek().text + "'"));
    return toks_[pos_++];
  }

  bool starts_atom() const {
    Tok k = peek().kind;
    return k == Tok::Ident || k == Tok::Type || k == Tok::LParen;
  }

  Expr expr() {
    Tok k = peek().kind;
    if (k == Tok::LBrace || k == Tok::LBrack) {
      const Token& open = toks_[pos_++];
      const Token& name = expect(Tok::Ident, "binder name");
      if (mode_ == Mode::Query && uppercase_initial(name.text) && !(sig_ && sig_->find(name.text)))
        fail(name, "meta-variable " + name.text + " used at binder position");
      expect(Tok::Colon, "':'");
      Expr annot = expr();
      expect(k == Tok::LBrace ? Tok::RBrace : Tok::RBrack, k == Tok::LBrace ? "'}'" : "']'");
      bound_.push_back(name.text);
      Expr body = expr();
      bound_.pop_back();
      (void)open;
      return k == Tok::LBrace ? Expr::pi(name.text, annot, body) : Expr::lam(name.text, annot, body);
    }
    Expr lhs = application();
    if (peek().kind == Tok::Arrow) {
      ++pos_;
      bound_.push_back("");  // the anonymous binder is never referenced
      Expr rhs = expr();
      bound_.pop_back();
      return Expr::pi("_", lhs, rhs);
    }
    return lhs;
  }

  Expr application() {
    if (!starts_atom()) fail(peek(), "expected an expression, found " +
                                         (peek().kind == Tok::End ? std::string("end of input") : "'" + peek().text + "'"));
    Expr e = atom();
    while (starts_atom()) e = Expr::app(e, atom());
    return e;
  }

  Expr atom() {
    const Token& t = toks_[pos_++];
    switch (t.kind) {
      case Tok::Type:
        return Expr::type();
      case Tok::LParen: {
        Expr e = expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident:
        return resolve(t);
      default:
        fail(t, "unexpected '" + t.text + "'");
    }
  }

  Expr resolve(const Token& t) {
    for (std::size_t i = bound_.size(); i-- > 0;)
      if (bound_[i] == t.text) return Expr::bvar(static_cast<std::uint32_t>(bound_.size() - 1 - i));
    if (mode_ == Mode::Query && uppercase_initial(t.text) && !(sig_ && sig_->find(t.text))) {
      if (std::find(metas_.begin(), metas_.end(), t.text) == metas_.end()) metas_.push_back(t.text);
      return Expr::meta(t.text);
    }
    return Expr::constant(t.text);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Mode mode_;
  const Signature* sig_;
  std::vector<std::string> bound_;
  std::vector<std::string> metas_;
};

// --- printing -------------------------------------------------------------

class Printer {
 public:
  std::string print(const Expr& e) {
    go(e, 0);
    return out_.str();
  }

 private:
  // 0: binder/arrow position, 1: operand of an arrow, 2: application argument
  void go(const Expr& e, int prec) {
    switch (e.tag()) {
      case ExprTag::Type:
        out_ << "type";
        return;
      case ExprTag::Const:
      case ExprTag::Meta:
        out_ << e.name();
        return;
      case ExprTag::BVar:
        if (e.index() < names_.size())
          out_ << names_[names_.size() - 1 - e.index()];
        else
          out_ << "#" << e.index();
        return;
      case ExprTag::Pi:
      case ExprTag::Lam: {
        bool arrow = e.tag() == ExprTag::Pi && !uses_bvar(e.body());
        if (prec > 0) out_ << "(";
        if (arrow) {
          go(e.annot(), 1);
          out_ << " -> ";
          names_.push_back("_");
          go(e.body(), 0);
          names_.pop_back();
        } else {
          std::string n = pick(e.name(), e.body());
          out_ << (e.tag() == ExprTag::Pi ? "{" : "[") << n << ":";
          go(e.annot(), 0);
          out_ << (e.tag() == ExprTag::Pi ? "} " : "] ");
          names_.push_back(n);
          go(e.body(), 0);
          names_.pop_back();
        }
        if (prec > 0) out_ << ")";
        return;
      }
      case ExprTag::App: {
        Spine sp = spine_of(e);
        if (prec > 1) out_ << "(";
        go(sp.head, 2);
        for (const auto& a : sp.args) {
          out_ << " ";
          go(a, 2);
        }
        if (prec > 1) out_ << ")";
        return;
      }
    }
  }

  std::string pick(const std::string& hint, const Expr& body) {
    std::string base = hint.substr(0, hint.find('#'));
    if (base.empty() || base == "_") base = "x";
    auto taken = free_names(body);
    auto clash = [&](const std::string& n) {
      return n == "type" || std::find(names_.begin(), names_.end(), n) != names_.end() ||
             std::find(taken.begin(), taken.end(), n) != taken.end();
    };
    std::string n = base;
    while (clash(n)) n += "'";
    return n;
  }

  std::ostringstream out_;
  std::vector<std::string> names_;
};

}  // namespace

Signature parse_signature(std::string_view text) {
  return Parser(text, Parser::Mode::Signature, nullptr).signature();
}

ParsedQuery parse_query(std::string_view text, const Signature& sig) {
  Parser p(text, Parser::Mode::Query, &sig);
  Expr e = p.whole_expr();
  return ParsedQuery{e, p.metas()};
}

Expr parse_expr(std::string_view text) {
  return Parser(text, Parser::Mode::Expr, nullptr).whole_expr();
}

std::string pretty_print(const Expr& e) { return Printer{}.print(e); }

std::string print_signature(const Signature& sig) {
  std::string out;
  for (const auto& d : sig.entries()) out += d.name + " : " + pretty_print(d.classifier) + ".\n";
  return out;
}

}  // namespace lfhh
