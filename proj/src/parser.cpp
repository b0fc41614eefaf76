#include "cplogic/parser.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <set>

#include "cplogic/errors.hpp"

namespace cplogic {

namespace {

enum class Tok {
  ident,
  integer,
  decimal,
  arrow,      // <-
  le,         // <=
  lt,         // <
  ge,         // >=
  gt,         // >
  eq,         // =
  ne,         // !=
  dotdot,     // ..
  dot,
  lparen,
  rparen,
  comma,
  colon,
  semicolon,
  amp,
  pipe,
  tilde,
  bang,
  question,
  plus,
  minus,
  slash,
  end,
};

struct Token {
  Tok kind;
  std::string text;
  long value = 0;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& cur() const { return cur_; }

  void advance() {
    skip_space();
    cur_.line = line_;
    cur_.col = col_;
    if (pos_ >= src_.size()) {
      cur_.kind = Tok::end;
      cur_.text.clear();
      return;
    }
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        bump();
      cur_.kind = Tok::ident;
      cur_.text = std::string(src_.substr(start, pos_ - start));
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) bump();
      // A dot continues the number only when followed by a digit; "1..3" and
      // the law-terminating "3." must both leave the integer intact.
      if (pos_ + 1 < src_.size() && src_[pos_] == '.' &&
          std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
        bump();
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) bump();
        cur_.kind = Tok::decimal;
        cur_.text = std::string(src_.substr(start, pos_ - start));
        return;
      }
      cur_.kind = Tok::integer;
      cur_.text = std::string(src_.substr(start, pos_ - start));
      cur_.value = std::stol(cur_.text);
      return;
    }
    auto two = [&](char a, char b) {
      return c == a && pos_ + 1 < src_.size() && src_[pos_ + 1] == b;
    };
    if (two('<', '-')) return emit(Tok::arrow, 2);
    if (two('<', '=')) return emit(Tok::le, 2);
    if (two('>', '=')) return emit(Tok::ge, 2);
    if (two('!', '=')) return emit(Tok::ne, 2);
    if (two('.', '.')) return emit(Tok::dotdot, 2);
    switch (c) {
      case '<': return emit(Tok::lt, 1);
      case '>': return emit(Tok::gt, 1);
      case '=': return emit(Tok::eq, 1);
      case '.': return emit(Tok::dot, 1);
      case '(': return emit(Tok::lparen, 1);
      case ')': return emit(Tok::rparen, 1);
      case ',': return emit(Tok::comma, 1);
      case ':': return emit(Tok::colon, 1);
      case ';': return emit(Tok::semicolon, 1);
      case '&': return emit(Tok::amp, 1);
      case '|': return emit(Tok::pipe, 1);
      case '~': return emit(Tok::tilde, 1);
      case '!': return emit(Tok::bang, 1);
      case '?': return emit(Tok::question, 1);
      case '+': return emit(Tok::plus, 1);
      case '-': return emit(Tok::minus, 1);
      case '/': return emit(Tok::slash, 1);
      default:
        throw ParseError(Errc::syntax_error, std::string("unexpected character '") + c + "'", line_, col_);
    }
  }

 private:
  void emit(Tok kind, int len) {
    cur_.kind = kind;
    cur_.text = std::string(src_.substr(pos_, static_cast<std::size_t>(len)));
    for (int i = 0; i < len; ++i) bump();
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token cur_;
};

// An operand inside a formula is either a term or a predicate application;
// which one is meant only becomes clear from the following token.
struct Operand {
  TermPtr term;                       // set when the operand is a plain term
  std::optional<AtomRef> atom;        // set when it can be read as an atom
  int line = 1, col = 1;
};

class Parser {
 public:
  Parser(std::string_view src, Vocabulary* vocab, const ParseOptions& opts)
      : lex_(src), vocab_(vocab), opts_(opts) {}

  CPTheory parse_theory_items() {
    CPTheory theory;
    theory.vocab = *vocab_;
    vocab_ = &theory.vocab;
    while (lex_.cur().kind != Tok::end) {
      if (lex_.cur().kind == Tok::ident &&
          (lex_.cur().text == "pred" || lex_.cur().text == "const" || lex_.cur().text == "range")) {
        parse_declaration();
      } else {
        CPLaw law = parse_one_law();
        law.source_index = static_cast<int>(theory.laws.size());
        theory.laws.push_back(std::move(law));
      }
    }
    return theory;
  }

  CPLaw parse_single_law() {
    CPLaw law = parse_one_law();
    expect_end();
    return law;
  }

  FormulaPtr parse_closed_formula() {
    FormulaPtr f = parse_formula_top();
    expect_end();
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, Errc code = Errc::syntax_error) const {
    throw ParseError(code, msg, lex_.cur().line, lex_.cur().col);
  }

  void expect(Tok kind, const char* what) {
    if (lex_.cur().kind != kind) fail(std::string("expected ") + what);
    lex_.advance();
  }

  void expect_end() {
    if (lex_.cur().kind != Tok::end) fail("trailing input");
  }

  bool accept(Tok kind) {
    if (lex_.cur().kind != kind) return false;
    lex_.advance();
    return true;
  }

  std::string expect_ident(const char* what) {
    if (lex_.cur().kind != Tok::ident) fail(std::string("expected ") + what);
    std::string s = lex_.cur().text;
    lex_.advance();
    return s;
  }

  long expect_int() {
    bool neg = accept(Tok::minus);
    if (lex_.cur().kind != Tok::integer) fail("expected integer");
    long v = lex_.cur().value;
    lex_.advance();
    return neg ? -v : v;
  }

  // --- declarations -------------------------------------------------------

  void parse_declaration() {
    std::string kw = expect_ident("declaration keyword");
    if (kw == "pred") {
      PredDecl decl;
      decl.name = expect_ident("predicate name");
      if (accept(Tok::slash)) {
        if (lex_.cur().kind != Tok::integer) fail("expected arity");
        decl.arity = static_cast<int>(lex_.cur().value);
        lex_.advance();
      } else if (accept(Tok::lparen)) {
        do {
          decl.arg_sorts.push_back(expect_ident("sort name"));
        } while (accept(Tok::comma));
        expect(Tok::rparen, ")");
        decl.arity = static_cast<int>(decl.arg_sorts.size());
      }
      if (lex_.cur().kind == Tok::ident && lex_.cur().text == "exogenous") {
        decl.exogenous = true;
        lex_.advance();
      }
      expect(Tok::dot, ".");
      vocab_->add_predicate(std::move(decl));
    } else if (kw == "const") {
      std::vector<std::string> names;
      do {
        names.push_back(expect_ident("constant name"));
      } while (accept(Tok::comma));
      std::string sort;
      if (accept(Tok::colon)) sort = expect_ident("sort name");
      expect(Tok::dot, ".");
      for (const std::string& n : names) vocab_->add_constant(n, sort);
    } else if (kw == "range") {
      std::string name = expect_ident("range name");
      long lo = expect_int();
      expect(Tok::dotdot, "..");
      long hi = expect_int();
      expect(Tok::dot, ".");
      vocab_->add_range(name, lo, hi);
    }
  }

  // --- laws ---------------------------------------------------------------

  CPLaw parse_one_law() {
    CPLaw law;
    while (lex_.cur().kind == Tok::bang) {
      lex_.advance();
      std::string v = expect_ident("variable name");
      for (const std::string& existing : law.vars)
        if (existing == v) fail("duplicate law variable " + v);
      law.vars.push_back(v);
    }
    scopes_.assign(law.vars.begin(), law.vars.end());

    law.head.push_back(parse_head_disjunct());
    while (lex_.cur().kind == Tok::semicolon ||
           (lex_.cur().kind == Tok::ident && lex_.cur().text == "or")) {
      lex_.advance();
      law.head.push_back(parse_head_disjunct());
    }
    if (accept(Tok::arrow)) law.body = parse_formula_top();
    int end_line = lex_.cur().line, end_col = lex_.cur().col;
    expect(Tok::dot, "'.' at end of law");

    for (const auto& h : law.head) {
      if (vocab_->predicates()[static_cast<std::size_t>(h.atom.pred)].exogenous)
        throw ParseError(Errc::exogenous_in_head,
                         "exogenous predicate " +
                             vocab_->predicates()[static_cast<std::size_t>(h.atom.pred)].name +
                             " in head",
                         end_line, end_col);
      if (h.prob <= 0)
        throw ParseError(Errc::non_positive_probability,
                         "head probability " + rational_string(h.prob) + " is not positive", end_line,
                         end_col);
    }
    if (head_mass(law) > 1)
      throw ParseError(Errc::head_mass_exceeded,
                       "head probabilities sum to " + rational_string(head_mass(law)), end_line,
                       end_col);

    infer_law_var_candidates(law);
    scopes_.clear();
    return law;
  }

  HeadChoice parse_head_disjunct() {
    HeadChoice choice;
    if (lex_.cur().kind == Tok::lparen) {
      lex_.advance();
      choice.atom = parse_head_atom();
      expect(Tok::colon, "':' in annotated head atom");
      choice.prob = parse_probability();
      expect(Tok::rparen, ")");
    } else {
      choice.atom = parse_head_atom();
      choice.prob = 1;
    }
    return choice;
  }

  AtomRef parse_head_atom() {
    std::string name = expect_ident("atom");
    std::vector<TermPtr> args;
    if (accept(Tok::lparen)) {
      do {
        args.push_back(parse_term());
      } while (accept(Tok::comma));
      expect(Tok::rparen, ")");
    }
    return make_atom_ref(name, std::move(args));
  }

  Rational parse_probability() {
    if (lex_.cur().kind == Tok::decimal) {
      Rational q = parse_rational(lex_.cur().text);
      lex_.advance();
      return q;
    }
    if (lex_.cur().kind == Tok::integer) {
      mpz_class num(lex_.cur().text);
      lex_.advance();
      if (accept(Tok::slash)) {
        if (lex_.cur().kind != Tok::integer) fail("expected denominator");
        mpz_class den(lex_.cur().text);
        lex_.advance();
        if (den == 0) fail("zero denominator");
        Rational q(num, den);
        q.canonicalize();
        return q;
      }
      return Rational(num);
    }
    fail("expected probability");
  }

  // --- formulas -----------------------------------------------------------

  FormulaPtr parse_formula_top() { return parse_or(); }

  FormulaPtr parse_or() {
    FormulaPtr f = parse_and();
    while (accept(Tok::pipe)) f = Formula::disj(f, parse_and());
    return f;
  }

  FormulaPtr parse_and() {
    FormulaPtr f = parse_unary();
    while (accept(Tok::amp)) f = Formula::conj(f, parse_unary());
    return f;
  }

  FormulaPtr parse_unary() {
    if (lex_.cur().kind == Tok::tilde ||
        (lex_.cur().kind == Tok::ident && lex_.cur().text == "not")) {
      lex_.advance();
      return Formula::negation(parse_unary());
    }
    if (lex_.cur().kind == Tok::bang || lex_.cur().kind == Tok::question) {
      bool universal = lex_.cur().kind == Tok::bang;
      lex_.advance();
      std::string v = expect_ident("variable name");
      scopes_.push_back(v);
      // Quantifiers extend to the right maximally.
      FormulaPtr body = parse_formula_top();
      scopes_.pop_back();
      std::vector<ConstId> candidates = infer_candidates(v, body);
      return Formula::quant(universal ? Formula::Kind::forall : Formula::Kind::exists, v,
                            std::move(candidates), body);
    }
    return parse_primary();
  }

  FormulaPtr parse_primary() {
    if (accept(Tok::lparen)) {
      FormulaPtr f = parse_formula_top();
      expect(Tok::rparen, ")");
      return f;
    }
    if (lex_.cur().kind == Tok::ident && lex_.cur().text == "true") {
      lex_.advance();
      return Formula::truth_const(true);
    }
    if (lex_.cur().kind == Tok::ident && lex_.cur().text == "false") {
      lex_.advance();
      return Formula::truth_const(false);
    }

    Operand first = parse_operand();
    std::optional<CompareRel> rel;
    bool swapped = false;
    switch (lex_.cur().kind) {
      case Tok::eq: rel = CompareRel::eq; break;
      case Tok::ne: rel = CompareRel::ne; break;
      case Tok::lt: rel = CompareRel::lt; break;
      case Tok::le: rel = CompareRel::le; break;
      case Tok::gt: rel = CompareRel::lt, swapped = true; break;
      case Tok::ge: rel = CompareRel::le, swapped = true; break;
      default: break;
    }
    if (rel) {
      lex_.advance();
      if (!first.term)
        throw ParseError(Errc::syntax_error, "atoms cannot be compared", first.line, first.col);
      Operand second = parse_operand();
      if (!second.term)
        throw ParseError(Errc::syntax_error, "atoms cannot be compared", second.line, second.col);
      return swapped ? Formula::compare(*rel, second.term, first.term)
                     : Formula::compare(*rel, first.term, second.term);
    }
    if (!first.atom)
      throw ParseError(Errc::syntax_error, "expected a formula", first.line, first.col);
    return Formula::atom(first.atom->pred, first.atom->args);
  }

  // Parses either a term (possibly arithmetic) or a predicate application.
  Operand parse_operand() {
    Operand out;
    out.line = lex_.cur().line;
    out.col = lex_.cur().col;

    if (lex_.cur().kind == Tok::ident) {
      std::string name = lex_.cur().text;
      lex_.advance();
      if (accept(Tok::lparen)) {
        std::vector<TermPtr> args;
        do {
          args.push_back(parse_term());
        } while (accept(Tok::comma));
        expect(Tok::rparen, ")");
        out.atom = make_atom_ref(name, std::move(args));
        return out;
      }
      // Bare identifier: a bound variable or constant is a term; otherwise it
      // may also be a 0-ary atom.  Comparison context disambiguates later.
      if (is_bound(name)) {
        out.term = Term::variable(name);
      } else if (PredId p = vocab_->find_predicate(name, 0); p >= 0) {
        out.atom = AtomRef{p, {}};
        return out;
      } else {
        out.term = resolve_constant_term(name);
      }
    } else {
      out.term = parse_term_factor();
    }
    while (lex_.cur().kind == Tok::plus || lex_.cur().kind == Tok::minus) {
      char op = lex_.cur().kind == Tok::plus ? '+' : '-';
      lex_.advance();
      out.term = Term::arith(op, out.term, parse_term_factor());
    }
    return out;
  }

  TermPtr parse_term() {
    TermPtr t = parse_term_factor();
    while (lex_.cur().kind == Tok::plus || lex_.cur().kind == Tok::minus) {
      char op = lex_.cur().kind == Tok::plus ? '+' : '-';
      lex_.advance();
      t = Term::arith(op, t, parse_term_factor());
    }
    return t;
  }

  TermPtr parse_term_factor() {
    if (lex_.cur().kind == Tok::integer) {
      long v = lex_.cur().value;
      lex_.advance();
      return Term::integer(v);
    }
    if (lex_.cur().kind == Tok::ident) {
      std::string name = lex_.cur().text;
      lex_.advance();
      if (is_bound(name)) return Term::variable(name);
      return resolve_constant_term(name);
    }
    fail("expected term");
  }

  TermPtr resolve_constant_term(const std::string& name) {
    ConstId c = vocab_->find_constant(name);
    if (c < 0) {
      if (!opts_.auto_declare_constants)
        fail("undeclared constant '" + name + "'", Errc::undeclared_symbol);
      c = vocab_->add_constant(name, "");
    }
    return Term::constant(c);
  }

  AtomRef make_atom_ref(const std::string& name, std::vector<TermPtr> args) {
    PredId p = vocab_->find_predicate(name, static_cast<int>(args.size()));
    if (p < 0)
      fail("undeclared predicate " + name + "/" + std::to_string(args.size()),
           Errc::undeclared_symbol);
    // Explicit constants must fit the declared argument sorts.
    const PredDecl& decl = vocab_->predicates()[static_cast<std::size_t>(p)];
    if (!decl.arg_sorts.empty()) {
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i]->kind == Term::Kind::constant &&
            !vocab_->constant_in_sort(args[i]->cid, decl.arg_sorts[i]))
          fail("constant " + vocab_->constants()[static_cast<std::size_t>(args[i]->cid)].name +
               " is not in sort " + decl.arg_sorts[i]);
      }
    }
    return AtomRef{p, std::move(args)};
  }

  bool is_bound(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
      if (*it == name) return true;
    return false;
  }

  // --- candidate inference ------------------------------------------------

  struct VarUse {
    std::set<std::string> sorts;
    bool in_arith = false;
  };

  void collect_term_uses(const TermPtr& t, const std::string& v, const std::string& sort, bool in_arith,
                         VarUse& use) const {
    if (!t) return;
    switch (t->kind) {
      case Term::Kind::variable:
        if (t->var == v) {
          if (in_arith)
            use.in_arith = true;
          else if (!sort.empty())
            use.sorts.insert(sort);
        }
        break;
      case Term::Kind::arith:
        collect_term_uses(t->lhs, v, "", true, use);
        collect_term_uses(t->rhs, v, "", true, use);
        break;
      default: break;
    }
  }

  void collect_atom_uses(PredId pred, const std::vector<TermPtr>& args, const std::string& v,
                         VarUse& use) const {
    const PredDecl& decl = vocab_->predicates()[static_cast<std::size_t>(pred)];
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::string sort = decl.arg_sorts.empty() ? std::string() : decl.arg_sorts[i];
      collect_term_uses(args[i], v, sort, false, use);
    }
  }

  void collect_formula_uses(const FormulaPtr& f, const std::string& v, VarUse& use) const {
    if (!f) return;
    switch (f->kind) {
      case Formula::Kind::atom: collect_atom_uses(f->pred, f->args, v, use); break;
      case Formula::Kind::compare:
        // Order comparisons force integer candidates; equality does not.
        collect_term_uses(f->lhs, v, "", f->rel == CompareRel::lt || f->rel == CompareRel::le, use);
        collect_term_uses(f->rhs, v, "", f->rel == CompareRel::lt || f->rel == CompareRel::le, use);
        break;
      case Formula::Kind::f_not: collect_formula_uses(f->a, v, use); break;
      case Formula::Kind::f_and:
      case Formula::Kind::f_or:
        collect_formula_uses(f->a, v, use);
        collect_formula_uses(f->b, v, use);
        break;
      case Formula::Kind::forall:
      case Formula::Kind::exists:
        if (f->var != v) collect_formula_uses(f->a, v, use);  // shadowing
        break;
      case Formula::Kind::truth: break;
    }
  }

  std::vector<ConstId> candidates_from_use(const VarUse& use) const {
    std::vector<ConstId> out;
    for (std::size_t i = 0; i < vocab_->constants().size(); ++i) {
      ConstId c = static_cast<ConstId>(i);
      bool ok = true;
      for (const std::string& s : use.sorts)
        if (!vocab_->constant_in_sort(c, s)) ok = false;
      if (use.in_arith && !vocab_->constants()[i].is_int) ok = false;
      if (ok) out.push_back(c);
    }
    return out;
  }

  std::vector<ConstId> infer_candidates(const std::string& v, const FormulaPtr& body) const {
    VarUse use;
    collect_formula_uses(body, v, use);
    return candidates_from_use(use);
  }

  void infer_law_var_candidates(CPLaw& law) const {
    law.var_candidates.clear();
    for (const std::string& v : law.vars) {
      VarUse use;
      for (const auto& h : law.head) collect_atom_uses(h.atom.pred, h.atom.args, v, use);
      collect_formula_uses(law.body, v, use);
      law.var_candidates.push_back(candidates_from_use(use));
    }
  }

  Lexer lex_;
  Vocabulary* vocab_;
  ParseOptions opts_;
  std::vector<std::string> scopes_;
};

}  // namespace

CPTheory parse_theory(std::string_view text, const ParseOptions& opts) {
  Vocabulary empty;
  Parser p(text, &empty, opts);
  return p.parse_theory_items();
}

FormulaPtr parse_formula(std::string_view text, const Vocabulary& vocab) {
  Vocabulary copy = vocab;
  Parser p(text, &copy, ParseOptions{});
  return p.parse_closed_formula();
}

CPLaw parse_law(std::string_view text, const Vocabulary& vocab) {
  Vocabulary copy = vocab;
  Parser p(text, &copy, ParseOptions{});
  return p.parse_single_law();
}

}  // namespace cplogic
