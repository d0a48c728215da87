#include "ergoplan/stl/sexpr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <vector>

#include "ergoplan/error.hpp"

namespace ergoplan::stl {

namespace {

void append_number(std::string& out, double x) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  std::string_view s(buf.data(), static_cast<std::size_t>(res.ptr - buf.data()));
  out.append(s);
  // Keep seconds and weights readable as decimal literals.
  if (s.find_first_of(".eEn") == std::string_view::npos) out.append(".0");
}

void print(const Formula& f, std::string& out) {
  switch (f.op()) {
    case Op::kPredicate:
      out += "(pred ";
      append_number(out, f.pred().offset);
      for (const auto& [name, w] : f.pred().coefficients) {
        out += " (";
        out += name;
        out += ' ';
        append_number(out, w);
        out += ')';
      }
      out += ')';
      return;
    case Op::kNot:
      out += "(not ";
      print(f.children()[0], out);
      out += ')';
      return;
    case Op::kAnd:
    case Op::kOr:
      out += f.op() == Op::kAnd ? "(and" : "(or";
      for (const auto& c : f.children()) {
        out += ' ';
        print(c, out);
      }
      out += ')';
      return;
    case Op::kAlways:
    case Op::kEventually:
    case Op::kNext:
    case Op::kUntil: {
      static constexpr std::array<const char*, 4> kNames = {"(always ", "(eventually ", "(next ", "(until "};
      out += kNames[static_cast<int>(f.op()) - static_cast<int>(Op::kAlways)];
      append_number(out, f.interval().lower);
      out += ' ';
      append_number(out, f.interval().upper);
      for (const auto& c : f.children()) {
        out += ' ';
        print(c, out);
      }
      out += ')';
      return;
    }
  }
}

struct Token {
  enum Kind { kOpen, kClose, kAtom, kEnd } kind;
  std::string_view text;
  int line;
  int column;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) { advance(); }

  Formula parse_all() {
    Formula f = parse_formula();
    if (tok_.kind != Token::kEnd) fail("trailing input after formula");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(std::to_string(tok_.line) + ":" + std::to_string(tok_.column) + ": " + what);
  }

  void advance() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ';') {  // comment to end of line
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
    tok_.line = line_;
    tok_.column = column_;
    if (pos_ >= text_.size()) {
      tok_.kind = Token::kEnd;
      tok_.text = {};
      return;
    }
    const char c = text_[pos_];
    if (c == '(' || c == ')') {
      tok_.kind = c == '(' ? Token::kOpen : Token::kClose;
      tok_.text = text_.substr(pos_, 1);
      bump();
      return;
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != ';' &&
           !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      bump();
    }
    tok_.kind = Token::kAtom;
    tok_.text = text_.substr(start, pos_ - start);
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void expect(Token::Kind kind, const char* what) {
    if (tok_.kind != kind) fail(std::string("expected ") + what);
    advance();
  }

  std::string atom(const char* what) {
    if (tok_.kind != Token::kAtom) fail(std::string("expected ") + what);
    std::string s(tok_.text);
    advance();
    return s;
  }

  double number(const char* what) {
    if (tok_.kind != Token::kAtom) fail(std::string("expected ") + what);
    double x = 0.0;
    const char* first = tok_.text.data();
    const char* last = first + tok_.text.size();
    if (*first == '+') ++first;
    const auto res = std::from_chars(first, last, x);
    if (res.ec != std::errc() || res.ptr != last) fail("invalid number '" + std::string(tok_.text) + "'");
    advance();
    return x;
  }

  Interval interval() {
    const double lo = number("interval lower bound");
    const double hi = number("interval upper bound");
    if (!(lo >= 0.0) || !(lo <= hi)) fail("invalid interval");
    return Interval{lo, hi};
  }

  Formula parse_formula() {
    expect(Token::kOpen, "'('");
    const std::string head = atom("operator name");
    Formula f = [&]() -> Formula {
      if (head == "pred") {
        Predicate p;
        p.offset = number("predicate offset");
        while (tok_.kind == Token::kOpen) {
          advance();
          std::string name = atom("channel name");
          const double w = number("channel weight");
          if (!p.coefficients.emplace(std::move(name), w).second) fail("channel repeated in predicate");
          expect(Token::kClose, "')' after channel weight");
        }
        return Formula::predicate(std::move(p));
      }
      if (head == "not") return Formula::negation(parse_formula());
      if (head == "and" || head == "or") {
        std::vector<Formula> children;
        while (tok_.kind == Token::kOpen) children.push_back(parse_formula());
        if (children.size() < 2) fail("'" + head + "' needs at least two operands");
        return head == "and" ? Formula::conjunction(std::move(children))
                             : Formula::disjunction(std::move(children));
      }
      if (head == "always" || head == "eventually" || head == "next") {
        const Interval i = interval();
        Formula child = parse_formula();
        if (head == "always") return Formula::always(i, std::move(child));
        if (head == "eventually") return Formula::eventually(i, std::move(child));
        return Formula::next(i, std::move(child));
      }
      if (head == "until") {
        const Interval i = interval();
        Formula lhs = parse_formula();
        Formula rhs = parse_formula();
        return Formula::until(i, std::move(lhs), std::move(rhs));
      }
      fail("unknown operator '" + head + "'");
    }();
    expect(Token::kClose, "')'");
    return f;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  Token tok_{Token::kEnd, {}, 1, 1};
};

}  // namespace

std::string to_sexpr(const Formula& formula) {
  std::string out;
  print(formula, out);
  return out;
}

Formula parse_sexpr(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace ergoplan::stl
