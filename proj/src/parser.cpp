#include "wlp/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

#include "wlp/subset.hpp"

namespace wlp {

namespace {

enum class TokenKind { kVariable, kNumber, kMin, kMax, kAmp, kBar, kLParen, kRParen, kComma, kEnd };

struct Token {
  TokenKind kind;
  std::size_t begin;
  std::size_t end;
  long long index = 0;  // kVariable
  double value = 0.0;   // kNumber
};

constexpr std::size_t kMaxNesting = 256;

SourceSpan make_span(std::string_view src, std::size_t begin, std::size_t end) {
  SourceSpan s{begin, end, 1, 1};
  for (std::size_t i = 0; i < begin && i < src.size(); ++i) {
    if (src[i] == '\n') {
      ++s.line;
      s.column = 1;
    } else {
      ++s.column;
    }
  }
  return s;
}

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

class Parser {
 public:
  Parser(std::string_view source, const LatticeDomain& domain) : src_(source), domain_(domain) {}

  ParsedSystem run() {
    ParsedSystem out;
    try {
      advance();
      if (tok_.kind == TokenKind::kEnd) {
        error("empty system description", tok_.begin, tok_.end);
        throw Abort{};
      }
      Expression expr = parse_expr(0);
      if (tok_.kind != TokenKind::kEnd) {
        error("expected '&', '|' or end of input, found " + describe(tok_), tok_.begin, tok_.end);
        throw Abort{};
      }
      if (!has_error_) {
        out.arity = expr.arity();
        out.expression = std::move(expr);
      }
    } catch (const Abort&) {
      out.expression.reset();
    }
    out.diagnostics = std::move(diagnostics_);
    return out;
  }

 private:
  struct Abort {};

  // ---- lexing ----

  void skip_blank() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c)) != 0) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  void advance() {
    skip_blank();
    const std::size_t start = pos_;
    if (pos_ >= src_.size()) {
      tok_ = Token{TokenKind::kEnd, start, start};
      return;
    }
    const char c = src_[pos_];
    auto single = [&](TokenKind kind) {
      ++pos_;
      tok_ = Token{kind, start, pos_};
    };
    switch (c) {
      case '&': return single(TokenKind::kAmp);
      case '|': return single(TokenKind::kBar);
      case '(': return single(TokenKind::kLParen);
      case ')': return single(TokenKind::kRParen);
      case ',': return single(TokenKind::kComma);
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) != 0 || c == '.' || c == '-' || c == '+') {
      return lex_number(start);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_') return lex_word(start);
    error(std::string("unexpected character '") + c + "'", start, start + 1);
    throw Abort{};
  }

  void lex_number(std::size_t start) {
    std::size_t p = pos_;
    const bool negative = src_[p] == '-';
    if (src_[p] == '-' || src_[p] == '+') ++p;
    if (src_.substr(p, 3) == "inf" && (p + 3 >= src_.size() || !is_word_char(src_[p + 3]))) {
      pos_ = p + 3;
      const double inf = std::numeric_limits<double>::infinity();
      tok_ = Token{TokenKind::kNumber, start, pos_, 0, negative ? -inf : inf};
      return;
    }
    auto digits = [&] {
      const std::size_t from = p;
      while (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p])) != 0) ++p;
      return p - from;
    };
    std::size_t mantissa = digits();
    if (p < src_.size() && src_[p] == '.') {
      ++p;
      mantissa += digits();
    }
    if (mantissa == 0) {
      error("malformed number", start, std::max(p, start + 1));
      throw Abort{};
    }
    if (p < src_.size() && (src_[p] == 'e' || src_[p] == 'E')) {
      std::size_t q = p + 1;
      if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) ++q;
      std::size_t exp_start = q;
      while (q < src_.size() && std::isdigit(static_cast<unsigned char>(src_[q])) != 0) ++q;
      if (q == exp_start) {
        error("malformed exponent", start, q);
        throw Abort{};
      }
      p = q;
    }
    if (p < src_.size() && is_word_char(src_[p])) {
      std::size_t q = p;
      while (q < src_.size() && is_word_char(src_[q])) ++q;
      error("malformed number", start, q);
      throw Abort{};
    }
    // from_chars rejects a leading '+'.
    const std::size_t body = src_[start] == '+' ? start + 1 : start;
    double value = 0.0;
    const auto res = std::from_chars(src_.data() + body, src_.data() + p, value);
    if (res.ec != std::errc{} || res.ptr != src_.data() + p) {
      error("number out of range", start, p);
      throw Abort{};
    }
    pos_ = p;
    tok_ = Token{TokenKind::kNumber, start, p, 0, value};
  }

  void lex_word(std::size_t start) {
    std::size_t p = pos_;
    while (p < src_.size() && is_word_char(src_[p])) ++p;
    const std::string_view word = src_.substr(start, p - start);
    if (word == "min" || word == "max") {
      pos_ = p;
      tok_ = Token{word == "min" ? TokenKind::kMin : TokenKind::kMax, start, p};
      return;
    }
    if (word == "inf") {
      pos_ = p;
      tok_ = Token{TokenKind::kNumber, start, p, 0, std::numeric_limits<double>::infinity()};
      return;
    }
    if (word.front() == 'x') {
      std::string_view digits = word.substr(1);
      bool negative = false;
      if (digits.empty() && p < src_.size() && src_[p] == '-') {
        // "x-3": a negative index, reported below.
        std::size_t q = p + 1;
        while (q < src_.size() && std::isdigit(static_cast<unsigned char>(src_[q])) != 0) ++q;
        if (q > p + 1) {
          digits = src_.substr(p + 1, q - p - 1);
          negative = true;
          p = q;
        }
      }
      const bool numeric = !digits.empty() && std::all_of(digits.begin(), digits.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c)) != 0;
      });
      if (numeric) {
        long long index = 0;
        const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), index);
        if (res.ec != std::errc{}) index = std::numeric_limits<long long>::max();
        pos_ = p;
        tok_ = Token{TokenKind::kVariable, start, p, negative ? -index : index};
        return;
      }
      if (digits.empty()) {
        error("expected a component index after 'x'", start, p);
        throw Abort{};
      }
    }
    error("unknown identifier '" + std::string(word) + "'", start, p);
    throw Abort{};
  }

  // ---- parsing ----

  Expression parse_expr(std::size_t nesting) {
    if (nesting > kMaxNesting) {
      error("expression nested too deeply", tok_.begin, tok_.end);
      throw Abort{};
    }
    Expression left = parse_term(nesting);
    while (tok_.kind == TokenKind::kBar) {
      advance();
      left = Expression::join(std::move(left), parse_term(nesting));
    }
    return left;
  }

  Expression parse_term(std::size_t nesting) {
    Expression left = parse_factor(nesting);
    while (tok_.kind == TokenKind::kAmp) {
      advance();
      left = Expression::meet(std::move(left), parse_factor(nesting));
    }
    return left;
  }

  Expression parse_factor(std::size_t nesting) {
    const Token t = tok_;
    switch (t.kind) {
      case TokenKind::kVariable: {
        advance();
        if (t.index <= 0) {
          error("component index must be at least 1", t.begin, t.end);
          return Expression::constant(domain_.bottom());
        }
        if (t.index > static_cast<long long>(kHardMaxArity)) {
          error("component index exceeds the supported maximum of " +
                    std::to_string(kHardMaxArity),
                t.begin, t.end);
          return Expression::constant(domain_.bottom());
        }
        return Expression::projection(static_cast<std::size_t>(t.index));
      }
      case TokenKind::kNumber:
        advance();
        if (!domain_.contains(t.value)) {
          error("constant " + std::string(src_.substr(t.begin, t.end - t.begin)) +
                    " lies outside the lattice domain " + domain_text(),
                t.begin, t.end);
          return Expression::constant(domain_.bottom());
        }
        return Expression::constant(t.value);
      case TokenKind::kMin:
      case TokenKind::kMax:
        return parse_call(nesting);
      case TokenKind::kLParen: {
        advance();
        Expression inner = parse_expr(nesting + 1);
        expect(TokenKind::kRParen, "')'");
        return inner;
      }
      default:
        error("expected an operand, found " + describe(t), t.begin, t.end);
        throw Abort{};
    }
  }

  Expression parse_call(std::size_t nesting) {
    const Token head = tok_;
    const bool is_min = head.kind == TokenKind::kMin;
    advance();
    expect(TokenKind::kLParen, "'(' after " + std::string(is_min ? "min" : "max"));
    Expression acc = parse_expr(nesting + 1);
    std::size_t count = 1;
    while (tok_.kind == TokenKind::kComma) {
      advance();
      Expression next = parse_expr(nesting + 1);
      acc = is_min ? Expression::meet(std::move(acc), std::move(next))
                   : Expression::join(std::move(acc), std::move(next));
      ++count;
    }
    if (count < 2 && tok_.kind == TokenKind::kRParen) {
      error(std::string(is_min ? "min" : "max") + " needs at least two arguments", head.begin,
            tok_.end);
      throw Abort{};
    }
    expect(TokenKind::kRParen, "',' or ')'");
    return acc;
  }

  void expect(TokenKind kind, const std::string& what) {
    if (tok_.kind != kind) {
      error("expected " + what + ", found " + describe(tok_), tok_.begin, tok_.end);
      throw Abort{};
    }
    advance();
  }

  std::string describe(const Token& t) const {
    if (t.kind == TokenKind::kEnd) return "end of input";
    return "'" + std::string(src_.substr(t.begin, t.end - t.begin)) + "'";
  }

  std::string domain_text() const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "[%g, %g]", domain_.bottom(), domain_.top());
    return buf;
  }

  SourceSpan span(std::size_t begin, std::size_t end) const { return make_span(src_, begin, end); }

  void error(std::string message, std::size_t begin, std::size_t end) {
    has_error_ = true;
    diagnostics_.push_back({Severity::kError, std::move(message), span(begin, end)});
  }

  std::string_view src_;
  const LatticeDomain& domain_;
  std::size_t pos_ = 0;
  Token tok_{TokenKind::kEnd, 0, 0};
  bool has_error_ = false;
  std::vector<ParseDiagnostic> diagnostics_;
};

void collect_indices(const Expression& e, std::vector<bool>& used) {
  if (e.kind() == Expression::Kind::kProjection) {
    used[e.index()] = true;
  } else if (e.is_binary()) {
    collect_indices(e.left(), used);
    collect_indices(e.right(), used);
  }
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

int precedence(const Expression& e) {
  switch (e.kind()) {
    case Expression::Kind::kJoin: return 1;
    case Expression::Kind::kMeet: return 2;
    default: return 3;
  }
}

void format_into(const Expression& e, std::string& out) {
  switch (e.kind()) {
    case Expression::Kind::kProjection:
      out += 'x';
      out += std::to_string(e.index());
      return;
    case Expression::Kind::kConstant:
      out += format_number(e.value());
      return;
    default:
      break;
  }
  const int prec = precedence(e);
  auto operand = [&](const Expression& child, bool right) {
    const int child_prec = precedence(child);
    const bool parens = child_prec < prec || (right && child_prec == prec);
    if (parens) out += '(';
    format_into(child, out);
    if (parens) out += ')';
  };
  operand(e.left(), false);
  out += e.kind() == Expression::Kind::kMeet ? " & " : " | ";
  operand(e.right(), true);
}

}  // namespace

ParsedSystem parse_system(std::string_view source, const LatticeDomain& domain) {
  ParsedSystem result = Parser(source, domain).run();
  if (result.expression) {
    // Indices that never appear make vacuous components; warn over the whole text.
    std::vector<bool> used(result.arity + 1, false);
    collect_indices(*result.expression, used);
    std::size_t first = 0;
    while (first < source.size() && std::isspace(static_cast<unsigned char>(source[first])) != 0) {
      ++first;
    }
    const SourceSpan span = make_span(source, first, source.size());
    for (std::size_t i = 1; i <= result.arity; ++i) {
      if (used[i]) continue;
      result.diagnostics.push_back(
          {Severity::kWarning,
           "component x" + std::to_string(i) + " does not appear; the system has " +
               std::to_string(result.arity) + " components and x" + std::to_string(i) +
               " is vacuous",
           span});
    }
  }
  return result;
}

std::string format_expression(const Expression& expr) {
  std::string out;
  format_into(expr, out);
  return out;
}

std::string format_diagnostic(const ParseDiagnostic& d, std::string_view source) {
  std::string out = std::to_string(d.span.line) + ":" + std::to_string(d.span.column) + ": " +
                    (d.severity == Severity::kError ? "error: " : "warning: ") + d.message + "\n";
  std::size_t line_start = d.span.begin;
  while (line_start > 0 && source[line_start - 1] != '\n') --line_start;
  std::size_t line_end = d.span.begin;
  while (line_end < source.size() && source[line_end] != '\n') ++line_end;
  out += "  ";
  out += source.substr(line_start, line_end - line_start);
  out += "\n  ";
  out += std::string(d.span.begin - line_start, ' ');
  const std::size_t width = std::max<std::size_t>(
      1, std::min(d.span.end, line_end) - std::min(d.span.begin, line_end));
  out += std::string(width, '^');
  out += '\n';
  return out;
}

ParsedSystem parse_system_or_throw(std::string_view source, const LatticeDomain& domain) {
  ParsedSystem result = parse_system(source, domain);
  if (!result.ok()) {
    std::string msg = "could not parse system description";
    for (const auto& d : result.diagnostics) {
      if (d.severity == Severity::kError) {
        msg = std::to_string(d.span.line) + ":" + std::to_string(d.span.column) + ": " + d.message;
        break;
      }
    }
    throw ParseError(msg, result.diagnostics);
  }
  return result;
}

}  // namespace wlp
