#pragma once

// Ket-expression parser for initial states.
//
//   expr    := term { ('+' | '-') term }
//   term    := unary { ('*' | '/') unary | unary }      juxtaposition multiplies
//   unary   := ('+' | '-') unary | primary
//   primary := number | 'i' | 'sqrt' '(' expr ')' | '(' expr ')' | ket
//   ket     := '|' label label '>'  |  '|' label ',' label '>'
//
// Compact labels are single digits ("|10>"); the comma form is needed for
// negative qutrit levels ("|1,-1>"). Whitespace is ignored everywhere.
// Qubit alphabet {1, 0}; qutrit alphabet {1, 0, -1}.

#include <charconv>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "dephasim/error.hpp"
#include "dephasim/state.hpp"

namespace dephasim {

namespace detail {

class KetParser {
 public:
  KetParser(std::string_view text, Dims dims) : text_(text), dims_(dims) {}

  StateVector parse() {
    if (level_index(0, dims_.first) < 0 || level_index(0, dims_.second) < 0)
      throw Error(ErrorCode::UnsupportedDimension,
                  "ket expressions support qubit and qutrit pairs only, got " + to_string(dims_));
    skip_space();
    if (at_end()) throw ParseError(pos_, "empty expression");
    Value value = expr();
    skip_space();
    if (!at_end()) throw ParseError(pos_, std::string("unexpected '") + text_[pos_] + "'");
    if (!value.is_ket) throw ParseError(0, "expression contains no ket");
    return StateVector::normalized(std::move(value.ket), dims_);
  }

 private:
  struct Value {
    bool is_ket = false;
    Complex scalar{0.0, 0.0};
    ComplexVector ket;
  };

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool starts_primary() {
    skip_space();
    const char c = peek();
    return c == '|' || c == '(' || c == '.' || c == 'i' || c == 's' ||
           std::isdigit(static_cast<unsigned char>(c));
  }

  Value expr() {
    Value lhs = term();
    for (;;) {
      skip_space();
      const char op = peek();
      if (op != '+' && op != '-') return lhs;
      const std::size_t at = pos_++;
      Value rhs = term();
      if (lhs.is_ket != rhs.is_ket) throw ParseError(at, "cannot add a scalar and a ket");
      const double sign = op == '+' ? 1.0 : -1.0;
      if (lhs.is_ket)
        lhs.ket += sign * rhs.ket;
      else
        lhs.scalar += sign * rhs.scalar;
    }
  }

  Value term() {
    Value lhs = unary();
    for (;;) {
      skip_space();
      const char op = peek();
      const std::size_t at = pos_;
      if (op == '*' || op == '/') {
        ++pos_;
        Value rhs = unary();
        lhs = op == '*' ? multiply(lhs, rhs, at) : divide(lhs, rhs, at);
      } else if (starts_primary()) {
        Value rhs = unary();
        lhs = multiply(lhs, rhs, at);
      } else {
        return lhs;
      }
    }
  }

  Value unary() {
    if (++depth_ > kMaxDepth) throw ParseError(pos_, "expression nested too deeply");
    struct Leave {
      int& depth;
      ~Leave() { --depth; }
    } leave{depth_};
    skip_space();
    const char c = peek();
    if (c == '+' || c == '-') {
      ++pos_;
      Value v = unary();
      if (c == '-') {
        if (v.is_ket)
          v.ket = -v.ket;
        else
          v.scalar = -v.scalar;
      }
      return v;
    }
    return primary();
  }

  Value primary() {
    skip_space();
    const std::size_t start = pos_;
    if (at_end()) throw ParseError(pos_, "unexpected end of expression");
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Value inner = expr();
      skip_space();
      if (peek() != ')') {
        if (at_end()) throw ParseError(start, "unclosed parenthesis");
        throw ParseError(pos_, "expected ')'");
      }
      ++pos_;
      return inner;
    }
    if (c == '|') return ket();
    if (text_.substr(pos_, 4) == "sqrt") {
      pos_ += 4;
      skip_space();
      if (peek() != '(') throw ParseError(pos_, "expected '(' after sqrt");
      const std::size_t open = pos_++;
      Value arg = expr();
      skip_space();
      if (peek() != ')') throw ParseError(at_end() ? open : pos_, "unclosed parenthesis");
      ++pos_;
      if (arg.is_ket) throw ParseError(start, "sqrt of a ket");
      if (arg.scalar.imag() != 0.0 || arg.scalar.real() < 0.0)
        throw ParseError(start, "sqrt argument must be a non-negative real number");
      return scalar(std::sqrt(arg.scalar.real()));
    }
    if (c == 'i') {
      ++pos_;
      return scalar(Complex(0.0, 1.0));
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    throw ParseError(pos_, std::string("unexpected '") + c + "'");
  }

  Value number() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) ++pos_;
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) throw ParseError(start, "malformed number");
    return scalar(value);
  }

  Value ket() {
    const std::size_t start = pos_++;
    std::string body;
    while (!at_end() && peek() != '>') {
      if (peek() == '|' || peek() == '(' || peek() == ')')
        throw ParseError(pos_, "unterminated ket");
      if (!std::isspace(static_cast<unsigned char>(peek()))) body.push_back(peek());
      ++pos_;
    }
    if (at_end()) throw ParseError(start, "unterminated ket, expected '>'");
    ++pos_;

    std::vector<int> labels;
    if (body.find(',') != std::string::npos) {
      std::size_t from = 0;
      for (;;) {
        const std::size_t comma = body.find(',', from);
        const std::string piece = body.substr(from, comma - from);
        int label = 0;
        const auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), label);
        if (piece.empty() || ec != std::errc() || ptr != piece.data() + piece.size())
          throw ParseError(start, "malformed ket label '" + piece + "'");
        labels.push_back(label);
        if (comma == std::string::npos) break;
        from = comma + 1;
      }
    } else {
      for (char ch : body) {
        if (!std::isdigit(static_cast<unsigned char>(ch)))
          throw ParseError(start, "malformed ket label '" + body + "'");
        labels.push_back(ch - '0');
      }
    }
    if (labels.size() != 2)
      throw Error(ErrorCode::LabelError, "ket |" + body + "> at position " +
                                             std::to_string(start) + " needs two labels");
    if (level_index(labels[0], dims_.first) < 0 || level_index(labels[1], dims_.second) < 0)
      throw Error(ErrorCode::LabelError, "ket |" + body + "> at position " +
                                             std::to_string(start) +
                                             " is outside the alphabet for dims " +
                                             to_string(dims_));
    Value v;
    v.is_ket = true;
    v.ket = ComplexVector::Zero(static_cast<Eigen::Index>(dims_.total()));
    v.ket[basis_index(labels[0], labels[1], dims_)] = 1.0;
    return v;
  }

  static Value scalar(Complex z) {
    Value v;
    v.scalar = z;
    return v;
  }

  static Value multiply(Value lhs, const Value& rhs, std::size_t at) {
    if (lhs.is_ket && rhs.is_ket) throw ParseError(at, "cannot multiply two kets");
    if (lhs.is_ket) {
      lhs.ket *= rhs.scalar;
      return lhs;
    }
    if (rhs.is_ket) {
      Value out = rhs;
      out.ket *= lhs.scalar;
      return out;
    }
    lhs.scalar *= rhs.scalar;
    return lhs;
  }

  static Value divide(Value lhs, const Value& rhs, std::size_t at) {
    if (rhs.is_ket) throw ParseError(at, "cannot divide by a ket");
    if (rhs.scalar == Complex(0.0, 0.0)) throw ParseError(at, "division by zero");
    if (lhs.is_ket)
      lhs.ket /= rhs.scalar;
    else
      lhs.scalar /= rhs.scalar;
    return lhs;
  }

  std::string_view text_;
  Dims dims_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  static constexpr int kMaxDepth = 200;
};

}  // namespace detail

/// Parses and normalizes a ket expression such as "(|10> - |01>)/sqrt(2)".
/// Throws ParseError, LabelError or ZeroNorm; never anything else for a
/// supported `dims`.
inline StateVector parse_ket_expression(std::string_view text, Dims dims) {
  return detail::KetParser(text, dims).parse();
}

}  // namespace dephasim
