#pragma once

// Text grammar for Laurent polynomials:
//   poly   := ['+'|'-'] term (('+'|'-') term)*
//   term   := coeff ('*' factor)* | factor ('*' factor)*
//   factor := var ('^' int)?
//   var    := 'x' | 'y' | 'z' | 'z' digit+
// Whitespace between tokens is ignored; exponents are signed integers.

#include "fkdet/groupring.hpp"

#include <cctype>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace fkdet {

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at offset " + std::to_string(position)),
        message_(message),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  std::size_t position_;
};

namespace detail {

class PolyParser {
 public:
  PolyParser(std::string_view text, std::vector<std::string> names)
      : text_(text), names_(std::move(names)) {}

  IntLaurentPoly parse() {
    IntLaurentPoly result(names_.size());
    skip_ws();
    bool negative = false;
    if (!at_end() && (peek() == '-' || peek() == '+')) {
      negative = peek() == '-';
      ++pos_;
    }
    parse_term(result, negative);
    for (;;) {
      skip_ws();
      if (at_end()) break;
      const char c = peek();
      if (c != '+' && c != '-') fail("expected '+' or '-'");
      ++pos_;
      parse_term(result, c == '-');
    }
    return result;
  }

 private:
  void parse_term(IntLaurentPoly& result, bool negative) {
    skip_ws();
    BigInt coeff = 1;
    Monomial m = Monomial::identity(names_.size());
    if (at_end()) fail("expected a term");
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      coeff = parse_unsigned_integer("coefficient");
      if (!at_end() && (peek() == '.' || peek() == '/'))
        fail("non-integer coefficient");
      skip_ws();
      while (!at_end() && peek() == '*') {
        ++pos_;
        parse_factor(m);
        skip_ws();
      }
    } else {
      parse_factor(m);
      skip_ws();
      while (!at_end() && peek() == '*') {
        ++pos_;
        parse_factor(m);
        skip_ws();
      }
    }
    result.add_term(m, negative ? BigInt(-coeff) : coeff);
  }

  void parse_factor(Monomial& m) {
    skip_ws();
    const std::size_t start = pos_;
    if (at_end() || !std::isalpha(static_cast<unsigned char>(peek())))
      fail("expected a variable");
    while (!at_end() && std::isalnum(static_cast<unsigned char>(peek()))) ++pos_;
    const std::string name(text_.substr(start, pos_ - start));
    const auto axis = lookup(name);
    if (!axis) throw ParseError("unknown variable '" + name + "'", start);
    std::int64_t e = 1;
    skip_ws();
    if (!at_end() && peek() == '^') {
      ++pos_;
      skip_ws();
      bool neg = false;
      if (!at_end() && (peek() == '-' || peek() == '+')) {
        neg = peek() == '-';
        ++pos_;
        skip_ws();
      }
      if (at_end() || !std::isdigit(static_cast<unsigned char>(peek())))
        fail("expected integer exponent");
      const std::size_t epos = pos_;
      BigInt big = parse_unsigned_integer("exponent");
      if (big > BigInt(std::numeric_limits<std::int64_t>::max() / 4))
        throw ParseError("exponent out of range", epos);
      e = big.convert_to<std::int64_t>();
      if (neg) e = -e;
    }
    m.exponents[*axis] += e;
  }

  BigInt parse_unsigned_integer(const char* what) {
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) fail(std::string("expected ") + what);
    return BigInt(std::string(text_.substr(start, pos_ - start)));
  }

  std::optional<std::size_t> lookup(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return i;
    const std::size_t d = names_.size();
    if (d == 1 && (name == "x" || name == "z")) return 0;
    if (name.size() >= 2 && name[0] == 'z') {
      std::size_t k = 0;
      for (std::size_t i = 1; i < name.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
        k = k * 10 + static_cast<std::size_t>(name[i] - '0');
        if (k > d) return std::nullopt;
      }
      if (k >= 1 && k <= d) return k - 1;
    }
    return std::nullopt;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  std::string_view text_;
  std::vector<std::string> names_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses with explicitly named axes (names[i] is axis i). The names z1 ... zd
/// are always accepted as well.
inline IntLaurentPoly parse_poly(std::string_view text,
                                 const std::vector<std::string>& names) {
  if (names.empty()) throw PreconditionError("dimension must be positive");
  return detail::PolyParser(text, names).parse();
}

/// Parses with the default names for `dim` (x, y, z; z alone also names the
/// single axis when dim = 1).
inline IntLaurentPoly parse_poly(std::string_view text, std::size_t dim) {
  if (dim == 0) throw PreconditionError("dimension must be positive");
  return parse_poly(text, default_variable_names(dim));
}

}  // namespace fkdet
