#pragma once

#include <string>
#include <string_view>

#include "nevlab/errors.hpp"
#include "nevlab/expr.hpp"

namespace nevlab::funcalg {

/// Thrown on any lexical or syntactic defect; carries a 1-based position.
class ParseError : public Error {
public:
  ParseError(const std::string& message, int line, int column)
      : Error(message + " at line " + std::to_string(line) + ", column " +
              std::to_string(column)),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

/// Parses the infix expression grammar:
///   variable `z`, complex literals `a+bi` with decimal or rational parts,
///   `+ - * / ^` (integer exponents), `exp`, `sin`, `cos`,
///   `shift(e, c)` with a constant offset, and `diff(e)`.
/// Unknown identifiers are rejected.
Expr parse_expr(std::string_view src);

/// Parses a string that must fold to a single complex constant
/// (e.g. "1", "-2.5i", "1/2+3i", "2*3"). Throws ParseError otherwise.
Complex parse_complex(std::string_view src);

}  // namespace nevlab::funcalg
