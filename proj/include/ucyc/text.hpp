#pragma once

#include <string>
#include <string_view>

#include "ucyc/diagram.hpp"

namespace ucyc {

/// Syntax or typing error in the diagram language, with a 1-based position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// morphism := term (('+'|'-') term)*        term := [scalar '*'] diagram
/// diagram  := slice (';' slice)* '@' weight  (slices bottom to top)
/// slice    := item ('|' item)*
/// item     := id(+i) | id() | dot(+i) | x(+i,-j) | cup(fe,i) | cup(ef,i)
///           | cap(fe,i) | cap(ef,i) | bub(cw,i,♠+m)
Morphism parse_morphism(const CartanDatum& datum, std::string_view text);
Diagram parse_diagram(const CartanDatum& datum, std::string_view text);

std::string render_diagram(const CartanDatum& datum, const Diagram& d);
std::string render_morphism(const CartanDatum& datum, const Morphism& m);
/// Renders the coefficient prefix used in front of a diagram ("", "-", "3*", ...).
std::string render_term(const CartanDatum& datum, const Diagram& d, const Scalar& c, bool first);

}  // namespace ucyc
