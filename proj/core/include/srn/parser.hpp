#pragma once

#include <string>

#include "srn/model.hpp"

namespace srn {

struct SourceSpan {
  int line = 1;       // 1-based
  int col_start = 1;  // 1-based, inclusive
  int col_end = 1;    // inclusive
};

struct ParseError : Error {
  ParseError(const std::string& message, SourceSpan where);
  SourceSpan span;
};

// Text format, one reaction per line:
//   A -> 2C + D : ma(1.5)
//   A <-> B : ma(3), ma(3)          (forward rate, backward rate)
//   S + E* <-> P + E : expr(a1*S*Estar/(b1+S)), expr(a2*P*E/(b2+P))
//   param a1 = 2                    (named constant for expressions)
// "0" is the empty complex. A complex may carry a copy tag: "A + B @2".
// Rates: ma(c), expr(e), table(label), derived(label), sum(rate; rate; ...).
// table/derived parse as opaque references that print back identically but
// cannot be evaluated. "#" starts a comment.
NetPtr parse_network(const std::string& text);

// Canonical text form: parameters first (sorted), then one line per reaction
// ordered by printed complex text, with reversible pairs folded into "<->".
// Printing then parsing yields an isomorphic network with identical kinetics
// descriptors, and a second print is byte-identical.
std::string print_network(const ReactionNetwork& net);

// Standalone arithmetic expression parser (also used for JSON payloads).
ExprPtr parse_expression(const std::string& text);

}  // namespace srn
