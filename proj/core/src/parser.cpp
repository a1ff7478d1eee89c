#include "srn/parser.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <sstream>
#include <vector>

namespace srn {

ParseError::ParseError(const std::string& message, SourceSpan where)
    : Error(message + " at line " + std::to_string(where.line) + ", column " +
            std::to_string(where.col_start)),
      span(where) {}

namespace {

struct Cursor {
  const std::string& text;
  int line;
  std::size_t pos = 0;

  bool at_end() const { return pos >= text.size(); }
  char peek() const { return at_end() ? '\0' : text[pos]; }
  char peek_at(std::size_t off) const {
    return pos + off >= text.size() ? '\0' : text[pos + off];
  }
  void skip_ws() {
    while (!at_end() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }
  SourceSpan span_from(std::size_t start) const {
    SourceSpan s;
    s.line = line;
    s.col_start = static_cast<int>(start) + 1;
    s.col_end = static_cast<int>(pos > start ? pos : start + 1);
    return s;
  }
  SourceSpan here() const { return span_from(pos); }

  [[noreturn]] void fail(const std::string& msg, std::size_t start) const {
    throw ParseError(msg, span_from(start));
  }
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Species name: identifier with an optional trailing '*'.
std::string read_species(Cursor& c) {
  std::size_t start = c.pos;
  if (!ident_start(c.peek())) c.fail("expected a species name", start);
  std::string name;
  while (ident_char(c.peek())) name += c.text[c.pos++];
  if (c.peek() == '*') {
    name += '*';
    ++c.pos;
  }
  return name;
}

double read_number(Cursor& c) {
  std::size_t start = c.pos;
  const char* begin = c.text.c_str() + c.pos;
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin) c.fail("expected a number", start);
  c.pos += static_cast<std::size_t>(end - begin);
  return v;
}

long read_integer(Cursor& c) {
  std::size_t start = c.pos;
  if (!std::isdigit(static_cast<unsigned char>(c.peek()))) c.fail("expected an integer", start);
  long v = 0;
  while (std::isdigit(static_cast<unsigned char>(c.peek()))) {
    v = v * 10 + (c.text[c.pos++] - '0');
    if (v > 1'000'000) c.fail("integer too large", start);
  }
  return v;
}

ExprPtr parse_expr(Cursor& c);

ExprPtr parse_atom(Cursor& c) {
  c.skip_ws();
  std::size_t start = c.pos;
  char ch = c.peek();
  if (ch == '(') {
    ++c.pos;
    ExprPtr e = parse_expr(c);
    c.skip_ws();
    if (c.peek() != ')') c.fail("expected ')'", c.pos);
    ++c.pos;
    return e;
  }
  if (ch == '-') {
    ++c.pos;
    return ExprNode::neg(parse_atom(c));
  }
  if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
    return ExprNode::num(read_number(c));
  }
  if (ident_start(ch)) {
    std::string name;
    while (ident_char(c.peek())) name += c.text[c.pos++];
    return ExprNode::var(std::move(name));
  }
  c.fail("expected a number, name, or parenthesized expression", start);
}

ExprPtr parse_term(Cursor& c) {
  ExprPtr e = parse_atom(c);
  while (true) {
    c.skip_ws();
    char op = c.peek();
    if (op != '*' && op != '/') return e;
    ++c.pos;
    ExprPtr rhs = parse_atom(c);
    e = ExprNode::binary(op == '*' ? ExprNode::Op::Mul : ExprNode::Op::Div, std::move(e),
                         std::move(rhs));
  }
}

ExprPtr parse_expr(Cursor& c) {
  c.skip_ws();
  ExprPtr e = parse_term(c);
  while (true) {
    c.skip_ws();
    char op = c.peek();
    if (op != '+' && op != '-') return e;
    ++c.pos;
    ExprPtr rhs = parse_term(c);
    e = ExprNode::binary(op == '+' ? ExprNode::Op::Add : ExprNode::Op::Sub, std::move(e),
                         std::move(rhs));
  }
}

// One side of a reaction: list of (species, coefficient) plus a copy tag.
struct ParsedComplex {
  std::vector<std::pair<std::string, Count>> terms;  // no duplicates
  int copy_tag = 0;
  SourceSpan span;
};

ParsedComplex parse_complex(Cursor& c) {
  ParsedComplex out;
  c.skip_ws();
  std::size_t start = c.pos;
  if (c.peek() == '0' && !ident_char(c.peek_at(1)) && c.peek_at(1) != '*') {
    ++c.pos;
  } else {
    while (true) {
      c.skip_ws();
      Count coef = 1;
      if (std::isdigit(static_cast<unsigned char>(c.peek()))) {
        std::size_t coef_start = c.pos;
        coef = read_integer(c);
        if (coef <= 0) c.fail("stoichiometric coefficient must be positive", coef_start);
        c.skip_ws();
      }
      std::size_t name_start = c.pos;
      std::string name = read_species(c);
      for (const auto& [existing, cnt] : out.terms) {
        (void)cnt;
        if (existing == name) c.fail("species '" + name + "' repeated in complex", name_start);
      }
      out.terms.emplace_back(std::move(name), coef);
      c.skip_ws();
      if (c.peek() != '+') break;
      ++c.pos;
    }
  }
  c.skip_ws();
  if (c.peek() == '@') {
    ++c.pos;
    std::size_t tag_start = c.pos;
    out.copy_tag = static_cast<int>(read_integer(c));
    if (out.copy_tag < 0) c.fail("copy tag must be non-negative", tag_start);
  }
  out.span = c.span_from(start);
  return out;
}

RateSpec parse_rate(Cursor& c) {
  c.skip_ws();
  std::size_t start = c.pos;
  if (!ident_start(c.peek())) c.fail("expected a rate specification", start);
  std::string keyword;
  while (ident_char(c.peek())) keyword += c.text[c.pos++];
  c.skip_ws();
  if (c.peek() != '(') c.fail("expected '(' after '" + keyword + "'", c.pos);
  ++c.pos;

  if (keyword == "ma") {
    c.skip_ws();
    std::size_t num_start = c.pos;
    double v = read_number(c);
    if (!(v > 0.0)) c.fail("mass-action constant must be positive", num_start);
    c.skip_ws();
    if (c.peek() != ')') c.fail("expected ')'", c.pos);
    ++c.pos;
    return RateSpec::ma(v);
  }
  if (keyword == "expr") {
    ExprPtr e = parse_expr(c);
    c.skip_ws();
    if (c.peek() != ')') c.fail("expected ')'", c.pos);
    ++c.pos;
    return RateSpec::expr(std::move(e));
  }
  if (keyword == "table" || keyword == "derived") {
    std::string label;
    while (!c.at_end() && c.peek() != ')') label += c.text[c.pos++];
    if (c.peek() != ')') c.fail("expected ')'", c.pos);
    ++c.pos;
    while (!label.empty() && label.back() == ' ') label.pop_back();
    std::size_t lead = label.find_first_not_of(' ');
    if (lead == std::string::npos || label.empty()) c.fail("empty reference label", start);
    label = label.substr(lead);
    return keyword == "table" ? RateSpec::table_ref(std::move(label))
                              : RateSpec::derived_ref(std::move(label));
  }
  if (keyword == "sum") {
    std::vector<RateSpec> parts;
    while (true) {
      parts.push_back(parse_rate(c));
      c.skip_ws();
      if (c.peek() == ';') {
        ++c.pos;
        continue;
      }
      break;
    }
    if (c.peek() != ')') c.fail("expected ';' or ')'", c.pos);
    ++c.pos;
    return RateSpec::sum_of(std::move(parts));
  }
  c.fail("unknown kinetics keyword '" + keyword + "'", start);
}

struct ParsedReaction {
  ParsedComplex source;
  ParsedComplex target;
  RateSpec rate;
  SourceSpan span;
};

// Identity key of a parsed complex: sorted terms plus tag.
std::string complex_key(const ParsedComplex& pc) {
  auto terms = pc.terms;
  std::sort(terms.begin(), terms.end());
  std::string key;
  for (const auto& [name, coef] : terms) key += std::to_string(coef) + "*" + name + "+";
  key += "@" + std::to_string(pc.copy_tag);
  return key;
}

}  // namespace

NetPtr parse_network(const std::string& text) {
  std::vector<ParsedReaction> reactions;
  std::vector<std::string> species_order;
  std::map<std::string, SourceSpan> seen_edges;
  std::map<std::string, double> params;

  auto note_species = [&](const ParsedComplex& pc) {
    for (const auto& [name, coef] : pc.terms) {
      (void)coef;
      if (std::find(species_order.begin(), species_order.end(), name) == species_order.end()) {
        species_order.push_back(name);
      }
    }
  };

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    while (!raw.empty() && (raw.back() == '\r' || raw.back() == ' ' || raw.back() == '\t')) {
      raw.pop_back();
    }
    Cursor c{raw, line_no};
    c.skip_ws();
    if (c.at_end()) continue;

    // Parameter line: param NAME = NUMBER
    if (c.text.compare(c.pos, 6, "param ") == 0) {
      c.pos += 6;
      c.skip_ws();
      std::size_t name_start = c.pos;
      if (!ident_start(c.peek())) c.fail("expected a parameter name", name_start);
      std::string name;
      while (ident_char(c.peek())) name += c.text[c.pos++];
      c.skip_ws();
      if (c.peek() != '=') c.fail("expected '='", c.pos);
      ++c.pos;
      c.skip_ws();
      double v = read_number(c);
      c.skip_ws();
      if (!c.at_end()) c.fail("trailing characters after parameter", c.pos);
      if (!params.emplace(name, v).second) {
        c.fail("duplicate parameter '" + name + "'", name_start);
      }
      continue;
    }

    ParsedReaction pr;
    std::size_t line_start = c.pos;
    pr.source = parse_complex(c);
    c.skip_ws();
    bool both_ways = false;
    if (c.peek() == '<' && c.peek_at(1) == '-' && c.peek_at(2) == '>') {
      both_ways = true;
      c.pos += 3;
    } else if (c.peek() == '-' && c.peek_at(1) == '>') {
      c.pos += 2;
    } else {
      c.fail("expected '->' or '<->'", c.pos);
    }
    pr.target = parse_complex(c);
    c.skip_ws();
    if (c.peek() != ':') c.fail("expected ':' before the rate", c.pos);
    ++c.pos;
    pr.rate = parse_rate(c);
    RateSpec back_rate;
    bool have_back = false;
    c.skip_ws();
    if (c.peek() == ',') {
      ++c.pos;
      back_rate = parse_rate(c);
      have_back = true;
      c.skip_ws();
    }
    if (!c.at_end()) c.fail("trailing characters after reaction", c.pos);
    if (both_ways && !have_back) {
      c.fail("'<->' needs a forward and a backward rate", c.pos);
    }
    if (!both_ways && have_back) {
      c.fail("'->' takes exactly one rate", c.pos);
    }
    if (complex_key(pr.source) == complex_key(pr.target)) {
      throw ParseError("reaction source equals target", pr.target.span);
    }
    pr.span = c.span_from(line_start);

    auto record = [&](const ParsedComplex& s, const ParsedComplex& t, RateSpec rate,
                      SourceSpan span) {
      std::string key = complex_key(s) + ">" + complex_key(t);
      if (!seen_edges.emplace(key, span).second) {
        throw ParseError("duplicate reaction", span);
      }
      note_species(s);
      note_species(t);
      reactions.push_back({s, t, std::move(rate), span});
    };
    record(pr.source, pr.target, std::move(pr.rate), pr.span);
    if (both_ways) record(pr.target, pr.source, std::move(back_rate), pr.span);
  }

  NetworkBuilder b(species_order);
  for (const auto& [name, v] : params) b.set_param(name, v);
  auto stoich_of = [&](const ParsedComplex& pc) {
    State s(species_order.size(), 0);
    for (const auto& [name, coef] : pc.terms) {
      auto it = std::find(species_order.begin(), species_order.end(), name);
      s[it - species_order.begin()] += coef;
    }
    return s;
  };
  for (const auto& pr : reactions) {
    int src = b.add_complex(stoich_of(pr.source), pr.source.copy_tag);
    int tgt = b.add_complex(stoich_of(pr.target), pr.target.copy_tag);
    b.add_reaction(src, tgt, pr.rate);
  }
  return b.build();
}

namespace {

std::string rate_text(const Kinetics& k) {
  switch (k.kind()) {
    case KineticsKind::MassAction:
      return "ma(" + format_number(k.mass_action_rate()) + ")";
    case KineticsKind::Expression:
      return "expr(" + k.expression_text() + ")";
    case KineticsKind::Table:
      return "table(" + k.opaque_label() + ")";
    case KineticsKind::Derived:
      return "derived(" + k.opaque_label() + ")";
    case KineticsKind::Sum: {
      std::string out = "sum(";
      const auto& parts = k.summands();
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += "; ";
        out += rate_text(parts[i]);
      }
      return out + ")";
    }
  }
  throw Error("unprintable kinetics");
}

// Complex text with terms sorted by species name, so the form does not
// depend on the species registration order.
std::string complex_text(const ReactionNetwork& net, int c) {
  const Complex& cx = net.complex(c);
  std::vector<std::pair<std::string, Count>> terms;
  for (std::size_t i = 0; i < cx.stoich.size(); ++i) {
    if (cx.stoich[i] > 0) terms.emplace_back(net.species()[i].id, cx.stoich[i]);
  }
  std::sort(terms.begin(), terms.end());
  std::string out;
  for (const auto& [name, coef] : terms) {
    if (!out.empty()) out += " + ";
    if (coef != 1) out += std::to_string(coef);
    out += name;
  }
  if (out.empty()) out = "0";
  if (cx.copy_tag != 0) out += " @" + std::to_string(cx.copy_tag);
  return out;
}

}  // namespace

std::string print_network(const ReactionNetwork& net) {
  std::ostringstream out;
  std::map<std::string, double> params(net.params().begin(), net.params().end());
  for (const auto& [name, v] : params) {
    out << "param " << name << " = " << format_number(v) << "\n";
  }

  std::vector<std::string> texts(net.num_complexes());
  for (int c = 0; c < net.num_complexes(); ++c) texts[c] = complex_text(net, c);

  std::vector<std::pair<std::string, std::string>> lines;  // (sort key, text)
  std::vector<char> printed(net.num_reactions(), 0);
  for (int r = 0; r < net.num_reactions(); ++r) {
    if (printed[r]) continue;
    const auto& rx = net.reaction(r);
    int rev = net.find_reaction(rx.target, rx.source);
    std::ostringstream ln;
    if (rev >= 0 && texts[rx.target] < texts[rx.source]) continue;  // printed from the other side
    if (rev >= 0) {
      printed[rev] = 1;
      ln << texts[rx.source] << " <-> " << texts[rx.target] << " : "
         << rate_text(rx.kinetics) << ", " << rate_text(net.reaction(rev).kinetics);
    } else {
      ln << texts[rx.source] << " -> " << texts[rx.target] << " : " << rate_text(rx.kinetics);
    }
    printed[r] = 1;
    lines.emplace_back(texts[rx.source] + "" + texts[rx.target], ln.str());
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& [key, text] : lines) {
    (void)key;
    out << text << "\n";
  }
  return out.str();
}

ExprPtr parse_expression(const std::string& text) {
  Cursor c{text, 1};
  ExprPtr e = parse_expr(c);
  c.skip_ws();
  if (!c.at_end()) c.fail("trailing characters after expression", c.pos);
  return e;
}

}  // namespace srn
