#pragma once

// Formula files.
//
//   mode: commutative | noncommutative      (optional, default commutative)
//   field: Q | Fp:<prime>                   (optional, default Q)
//   expr  := var | "1" | "(+ " wexpr+ ")" | "(* " wexpr+ ")"
//   wexpr := expr | "(scale " rational " " expr ")"
//   var   := "x" natural | "x_" natural "_" natural
//
// ';' starts a comment running to the end of the line.

#include <cctype>
#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "logdepth/errors.hpp"
#include "logdepth/field.hpp"
#include "logdepth/formula.hpp"

namespace logdepth {

struct FormulaHeader {
  Mode mode = Mode::Commutative;
  std::optional<std::uint64_t> prime;  // empty: Q
};

using AnyFormula = std::variant<Formula<Rationals>, Formula<PrimeField>>;

namespace detail {

class Reader {
 public:
  explicit Reader(std::string_view text) : s_(text) {}

  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(what, line_, col_); }
  [[noreturn]] void fail_at(const std::string& what, std::size_t line, std::size_t col) const {
    throw SyntaxError(what, line, col);
  }

  void skip_space() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == ';') {
        while (pos_ < s_.size() && s_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }
  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }
  /// Maximal run of non-delimiter characters.
  std::string_view token() {
    std::size_t start = pos_;
    while (!at_end()) {
      char c = s_[pos_];
      if (c == '(' || c == ')' || c == ';' || std::isspace(static_cast<unsigned char>(c))) break;
      advance();
    }
    return s_.substr(start, pos_ - start);
  }
  /// The rest of the current line (without the newline).
  std::string_view rest_of_line() {
    std::size_t start = pos_;
    while (!at_end() && s_[pos_] != '\n') advance();
    return s_.substr(start, pos_ - start);
  }
  std::size_t line() const { return line_; }
  std::size_t col() const { return col_; }
  std::size_t pos() const { return pos_; }
  std::string_view text() const { return s_; }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

inline std::optional<std::uint64_t> parse_natural(std::string_view t) {
  if (t.empty() || (t.size() > 1 && t[0] == '0')) return std::nullopt;
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) return std::nullopt;
  return v;
}

inline std::optional<VarId> parse_var(std::string_view t) {
  if (t.size() < 2 || t[0] != 'x') return std::nullopt;
  if (t[1] != '_') {
    auto n = parse_natural(t.substr(1));
    if (!n || *n >= var::kPairTag) return std::nullopt;
    return *n;
  }
  auto rest = t.substr(2);
  auto us = rest.find('_');
  if (us == std::string_view::npos) return std::nullopt;
  auto a = parse_natural(rest.substr(0, us));
  auto b = parse_natural(rest.substr(us + 1));
  if (!a || !b || *a >= var::kPairLimit || *b >= var::kPairLimit) return std::nullopt;
  return var::pair(*a, *b);
}

inline FormulaHeader parse_header(Reader& rd) {
  FormulaHeader h;
  bool seen_mode = false, seen_field = false;
  for (;;) {
    rd.skip_space();
    if (rd.peek() != 'm' && rd.peek() != 'f') return h;
    std::size_t line = rd.line(), col = rd.col();
    auto key = rd.token();
    if (key != "mode:" && key != "field:") rd.fail_at("unknown header '" + std::string(key) + "'", line, col);
    std::string value(rd.rest_of_line());
    while (!value.empty() && std::isspace(static_cast<unsigned char>(value.back()))) value.pop_back();
    std::size_t first = value.find_first_not_of(" \t");
    value = first == std::string::npos ? std::string() : value.substr(first);
    if (key == "mode:") {
      if (seen_mode) rd.fail_at("duplicate mode header", line, col);
      seen_mode = true;
      if (value == "commutative")
        h.mode = Mode::Commutative;
      else if (value == "noncommutative")
        h.mode = Mode::NonCommutative;
      else
        rd.fail_at("mode must be commutative or noncommutative", line, col);
    } else {
      if (seen_field) rd.fail_at("duplicate field header", line, col);
      seen_field = true;
      if (value == "Q") {
        h.prime.reset();
      } else if (value.rfind("Fp:", 0) == 0) {
        auto p = parse_natural(std::string_view(value).substr(3));
        if (!p || *p >= (std::uint64_t{1} << 63) || !is_prime_u64(*p))
          rd.fail_at("field modulus must be a prime below 2^63", line, col);
        h.prime = *p;
      } else {
        rd.fail_at("field must be Q or Fp:<prime>", line, col);
      }
    }
  }
}

template <FieldDescriptor K>
class ExprParser {
 public:
  ExprParser(Reader& rd, const K& field) : rd_(rd), field_(field) {}

  NodePtr<K> expr() {
    rd_.skip_space();
    std::size_t line = rd_.line(), col = rd_.col();
    if (rd_.at_end()) rd_.fail("unexpected end of input");
    if (rd_.peek() == ')') rd_.fail("unexpected ')'");
    if (rd_.peek() != '(') {
      auto t = rd_.token();
      if (t == "1") return Node<K>::one();
      if (auto v = parse_var(t)) return Node<K>::var(*v);
      rd_.fail_at("expected a variable, '1' or '('; got '" + std::string(t) + "'", line, col);
    }
    rd_.advance();
    auto head = rd_.token();
    if (head == "scale") rd_.fail_at("scale is only allowed as a gate child", line, col);
    if (head != "+" && head != "*") rd_.fail_at("expected '+' or '*' after '('", line, col);
    const bool is_sum = head == "+";
    std::vector<Edge<K>> edges;
    for (;;) {
      rd_.skip_space();
      if (rd_.at_end()) rd_.fail("unterminated gate");
      if (rd_.peek() == ')') break;
      edges.push_back(wexpr());
    }
    rd_.advance();
    if (edges.empty()) rd_.fail_at("gate with no children", line, col);
    try {
      return is_sum ? Node<K>::sum(std::move(edges)) : Node<K>::prod(std::move(edges));
    } catch (const WellFormednessError& e) {
      throw WellFormednessError(std::string(e.what()) + " at line " + std::to_string(line) + ", column " +
                                std::to_string(col));
    }
  }

 private:
  Edge<K> wexpr() {
    rd_.skip_space();
    // Look ahead for "(scale".
    auto rest = rd_.text().substr(rd_.pos());
    if (rest.size() >= 6 && rest.substr(0, 6) == "(scale" &&
        (rest.size() == 6 || std::isspace(static_cast<unsigned char>(rest[6])))) {
      rd_.advance();
      rd_.token();
      rd_.skip_space();
      std::size_t wl = rd_.line(), wc = rd_.col();
      auto t = rd_.token();
      auto w = field_.parse(t);
      if (!w) rd_.fail_at("malformed scalar '" + std::string(t) + "'", wl, wc);
      if (field_.is_zero(*w))
        throw WellFormednessError("zero edge scalar at line " + std::to_string(wl) + ", column " +
                                  std::to_string(wc));
      auto child = expr();
      rd_.skip_space();
      if (rd_.peek() != ')') rd_.fail("expected ')' closing scale");
      rd_.advance();
      return Edge<K>{*w, std::move(child)};
    }
    return Edge<K>{field_.one(), expr()};
  }

  Reader& rd_;
  const K& field_;
};

template <FieldDescriptor K>
Formula<K> parse_body(Reader& rd, const K& field, Mode mode) {
  ExprParser<K> p(rd, field);
  Formula<K> f{field, mode, p.expr()};
  rd.skip_space();
  if (!rd.at_end()) rd.fail("trailing input after the formula");
  auto problems = validate(f);
  if (!problems.empty()) throw WellFormednessError(problems.front());
  return f;
}

template <FieldDescriptor K>
void serialize_node(std::string& out, const K& field, const NodePtr<K>& n) {
  switch (n->kind()) {
    case GateKind::Var:
      if (var::is_fresh(n->var_id()))
        throw std::logic_error("internal variable " + var::name(n->var_id()) + " cannot be serialized");
      out += var::name(n->var_id());
      return;
    case GateKind::One:
      out += '1';
      return;
    case GateKind::Sum:
    case GateKind::Prod:
      out += n->is_sum() ? "(+" : "(*";
      for (const auto& e : n->edges()) {
        out += ' ';
        if (field.is_one(e.weight)) {
          serialize_node(out, field, e.child);
        } else {
          out += "(scale ";
          out += field.to_string(e.weight);
          out += ' ';
          serialize_node(out, field, e.child);
          out += ')';
        }
      }
      out += ')';
      return;
  }
}

}  // namespace detail

/// Reads only the header lines.
inline FormulaHeader parse_header(std::string_view text) {
  detail::Reader rd(text);
  return detail::parse_header(rd);
}

/// Parses into a known field. The file's field header, when present, must
/// agree with `field`.
template <FieldDescriptor K>
Formula<K> parse_as(std::string_view text, const K& field) {
  detail::Reader rd(text);
  auto h = detail::parse_header(rd);
  if constexpr (std::is_same_v<K, Rationals>) {
    if (h.prime) throw ModeMismatch("file is over Fp:" + std::to_string(*h.prime) + ", expected Q");
  } else {
    if (h.prime && *h.prime != field.modulus())
      throw ModeMismatch("file is over Fp:" + std::to_string(*h.prime) + ", expected " + field.name());
  }
  return detail::parse_body(rd, field, h.mode);
}

/// Parses a file in whichever field its header names.
inline AnyFormula parse(std::string_view text) {
  detail::Reader rd(text);
  auto h = detail::parse_header(rd);
  if (h.prime) return detail::parse_body(rd, PrimeField(*h.prime), h.mode);
  return detail::parse_body(rd, Rationals{}, h.mode);
}

/// Expression text only, no header.
template <FieldDescriptor K>
std::string serialize_expr(const K& field, const NodePtr<K>& root) {
  std::string out;
  detail::serialize_node(out, field, root);
  return out;
}

/// Canonical file text: both header lines, then the expression on one line.
template <FieldDescriptor K>
std::string serialize(const Formula<K>& f) {
  std::string out = "mode: ";
  out += to_string(f.mode);
  out += "\nfield: ";
  out += f.field.name();
  out += '\n';
  detail::serialize_node(out, f.field, f.root);
  out += '\n';
  return out;
}

inline std::string serialize(const AnyFormula& f) {
  return std::visit([](const auto& g) { return serialize(g); }, f);
}

namespace detail {
template <FieldDescriptor K>
void render(std::string& out, const K& field, const NodePtr<K>& n, int indent) {
  out.append(static_cast<std::size_t>(indent) * 2, ' ');
  if (n->is_leaf()) {
    out += n->is_one() ? std::string("1") : var::name(n->var_id());
    out += '\n';
    return;
  }
  out += n->is_sum() ? "+" : "*";
  const auto& m = n->metrics();
  out += "  [size " + std::to_string(m.size) + ", deg " + std::to_string(m.syn_degree) + "]\n";
  for (const auto& e : n->edges()) {
    if (!field.is_one(e.weight)) {
      out.append(static_cast<std::size_t>(indent + 1) * 2, ' ');
      out += "scale " + field.to_string(e.weight) + ":\n";
      render(out, field, e.child, indent + 2);
    } else {
      render(out, field, e.child, indent + 1);
    }
  }
}
}  // namespace detail

/// Indented tree for reading; not parseable.
template <FieldDescriptor K>
std::string render_tree(const Formula<K>& f) {
  std::string out;
  detail::render(out, f.field, f.root, 0);
  return out;
}

}  // namespace logdepth
