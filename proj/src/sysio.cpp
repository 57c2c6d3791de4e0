#include "rpv/sysio.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>

#include "rpv/error.hpp"

namespace rpv {

namespace {

constexpr std::size_t kMaxDepth = 200;
constexpr long kMaxExponent = 1000;

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  std::size_t pos() const { return pos_; }
  void reset(std::size_t p) { pos_ = p; }

  // Spaces, tabs, carriage returns and comments; never a newline.
  void skip_blank() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r') {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip_blank();
    return pos_ >= text_.size();
  }
  bool at_eol() {
    skip_blank();
    return pos_ >= text_.size() || text_[pos_] == '\n';
  }
  char peek() {
    skip_blank();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c || c == '\0') return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("'") + c + "'", "unexpected " + describe());
  }
  // Skips blank lines (and comment-only lines).
  void skip_empty_lines() {
    for (;;) {
      skip_blank();
      if (pos_ < text_.size() && text_[pos_] == '\n') {
        ++pos_;
        continue;
      }
      return;
    }
  }
  void end_line() {
    if (!at_eol()) fail("end of line", "unexpected " + describe());
    if (pos_ < text_.size()) ++pos_;
  }

  std::optional<std::string> identifier() {
    skip_blank();
    std::size_t s = pos_;
    if (s >= text_.size() || !(std::isalpha(static_cast<unsigned char>(text_[s])) || text_[s] == '_'))
      return std::nullopt;
    std::size_t e = s;
    while (e < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[e])) || text_[e] == '_'))
      ++e;
    pos_ = e;
    return std::string(text_.substr(s, e - s));
  }

  std::optional<Integer> integer() {
    skip_blank();
    std::size_t s = pos_;
    std::size_t e = s;
    while (e < text_.size() && std::isdigit(static_cast<unsigned char>(text_[e]))) ++e;
    if (e == s) return std::nullopt;
    if (e < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[e])) || text_[e] == '_' ||
                             text_[e] == '.'))
      fail_at(e, "operator", "malformed number literal");
    pos_ = e;
    return Integer(std::string(text_.substr(s, e - s)));
  }

  std::string describe() {
    skip_blank();
    if (pos_ >= text_.size()) return "end of input";
    if (text_[pos_] == '\n') return "end of line";
    unsigned char c = static_cast<unsigned char>(text_[pos_]);
    if (c < 0x20 || c >= 0x7f) {
      std::ostringstream os;
      os << "byte 0x" << std::hex << static_cast<int>(c);
      return os.str();
    }
    return std::string("'") + text_[pos_] + "'";
  }

  [[noreturn]] void fail(const std::string& expected, const std::string& message) {
    skip_blank();
    fail_at(pos_, expected, message);
  }

  [[noreturn]] void fail_at(std::size_t offset, const std::string& expected,
                            const std::string& message) const {
    offset = std::min(offset, text_.size());
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < offset; ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(offset, line, col, expected, message);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

class ExprParser {
 public:
  ExprParser(Cursor& cur, ContextPtr ctx) : cur_(cur), ctx_(std::move(ctx)) {}

  RatFunc expr() {
    Depth d(*this);
    RatFunc acc = term();
    for (;;) {
      if (cur_.accept('+')) {
        acc = guarded([&] { return acc + term(); });
      } else if (cur_.accept('-')) {
        acc = guarded([&] { return acc - term(); });
      } else {
        return acc;
      }
    }
  }

 private:
  struct Depth {
    explicit Depth(ExprParser& p) : p_(p) {
      if (++p_.depth_ > kMaxDepth) p_.cur_.fail("shallower expression", "expression nested too deeply");
    }
    ~Depth() { --p_.depth_; }
    ExprParser& p_;
  };

  // Arithmetic failures (division by zero, mixed quadratic fields) are
  // reported at the operator that triggered them.
  template <class F>
  RatFunc guarded(F&& f) {
    std::size_t at = cur_.pos();
    try {
      return f();
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      cur_.fail_at(at, "valid operand", e.what());
    }
  }

  RatFunc term() {
    RatFunc acc = unary();
    for (;;) {
      std::size_t at = cur_.pos();
      if (cur_.accept('*')) {
        RatFunc rhs = unary();
        acc = guarded([&] { return acc * rhs; });
      } else if (cur_.accept('/')) {
        RatFunc rhs = unary();
        if (rhs.is_zero()) cur_.fail_at(at, "non-zero divisor", "division by zero");
        acc = guarded([&] { return acc / rhs; });
      } else {
        return acc;
      }
    }
  }

  RatFunc unary() {
    Depth d(*this);
    if (cur_.accept('-')) return -unary();
    return power();
  }

  RatFunc power() {
    RatFunc base = atom();
    std::size_t at = cur_.pos();
    if (!cur_.accept('^')) return base;
    long e = exponent();
    if (e < 0 && base.is_zero()) cur_.fail_at(at, "non-zero base", "zero raised to a negative power");
    return guarded([&] { return base.pow(static_cast<int>(e)); });
  }

  long exponent() {
    Depth d(*this);
    bool neg = cur_.accept('-');
    std::size_t at = cur_.pos();
    auto v = cur_.integer();
    if (!v) cur_.fail("integer exponent", "exponents must be integers");
    if (*v > kMaxExponent) cur_.fail_at(at, "exponent at most 1000", "exponent too large");
    long base = v->get_si();
    long e = 1;
    if (cur_.accept('^')) {
      std::size_t eat = cur_.pos();
      long inner = exponent();
      if (inner < 0) cur_.fail_at(eat, "non-negative exponent", "exponent would not be an integer");
      Integer p;
      mpz_pow_ui(p.get_mpz_t(), Integer(base).get_mpz_t(), static_cast<unsigned long>(inner));
      if (p > kMaxExponent) cur_.fail_at(at, "exponent at most 1000", "exponent too large");
      e = p.get_si();
    } else {
      e = base;
    }
    return neg ? -e : e;
  }

  RatFunc atom() {
    std::size_t at = cur_.pos();
    if (cur_.accept('(')) {
      RatFunc r = expr();
      cur_.expect(')');
      return r;
    }
    if (auto v = cur_.integer()) return RatFunc::constant(ctx_, QuadScalar(Rat(*v)));
    if (auto id = cur_.identifier()) {
      if (*id == "sqrt") {
        cur_.expect('(');
        std::size_t nat = cur_.pos();
        auto n = cur_.integer();
        if (!n) cur_.fail("integer", "sqrt takes a non-negative integer literal");
        cur_.expect(')');
        QuadScalar q;
        try {
          q = QuadScalar::sqrt_of(*n);
        } catch (const Error& e) {
          cur_.fail_at(nat, "smaller integer", e.what());
        }
        if (!q.is_rational() && q.d() != ctx_->sqrt_tag())
          cur_.fail_at(at, "sqrt(" + std::to_string(ctx_->sqrt_tag()) + ")",
                       "sqrt(" + n->get_str() + ") is outside the scalar field");
        return RatFunc::constant(ctx_, q);
      }
      auto idx = ctx_->index_of(*id);
      if (!idx) cur_.fail_at(at, "declared variable", "unknown identifier '" + *id + "'");
      return RatFunc::variable(ctx_, *idx);
    }
    cur_.fail("number, identifier, sqrt or '('", "unexpected " + cur_.describe());
  }

  Cursor& cur_;
  ContextPtr ctx_;
  std::size_t depth_ = 0;
};

std::vector<std::string> identifier_list(Cursor& cur) {
  std::vector<std::string> out;
  do {
    std::size_t at = cur.pos();
    auto id = cur.identifier();
    if (!id) cur.fail("identifier", "unexpected " + cur.describe());
    if (!valid_identifier(*id)) cur.fail_at(at, "identifier", "'" + *id + "' is reserved");
    if (std::find(out.begin(), out.end(), *id) != out.end())
      cur.fail_at(at, "new identifier", "'" + *id + "' listed twice");
    out.push_back(*id);
  } while (cur.accept(','));
  return out;
}

std::vector<RatFunc> bracket_row(Cursor& cur, const ContextPtr& ctx) {
  cur.expect('[');
  std::vector<RatFunc> row;
  do {
    ExprParser p(cur, ctx);
    row.push_back(p.expr());
  } while (cur.accept(','));
  cur.expect(']');
  return row;
}

Integer header_integer(Cursor& cur) {
  auto v = cur.integer();
  if (!v) cur.fail("integer", "unexpected " + cur.describe());
  return *v;
}

// Reads `keyword` ':' and reports its start; nullopt at end of input.
struct Keyword {
  std::string word;
  std::size_t at;
};

std::optional<Keyword> keyword(Cursor& cur) {
  cur.skip_empty_lines();
  if (cur.at_end()) return std::nullopt;
  std::size_t at = cur.pos();
  if (cur.peek() == '[') return Keyword{"[", at};
  auto id = cur.identifier();
  if (!id) cur.fail("keyword", "unexpected " + cur.describe());
  return Keyword{*id, at};
}

std::int64_t sqrt_tag_value(Cursor& cur) {
  std::size_t at = cur.pos();
  Integer v = header_integer(cur);
  if (v < 2) cur.fail_at(at, "squarefree integer above 1", "invalid sqrt tag");
  try {
    auto split = squarefree_split(v);
    if (split.root != 1) cur.fail_at(at, "squarefree integer above 1", "sqrt tag must be squarefree");
    return split.squarefree;
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    cur.fail_at(at, "smaller integer", e.what());
  }
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += v[i];
  }
  return out;
}

void check_square_block(const std::vector<std::vector<RatFunc>>& rows, std::size_t rank,
                        const std::string& name) {
  if (rows.size() != rank)
    throw DimensionMismatch("matrix " + name + " has " + std::to_string(rows.size()) +
                            " rows, expected " + std::to_string(rank));
  for (const auto& r : rows)
    if (r.size() != rank)
      throw DimensionMismatch("matrix " + name + " has a row of length " +
                              std::to_string(r.size()) + ", expected " + std::to_string(rank));
}

RatMatrix to_matrix(const std::vector<std::vector<RatFunc>>& rows) {
  std::vector<RatFunc> data;
  for (const auto& r : rows) data.insert(data.end(), r.begin(), r.end());
  return RatMatrix(rows.size(), rows.empty() ? 0 : rows.front().size(), std::move(data));
}

}  // namespace

RatFunc parse_expr(std::string_view text, const ContextPtr& ctx) {
  Cursor cur(text);
  ExprParser p(cur, ctx);
  RatFunc r = p.expr();
  cur.skip_empty_lines();
  if (!cur.at_end()) cur.fail("end of input", "unexpected " + cur.describe());
  return r;
}

LinSystem parse_system(std::string_view text) {
  Cursor cur(text);
  std::optional<std::vector<std::string>> vars;
  std::optional<std::vector<std::string>> us;
  std::int64_t tag = 0;
  std::optional<std::size_t> rank;
  ContextPtr ctx;
  std::map<std::size_t, std::vector<std::vector<RatFunc>>> blocks;
  std::vector<std::string> block_names;
  std::optional<std::size_t> current;

  auto ensure_context = [&](std::size_t at) {
    if (ctx) return;
    if (!vars) cur.fail_at(at, "'vars:'", "variables must be declared first");
    if (!rank) cur.fail_at(at, "'rank:'", "rank must be declared before matrices");
    ContextPtr base = DiffContext::partial(*vars, tag);
    if (us) {
      try {
        ctx = DiffContext::kolchin(*base, *us);
      } catch (const VariableClash& e) {
        cur.fail_at(at, "fresh indeterminate names", e.what());
      }
    } else {
      ctx = base;
    }
  };

  while (auto kw = keyword(cur)) {
    if (kw->word == "[") {
      if (!current) cur.fail_at(kw->at, "'matrix NAME:'", "row outside a matrix block");
      blocks[*current].push_back(bracket_row(cur, ctx));
      cur.end_line();
      continue;
    }
    const bool header = kw->word == "vars" || kw->word == "sqrt" || kw->word == "rank" ||
                        kw->word == "kolchin";
    if (header && ctx) cur.fail_at(kw->at, "matrix block", "header after the first matrix");
    if (kw->word == "vars") {
      if (vars) cur.fail_at(kw->at, "new header", "'vars' declared twice");
      cur.expect(':');
      vars = identifier_list(cur);
    } else if (kw->word == "sqrt") {
      if (tag) cur.fail_at(kw->at, "new header", "'sqrt' declared twice");
      cur.expect(':');
      tag = sqrt_tag_value(cur);
    } else if (kw->word == "rank") {
      if (rank) cur.fail_at(kw->at, "new header", "'rank' declared twice");
      cur.expect(':');
      std::size_t at = cur.pos();
      Integer r = header_integer(cur);
      if (r < 1 || r > 64) cur.fail_at(at, "rank between 1 and 64", "invalid rank");
      rank = r.get_ui();
    } else if (kw->word == "kolchin") {
      if (us) cur.fail_at(kw->at, "new header", "'kolchin' declared twice");
      cur.expect(':');
      us = identifier_list(cur);
    } else if (kw->word == "matrix") {
      ensure_context(kw->at);
      std::size_t at = cur.pos();
      auto name = cur.identifier();
      if (!name) cur.fail("derivation name", "unexpected " + cur.describe());
      auto k = ctx->derivation_index(*name);
      if (!k) cur.fail_at(at, "derivation name", "no derivation named '" + *name + "'");
      if (blocks.count(*k)) cur.fail_at(at, "new derivation", "matrix " + *name + " given twice");
      cur.expect(':');
      blocks[*k];
      current = *k;
      block_names.resize(ctx->derivation_count());
      block_names[*k] = *name;
    } else {
      cur.fail_at(kw->at, "vars, sqrt, rank, kolchin, matrix or '['",
                  "unknown keyword '" + kw->word + "'");
    }
    cur.end_line();
  }
  ensure_context(text.size());
  std::vector<RatMatrix> mats;
  for (std::size_t k = 0; k < ctx->derivation_count(); ++k) {
    auto it = blocks.find(k);
    std::string name = ctx->is_kolchin() ? "D" : ctx->name(*ctx->coordinate_of(k));
    if (it == blocks.end()) throw DimensionMismatch("missing matrix block for " + name);
    check_square_block(it->second, *rank, name);
    mats.push_back(to_matrix(it->second));
  }
  return LinSystem(ctx, *rank, std::move(mats));
}

Tower parse_tower(std::string_view text) {
  Cursor cur(text);
  std::optional<std::vector<std::string>> base;
  std::optional<std::vector<std::string>> us;
  std::int64_t tag = 0;
  std::optional<Tower> tower;

  auto ensure_tower = [&](std::size_t at) {
    if (tower) return;
    if (!base) cur.fail_at(at, "'base:'", "base variables must be declared first");
    ContextPtr ctx = DiffContext::partial(*base, tag);
    if (us) {
      try {
        ctx = DiffContext::kolchin(*ctx, *us);
      } catch (const VariableClash& e) {
        cur.fail_at(at, "fresh indeterminate names", e.what());
      }
    }
    tower = Tower::base(ctx);
  };

  while (auto kw = keyword(cur)) {
    const bool header = kw->word == "base" || kw->word == "sqrt" || kw->word == "kolchin";
    if (header && tower) cur.fail_at(kw->at, "step", "header after the first step");
    if (kw->word == "base") {
      if (base) cur.fail_at(kw->at, "new header", "'base' declared twice");
      cur.expect(':');
      base = identifier_list(cur);
    } else if (kw->word == "sqrt") {
      if (tag) cur.fail_at(kw->at, "new header", "'sqrt' declared twice");
      cur.expect(':');
      tag = sqrt_tag_value(cur);
    } else if (kw->word == "kolchin") {
      if (us) cur.fail_at(kw->at, "new header", "'kolchin' declared twice");
      cur.expect(':');
      us = identifier_list(cur);
    } else if (kw->word == "step") {
      ensure_tower(kw->at);
      std::size_t names_at = cur.pos();
      auto names = identifier_list(cur);
      for (const auto& n : names)
        if (tower->context()->index_of(n))
          cur.fail_at(names_at, "fresh generator name", "'" + n + "' is already in use");
      cur.expect(':');
      std::size_t kind_at = cur.pos();
      auto kind = cur.identifier();
      if (!kind) cur.fail("step kind", "unexpected " + cur.describe());
      std::size_t want = *kind == "rotationpair" ? 2 : 1;
      if (*kind != "integral" && *kind != "expintegral" && *kind != "algebraic" &&
          *kind != "rotationpair")
        cur.fail_at(kind_at, "integral, expintegral, algebraic or rotationpair",
                    "unknown step kind '" + *kind + "'");
      if (names.size() != want)
        cur.fail_at(names_at, std::to_string(want) + " generator name(s)",
                    *kind + " step takes " + std::to_string(want) + " name(s)");
      if (*kind == "algebraic") {
        ContextPtr pctx = tower->context()->with_generators(names);
        std::size_t row_at = cur.pos();
        auto row = bracket_row(cur, pctx);
        if (row.size() != 1)
          cur.fail_at(row_at, "one polynomial", "algebraic step takes one polynomial");
        *tower = tower->extend(TowerStep::algebraic(names[0], row[0]));
      } else {
        auto row = bracket_row(cur, tower->context());
        if (*kind == "integral") {
          *tower = tower->extend(TowerStep::integral(names[0], std::move(row)));
        } else if (*kind == "expintegral") {
          *tower = tower->extend(TowerStep::exp_integral(names[0], std::move(row)));
        } else {
          *tower = tower->extend(TowerStep::rotation_pair(names[0], names[1], std::move(row)));
        }
      }
    } else {
      cur.fail_at(kw->at, "base, sqrt, kolchin or step", "unknown keyword '" + kw->word + "'");
    }
    cur.end_line();
  }
  ensure_tower(text.size());
  return *tower;
}

RatMatrix parse_matrix(std::string_view text, const ContextPtr& ctx) {
  Cursor cur(text);
  auto kw = keyword(cur);
  if (!kw || kw->word != "matrix") cur.fail("'matrix:'", "matrix documents start with 'matrix:'");
  cur.expect(':');
  cur.end_line();
  std::vector<std::vector<RatFunc>> rows;
  while (auto row_kw = keyword(cur)) {
    if (row_kw->word != "[") cur.fail_at(row_kw->at, "'['", "unexpected keyword '" + row_kw->word + "'");
    rows.push_back(bracket_row(cur, ctx));
    cur.end_line();
  }
  if (rows.empty()) throw DimensionMismatch("matrix has no rows");
  check_square_block(rows, rows.size(), "");
  return to_matrix(rows);
}

std::string serialize(const RatFunc& f) { return f.to_string(); }

namespace {

std::string rows_text(const RatMatrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out += "[";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out += ", ";
      out += m(i, j).to_string();
    }
    out += "]\n";
  }
  return out;
}

void header_lines(std::string& out, const ContextPtr& ctx, const char* vars_key) {
  std::vector<std::string> coords;
  std::vector<std::string> us;
  for (std::size_t i = 0; i < ctx->size(); ++i) {
    if (ctx->kind(i) == VarKind::Coordinate) coords.push_back(ctx->name(i));
    if (ctx->kind(i) == VarKind::Indeterminate) us.push_back(ctx->name(i));
  }
  out += std::string(vars_key) + ": " + join(coords) + "\n";
  if (ctx->sqrt_tag()) out += "sqrt: " + std::to_string(ctx->sqrt_tag()) + "\n";
  if (ctx->is_kolchin()) out += "kolchin: " + join(us) + "\n";
}

}  // namespace

std::string serialize(const LinSystem& s) {
  std::string out;
  const auto& ctx = s.context();
  header_lines(out, ctx, "vars");
  out += "rank: " + std::to_string(s.rank()) + "\n";
  for (std::size_t k = 0; k < s.derivation_count(); ++k) {
    std::string name = ctx->is_kolchin() ? "D" : ctx->name(*ctx->coordinate_of(k));
    out += "matrix " + name + ":\n" + rows_text(s.matrix(k));
  }
  return out;
}

std::string serialize(const Tower& t) {
  std::string out;
  header_lines(out, t.base_context(), "base");
  for (const auto& s : t.steps()) {
    out += "step " + join(s.names) + ": " + to_string(s.kind) + " [";
    if (s.kind == StepKind::Algebraic) {
      out += s.minimal_polynomial->to_string();
    } else {
      for (std::size_t k = 0; k < s.coefficients.size(); ++k) {
        if (k) out += ", ";
        out += s.coefficients[k].to_string();
      }
    }
    out += "]\n";
  }
  return out;
}

std::string serialize(const RatMatrix& m) { return "matrix:\n" + rows_text(m); }

std::string to_string(DocumentKind k) {
  switch (k) {
    case DocumentKind::System: return "system";
    case DocumentKind::Tower: return "tower";
    case DocumentKind::Matrix: return "matrix";
    case DocumentKind::Expression: return "expression";
  }
  return "?";
}

SourceDocument make_document(std::string text) {
  Cursor cur(text);
  DocumentKind kind = DocumentKind::Expression;
  cur.skip_empty_lines();
  std::size_t at = cur.pos();
  if (auto id = cur.identifier()) {
    if (cur.peek() == ':' || *id == "matrix" || *id == "step") {
      if (*id == "vars" || *id == "rank") {
        kind = DocumentKind::System;
      } else if (*id == "base" || *id == "step") {
        kind = DocumentKind::Tower;
      } else if (*id == "matrix") {
        cur.reset(at);
        cur.identifier();
        kind = cur.peek() == ':' ? DocumentKind::Matrix : DocumentKind::System;
      } else if (*id == "sqrt" || *id == "kolchin") {
        // Either format; the first decisive keyword wins.
        kind = text.find("base:") != std::string::npos ? DocumentKind::Tower : DocumentKind::System;
      }
    }
  }
  return {std::move(text), kind};
}

bool same_system(const LinSystem& a, const LinSystem& b) {
  if (!same_context(a.context(), b.context()) || a.rank() != b.rank() ||
      a.derivation_count() != b.derivation_count())
    return false;
  for (std::size_t k = 0; k < a.derivation_count(); ++k)
    if (!eq(a.matrix(k), b.matrix(k))) return false;
  return true;
}

}  // namespace rpv
