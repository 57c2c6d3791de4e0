#pragma once

#include <string>
#include <string_view>

#include "rpv/system.hpp"
#include "rpv/tower.hpp"

namespace rpv {

/// Parses an expression over the context variables:
///
///   expr     := term (('+' | '-') term)*
///   term     := unary (('*' | '/') unary)*
///   unary    := '-' unary | power
///   power    := atom ('^' exponent)?
///   exponent := ['-'] integer ('^' exponent)?
///   atom     := integer | 'sqrt' '(' integer ')' | identifier | '(' expr ')'
///
/// Unary minus applies to a whole power, so -t^2 is -(t^2).
/// Throws ParseError for any malformed input.
RatFunc parse_expr(std::string_view text, const ContextPtr& ctx);

/// `.pdsys` document:
///
///   vars: t1, t2
///   sqrt: 5            (optional)
///   kolchin: u1, u2    (optional; then the only block is `matrix D:`)
///   rank: 2
///   matrix t1:
///   [1/t1, 0]
///   [0, 1/t1]
///
/// `#` starts a comment. Throws ParseError or DimensionMismatch.
LinSystem parse_system(std::string_view text);

/// `.tower` document:
///
///   base: t1, t2
///   step E: expintegral [t2, t1]
///   step s, c: rotationpair [0, 1]
///   step a: algebraic [a^2 - t1]
///
/// with optional `sqrt:` and `kolchin:` header lines. Coefficients may use
/// the generators of earlier steps.
Tower parse_tower(std::string_view text);

/// `.mat` document: a `matrix:` line followed by bracketed rows, parsed over
/// the given context (usually a tower context).
RatMatrix parse_matrix(std::string_view text, const ContextPtr& ctx);

std::string serialize(const RatFunc& f);
std::string serialize(const LinSystem& s);
std::string serialize(const Tower& t);
std::string serialize(const RatMatrix& m);

enum class DocumentKind { System, Tower, Matrix, Expression };

std::string to_string(DocumentKind k);

/// Source text with the kind inferred from its first keyword line.
struct SourceDocument {
  std::string text;
  DocumentKind kind;
};

SourceDocument make_document(std::string text);

/// Structural equality of parsed systems: same context and equal matrices.
bool same_system(const LinSystem& a, const LinSystem& b);

}  // namespace rpv
