#ifndef REDLAB_PARSE_HPP
#define REDLAB_PARSE_HPP

#include <string>
#include <utility>
#include <vector>

#include "redlab/calculus.hpp"
#include "redlab/term.hpp"
#include "redlab/type.hpp"

namespace redlab {

/// Terms: `x`, `lam x. body`, `app(f, a)`; parentheses for grouping.
/// With allow_meta, `$t` leaves are accepted (rule schemas).
TermRef parse_term(const std::string& src, bool allow_meta = false);

/// Types: atoms are identifiers, `->` is right-associative and loosest,
/// declared infix connectives (passed via style) sit one level tighter,
/// `?A` is a schema variable. With allow_frown, `FROWN` parses as a hat.
Hat parse_hat(const std::string& src, const TypeStyle& style,
              bool allow_frown = true);
TypeRef parse_type(const std::string& src, const TypeStyle& style);

/// A context: `x: s -> t, y: r` (empty string means empty context).
std::vector<std::pair<std::string, Hat>> parse_context(
    const std::string& src, const TypeStyle& style);

/// Full .rcalc source. Parses and validates; diagnostics become a
/// ParseError whose message lists every violation.
Calculus parse_calculus(const std::string& src);

/// Parse without validating (used by the `validate` command).
Calculus parse_calculus_raw(const std::string& src);

}  // namespace redlab

#endif
