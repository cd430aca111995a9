#ifndef REDLAB_MEANING_HPP
#define REDLAB_MEANING_HPP

#include <vector>

#include "redlab/calculus.hpp"
#include "redlab/rewrite.hpp"
#include "redlab/term.hpp"

namespace redlab {

/// The set of terms occurring as subjects in one reconstruction branch's
/// derivation, canonicalized and deduplicated (alpha-variant subjects
/// collapse). Contains the end-term, which is also its largest member.
struct Sense {
  std::vector<CanonicalTerm> members;  // sorted by canonical text
};

/// Throws DomainError("Untypable") when the term has no reconstruction
/// branch and DomainError("NoSuchBranch") for an out-of-range index.
Sense sense(const Calculus& c, const TermRef& t, int branch = 0);

/// The normal-form end-term, or the reason none was found within bounds.
struct Denotation {
  enum class Kind { EndTermNF, NoNormalFormWithinBounds };
  enum class Reason { None, Cycle, StepLimit };
  Kind kind = Kind::EndTermNF;
  CanonicalTerm term;  // EndTermNF
  Reason reason = Reason::None;
};

Denotation denotation(const Calculus& c, const TermRef& t, int max_steps);

}  // namespace redlab

#endif
