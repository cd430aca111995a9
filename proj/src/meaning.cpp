#include "redlab/meaning.hpp"

#include <algorithm>
#include <set>

#include "redlab/error.hpp"
#include "redlab/infer.hpp"

namespace redlab {

namespace {

void collect_subjects(const DerivNode& n, std::set<std::string>& seen,
                      std::vector<CanonicalTerm>& out) {
  if (n.subject) {
    CanonicalTerm c = canonicalize(n.subject);
    if (seen.insert(c.text).second) out.push_back(std::move(c));
  }
  for (const auto& child : n.children) collect_subjects(child, seen, out);
}

}  // namespace

Sense sense(const Calculus& c, const TermRef& t, int branch) {
  Reconstruction rec = reconstruct(c, t);
  if (rec.branches.empty())
    throw DomainError("Untypable",
                      "term '" + to_string(t) + "' has no reconstruction");
  if (branch < 0 || branch >= static_cast<int>(rec.branches.size()))
    throw DomainError("NoSuchBranch",
                      "branch " + std::to_string(branch) + " out of range (" +
                          std::to_string(rec.branches.size()) + " branches)");
  Sense s;
  std::set<std::string> seen;
  collect_subjects(rec.branches[branch].deriv, seen, s.members);
  std::sort(s.members.begin(), s.members.end());
  return s;
}

Denotation denotation(const Calculus& c, const TermRef& t, int max_steps) {
  NormalizeResult r = normalize(c, t, max_steps);
  Denotation d;
  switch (r.kind) {
    case NormalizeResult::Kind::NormalForm:
      d.kind = Denotation::Kind::EndTermNF;
      d.term = canonicalize(r.term);
      return d;
    case NormalizeResult::Kind::Cycle:
      d.kind = Denotation::Kind::NoNormalFormWithinBounds;
      d.reason = Denotation::Reason::Cycle;
      return d;
    case NormalizeResult::Kind::StepLimit:
      d.kind = Denotation::Kind::NoNormalFormWithinBounds;
      d.reason = Denotation::Reason::StepLimit;
      return d;
  }
  return d;
}

}  // namespace redlab
