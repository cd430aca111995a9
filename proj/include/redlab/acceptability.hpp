#ifndef REDLAB_ACCEPTABILITY_HPP
#define REDLAB_ACCEPTABILITY_HPP

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "redlab/calculus.hpp"
#include "redlab/infer.hpp"

namespace redlab {

/// Per-branch outcome of comparing the reconstructed hats of a redex schema
/// and its contractum position.
///
///   FullPreserving - the reconstruction forces the contractum hat to be
///                    identical to the redex hat;
///   WeaklyRelated  - the hats differ but the contractum hat mentions no
///                    metavariable absent from the redex hat (it is fully
///                    determined by the reconstruction);
///   Arbitrary      - the contractum hat contains a fresh metavariable: the
///                    rules leave it unrelated to the redex hat.
struct BranchVerdict {
  enum class Status { FullPreserving, WeaklyRelated, Arbitrary };
  int index = 0;
  Hat redex_hat;
  Hat contractum_hat;
  std::set<int> fresh_metavars;
  Status status = Status::FullPreserving;
};

enum class Verdict { FULL, WEAK, REJECTED };

std::string to_string(Verdict v);
std::string to_string(BranchVerdict::Status s);

/// Verdict for one reduction rule. FULL iff all branches preserve fully;
/// REJECTED iff some branch is arbitrary; WEAK otherwise. For REJECTED, the
/// witness is the offending branch of the redex-schema reconstruction.
struct Classification {
  std::string rule;
  Verdict verdict = Verdict::FULL;
  std::vector<BranchVerdict> branches;
  int witness_branch = -1;          // REJECTED: index into reconstruction
  Reconstruction reconstruction;    // the redex schema's reconstruction
  std::string error;                // set instead of a verdict on failure
  std::string note;                 // criterion-sensitivity remarks

  bool errored() const { return !error.empty(); }
};

/// Classify one reduction rule by reconstructing its redex schema and
/// reading the contractum position's hat in every branch.
/// Throws DomainError("UntypableRedex") when the redex schema itself has no
/// reconstruction branch.
Classification classify_rule(const Calculus& c, const ReductionRule& r);

/// Classify every reduction rule, declaration order. Per-rule errors are
/// recorded in the result instead of aborting the batch.
std::vector<Classification> classify_calculus(const Calculus& c);

/// Empirical cross-check of a verdict on concrete instances: generated
/// well-typed terms are wrapped into the redex schema, contracted once, and
/// the contractum is typechecked at the redex's (rigidified) principal
/// typing. `fixtures` are instance terms tried before generated ones.
struct SrReport {
  std::string rule;
  int trials = 0;
  int preserved = 0;      // contractum typechecks at every redex typing
  int hat_changed = 0;    // typecheck fails but contractum reconstructs FROWN
  int failed = 0;         // neither
  int generation_retries = 0;
  std::vector<std::string> failed_instances;  // rendered, first few
};

SrReport check_sr_instances(const Calculus& c, const ReductionRule& r,
                            int trials, uint64_t seed,
                            const std::vector<TermRef>& fixtures = {});

/// Human-readable report, one paragraph per rule with per-branch hats and
/// the witness derivation for rejected rules.
std::string render_classification(const Classification& cl,
                                  const TypeStyle& style);

}  // namespace redlab

#endif
