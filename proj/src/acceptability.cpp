#include "redlab/acceptability.hpp"

#include <random>
#include <sstream>

#include "redlab/error.hpp"
#include "redlab/rewrite.hpp"

namespace redlab {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::FULL: return "FULL";
    case Verdict::WEAK: return "WEAK";
    case Verdict::REJECTED: return "REJECTED";
  }
  return {};
}

std::string to_string(BranchVerdict::Status s) {
  switch (s) {
    case BranchVerdict::Status::FullPreserving: return "full-preserving";
    case BranchVerdict::Status::WeaklyRelated: return "weakly-related";
    case BranchVerdict::Status::Arbitrary: return "arbitrary";
  }
  return {};
}

Classification classify_rule(const Calculus& c, const ReductionRule& r) {
  Classification cl;
  cl.rule = r.name;
  cl.reconstruction = reconstruct_schema(c, r.redex);
  if (cl.reconstruction.branches.empty())
    throw DomainError("UntypableRedex",
                      "redex schema '" + to_string(r.redex) +
                          "' of rule '" + r.name + "' cannot be typed");

  bool any_arbitrary = false;
  bool all_full = true;
  for (size_t i = 0; i < cl.reconstruction.branches.size(); ++i) {
    const InferBranch& b = cl.reconstruction.branches[i];
    BranchVerdict bv;
    bv.index = static_cast<int>(i);
    bv.redex_hat = b.conclusion;
    // The contractum names a position inside the redex schema; both the bare
    // form and the substitution form read the hat recorded at the $m leaf
    // (for the substitution form that leaf is the binder body, whose hat the
    // branch already ties to the substituted metavariable's hat).
    bool found = false;
    for (const auto& [m, h] : b.schema_metas) {
      if (m == r.contractum.meta) {
        bv.contractum_hat = h;
        found = true;
      }
    }
    if (!found)
      throw DomainError("UntypableRedex",
                        "contractum position '$" + r.contractum.meta +
                            "' not reached in the reconstruction of rule '" +
                            r.name + "'");
    std::set<int> redex_metas = meta_vars(bv.redex_hat);
    for (int m : meta_vars(bv.contractum_hat))
      if (!redex_metas.count(m)) bv.fresh_metavars.insert(m);

    if (hat_eq(bv.contractum_hat, bv.redex_hat)) {
      bv.status = BranchVerdict::Status::FullPreserving;
    } else if (!bv.fresh_metavars.empty()) {
      bv.status = BranchVerdict::Status::Arbitrary;
      any_arbitrary = true;
      if (cl.witness_branch < 0) cl.witness_branch = bv.index;
    } else {
      bv.status = BranchVerdict::Status::WeaklyRelated;
    }
    all_full &= bv.status == BranchVerdict::Status::FullPreserving;
    cl.branches.push_back(std::move(bv));
  }
  cl.verdict = any_arbitrary ? Verdict::REJECTED
                             : (all_full ? Verdict::FULL : Verdict::WEAK);
  if (cl.verdict == Verdict::WEAK)
    cl.note =
        "some branch determines a contractum hat different from the redex "
        "hat without introducing fresh metavariables; whether such "
        "determined-but-distinct hats should count as acceptable is "
        "criterion-sensitive";
  return cl;
}

std::vector<Classification> classify_calculus(const Calculus& c) {
  std::vector<Classification> out;
  for (const auto& r : c.reductions) {
    try {
      out.push_back(classify_rule(c, r));
    } catch (const DomainError& e) {
      Classification cl;
      cl.rule = r.name;
      cl.error = std::string(e.code) + ": " + e.what();
      out.push_back(std::move(cl));
    }
  }
  return out;
}

namespace {

// Instances are built by substituting terms for the schema's metavariables.
TermRef fill_schema(const TermRef& schema,
                    const std::map<std::string, TermRef>& fills) {
  switch (schema->tag) {
    case Term::Tag::Meta:
      return fills.at(schema->name);
    case Term::Tag::Binder:
      return tbinder(schema->name, schema->bound,
                     fill_schema(schema->body, fills));
    case Term::Tag::Node: {
      std::vector<TermRef> args;
      args.reserve(schema->args.size());
      for (const auto& a : schema->args)
        args.push_back(fill_schema(a, fills));
      return tnode(schema->name, std::move(args));
    }
    default:
      return schema;
  }
}

void collect_metas(const TermRef& t, std::vector<std::string>& out) {
  if (t->tag == Term::Tag::Meta) {
    for (const auto& m : out)
      if (m == t->name) return;
    out.push_back(t->name);
  }
  if (t->tag == Term::Tag::Binder) collect_metas(t->body, out);
  if (t->tag == Term::Tag::Node)
    for (const auto& a : t->args) collect_metas(a, out);
}

}  // namespace

SrReport check_sr_instances(const Calculus& c, const ReductionRule& r,
                            int trials, uint64_t seed,
                            const std::vector<TermRef>& fixtures) {
  if (trials < 1)
    throw DomainError("BadBounds", "trials must be at least 1");
  SrReport report;
  report.rule = r.name;
  std::mt19937_64 rng(seed);
  std::vector<std::string> metas;
  collect_metas(r.redex, metas);

  auto run_instance = [&](const TermRef& instance) -> bool {
    Reconstruction rec;
    try {
      rec = reconstruct(c, instance);
    } catch (const DomainError&) {
      return false;
    }
    if (rec.branches.empty()) return false;  // instance not well typed

    auto contracted = apply_rule_at(c, r, instance, {});
    if (!contracted) return false;

    bool all_preserved = true;
    for (const InferBranch& b : rec.branches) {
      Skolemizer sk;
      Hat goal = sk(b.conclusion);
      ContextMap ctx = sk(b.context);
      if (!typecheck(c, ctx, *contracted, goal)) {
        all_preserved = false;
        break;
      }
    }
    ++report.trials;
    if (all_preserved) {
      ++report.preserved;
      return true;
    }
    // Distinguish the transition to FROWN from an outright failure.
    Reconstruction crec = reconstruct(c, *contracted);
    bool frown = false;
    for (const InferBranch& b : crec.branches)
      frown |= b.conclusion.is_frown();
    if (frown) {
      ++report.hat_changed;
    } else {
      ++report.failed;
      if (report.failed_instances.size() < 5)
        report.failed_instances.push_back(to_string(instance) + "  ~>  " +
                                          to_string(*contracted));
    }
    return true;
  };

  for (const TermRef& f : fixtures) {
    if (report.trials >= trials) break;
    if (!run_instance(f)) ++report.generation_retries;
  }

  int guard = 0;
  while (report.trials < trials) {
    if (++guard > trials * 100 + 1000)
      throw DomainError("GenerationFailed",
                        "could not build enough well-typed instances of rule '" +
                            r.name + "'");
    std::map<std::string, TermRef> fills;
    for (const auto& m : metas) {
      if (rng() % 4 == 0) {
        fills.emplace(m, tvar("u" + std::to_string(rng() % 3)));
        continue;
      }
      try {
        fills.emplace(
            m, generate_well_typed(c, 1 + static_cast<int>(rng() % 3), rng()));
      } catch (const DomainError&) {
        fills.emplace(m, tvar("u" + std::to_string(rng() % 3)));
      }
    }
    TermRef instance = fill_schema(r.redex, fills);
    if (!run_instance(instance)) ++report.generation_retries;
  }
  return report;
}

std::string render_classification(const Classification& cl,
                                  const TypeStyle& style) {
  std::ostringstream out;
  if (cl.errored()) {
    out << "rule " << cl.rule << ": error (" << cl.error << ")\n";
    return out.str();
  }
  out << "rule " << cl.rule << ": " << to_string(cl.verdict) << "\n";
  for (const auto& bv : cl.branches) {
    out << "  branch " << bv.index << ": redex : "
        << to_string(bv.redex_hat, style) << ", contractum : "
        << to_string(bv.contractum_hat, style) << "  [" << to_string(bv.status)
        << "]";
    if (!bv.fresh_metavars.empty()) {
      out << "  fresh:";
      for (int m : bv.fresh_metavars) out << " ?" << m;
    }
    out << "\n";
  }
  if (cl.witness_branch >= 0) {
    out << "  witness (branch " << cl.witness_branch << "):\n";
    const InferBranch& b = cl.reconstruction.branches[cl.witness_branch];
    std::istringstream lines(render_deriv(b.deriv, style));
    std::string line;
    while (std::getline(lines, line)) out << "    " << line << "\n";
  }
  if (!cl.note.empty()) out << "  note: " << cl.note << "\n";
  return out.str();
}

}  // namespace redlab
