#include "redlab/json_io.hpp"

namespace redlab {

using nlohmann::json;

json deriv_json(const DerivNode& n, const TypeStyle& style) {
  json j;
  j["rule"] = n.rule;
  j["subject"] = to_string(n.subject);
  j["hat"] = to_string(n.hat, style);
  if (n.hyp) {
    j["hyp_var"] = n.hyp->first;
    j["hyp_hat"] = to_string(n.hyp->second, style);
  }
  j["children"] = json::array();
  for (const auto& c : n.children) j["children"].push_back(deriv_json(c, style));
  return j;
}

json branch_json(const InferBranch& b, const TypeStyle& style) {
  json j;
  j["conclusion"] = to_string(b.conclusion, style);
  TypeStyle alias = style;
  alias.alias = true;
  j["alias"] = to_string(b.conclusion, alias);
  json ctx = json::object();
  for (const auto& [v, h] : b.context) ctx[v] = to_string(h, style);
  j["context"] = ctx;
  json metas = json::object();
  for (const auto& [m, h] : b.schema_metas) metas["$" + m] = to_string(h, style);
  j["schema_metas"] = metas;
  j["derivation"] = deriv_json(b.deriv, style);
  return j;
}

json reconstruction_json(const Reconstruction& r, const TypeStyle& style) {
  json j;
  j["typable"] = r.typable();
  j["branch_limit_hit"] = r.branch_limit_hit;
  j["branches"] = json::array();
  for (const auto& b : r.branches) j["branches"].push_back(branch_json(b, style));
  return j;
}

json graph_json(const ReductionGraph& g) {
  json j;
  j["truncated"] = g.truncated;
  j["nodes"] = json::array();
  for (const auto& n : g.nodes) j["nodes"].push_back(n.text);
  j["edges"] = json::array();
  for (const auto& e : g.edges) {
    json ej;
    ej["from"] = e.from;
    ej["to"] = e.to;
    ej["rule"] = e.rule;
    ej["position"] = path_to_string(e.position);
    j["edges"].push_back(ej);
  }
  json nf = json::array();
  for (int i : g.normal_form_nodes()) nf.push_back(i);
  j["normal_form_nodes"] = nf;
  return j;
}

json classification_json(const Classification& cl, const TypeStyle& style) {
  json j;
  j["rule"] = cl.rule;
  if (cl.errored()) {
    j["error"] = cl.error;
    return j;
  }
  j["verdict"] = to_string(cl.verdict);
  j["branches"] = json::array();
  for (const auto& bv : cl.branches) {
    json bj;
    bj["index"] = bv.index;
    bj["redex_hat"] = to_string(bv.redex_hat, style);
    bj["contractum_hat"] = to_string(bv.contractum_hat, style);
    json fresh = json::array();
    for (int m : bv.fresh_metavars) fresh.push_back("?" + std::to_string(m));
    bj["fresh_metavars"] = fresh;
    bj["status"] = to_string(bv.status);
    j["branches"].push_back(bj);
  }
  if (cl.witness_branch >= 0) {
    j["witness_branch"] = cl.witness_branch;
    j["witness"] = branch_json(cl.reconstruction.branches[cl.witness_branch],
                               style);
  }
  if (!cl.note.empty()) j["note"] = cl.note;
  return j;
}

json sr_report_json(const SrReport& r) {
  json j;
  j["rule"] = r.rule;
  j["trials"] = r.trials;
  j["preserved"] = r.preserved;
  j["hat_changed"] = r.hat_changed;
  j["failed"] = r.failed;
  j["generation_retries"] = r.generation_retries;
  j["failed_instances"] = r.failed_instances;
  return j;
}

json sense_json(const Sense& s) {
  json j;
  j["members"] = json::array();
  for (const auto& m : s.members) j["members"].push_back(m.text);
  return j;
}

json denotation_json(const Denotation& d) {
  json j;
  if (d.kind == Denotation::Kind::EndTermNF) {
    j["outcome"] = "end-term-nf";
    j["normal_form"] = d.term.text;
  } else {
    j["outcome"] = "no-normal-form-within-bounds";
    j["reason"] =
        d.reason == Denotation::Reason::Cycle ? "cycle" : "step-limit";
  }
  return j;
}

}  // namespace redlab
