#ifndef REDLAB_JSON_IO_HPP
#define REDLAB_JSON_IO_HPP

#include <json.hpp>

#include "redlab/acceptability.hpp"
#include "redlab/calculus.hpp"
#include "redlab/infer.hpp"
#include "redlab/meaning.hpp"
#include "redlab/rewrite.hpp"

namespace redlab {

/// JSON views of the module results. Keys are stable; hats render in
/// canonical text form under the calculus's type style.
nlohmann::json deriv_json(const DerivNode& n, const TypeStyle& style);
nlohmann::json branch_json(const InferBranch& b, const TypeStyle& style);
nlohmann::json reconstruction_json(const Reconstruction& r,
                                   const TypeStyle& style);
nlohmann::json graph_json(const ReductionGraph& g);
nlohmann::json classification_json(const Classification& cl,
                                   const TypeStyle& style);
nlohmann::json sr_report_json(const SrReport& r);
nlohmann::json sense_json(const Sense& s);
nlohmann::json denotation_json(const Denotation& d);

}  // namespace redlab

#endif
