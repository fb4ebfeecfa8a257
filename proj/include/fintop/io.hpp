#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fintop/complex.hpp"
#include "fintop/search.hpp"

namespace fintop {

using ordered_json = nlohmann::ordered_json;

// ---- serialization ------------------------------------------------------

ordered_json space_to_json(const FiniteSpace& s);
// Accepts any relation whose closure is a valid T0 order: transitive edges
// are tolerated and re-minimized.  Throws std::invalid_argument with the
// validation report otherwise.
SpacePtr space_from_json(const ordered_json& j);

ordered_json fence_to_json(const Fence& f);
Fence fence_from_json(const ordered_json& j);

ordered_json report_to_json(const SearchReport& r);
ordered_json exploration_to_json(const ExplorationReport& r);
ordered_json core_trace_to_json(SpacePtr s, const CoreTrace& t);
ordered_json homology_to_json(const SimplicialComplex& k);

// Byte-stable rendering used for every artifact this tool writes.
std::string canonical_text(const ordered_json& j);

// ---- independent certificate verification ------------------------------

struct CertifyResult {
  bool ok = true;
  int checks = 0;  // individual conditions verified
  std::vector<std::string> problems;
};

// Dispatches on the artifact shape: search reports (field "invariant"),
// antidiagonal explorations (kind "circle-exploration"), or a bare fence.
// Every check failure is collected; nothing is trusted from the artifact
// beyond what is re-verified.
CertifyResult certify_artifact(const ordered_json& j);

// ---- other formats ------------------------------------------------------

// Graphviz rendering of the cover relation, ranked by height.
std::string export_dot(const FiniteSpace& s);

// Space sources: constructor expressions (discrete:n, interval:m, circle:n,
// sphere:n, join:A,B, product:A,B, op:A, susp:A, wedge:A@bp,B@bp, with
// parentheses for grouping) or a path to a space JSON file (optionally
// prefixed "file:").
SpacePtr parse_space_expression(const std::string& expr);
SpacePtr load_space_file(const std::string& path);

// "visited=N,seconds=T" with either part optional.
Limits parse_limits_option(const std::string& text);

}  // namespace fintop
