#pragma once

#include <string>

#include <json.hpp>

#include "qgraph/graph_model.hpp"
#include "qgraph/laurent.hpp"
#include "qgraph/reducibility.hpp"

namespace qg {

using json = nlohmann::ordered_json;

json to_json(cplx z);  // {"re": .., "im": ..}
json to_json(const Matrix2& m);
json to_json(const Potential& p);
json to_json(const LaurentPoly& p);  // [{exponents, re, im}], lexicographic
json to_json(const PeriodicGraph& g);
json to_json(const BilayerSpec& spec);
json to_json(const EdgeSpectral& e);
json to_json(const FactorReport& r);
json to_json(const DecoratedReport& r);
json to_json(const GrapheneReport& r);
json to_json(const Square7Report& r);

/// Potential record; errors are appended with `path` as context.
Potential potential_from_json(const json& j, const std::string& path,
                              std::vector<std::string>& errors);

/// A graph-spec document. Returns a BilayerSpec when "connectors" is present.
/// Throws SchemaError with every problem found.
BuiltinModel graph_spec_from_json(const json& j);
BuiltinModel parse_graph_spec_text(const std::string& text);
BuiltinModel parse_graph_spec(const std::string& path);

/// Builtin name, or a path to a JSON potential record.
Potential resolve_potential(const std::string& name_or_path);

}  // namespace qg
