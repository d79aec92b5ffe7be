#include "qgraph/graph_io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "qgraph/errors.hpp"

namespace qg {

json to_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json to_json(const Matrix2& m) {
  json rows = json::array();
  for (int i = 0; i < 2; ++i) rows.push_back(json::array({to_json(m(i, 0)), to_json(m(i, 1))}));
  return rows;
}

json to_json(const Potential& p) {
  json j;
  j["kind"] = to_string(p.kind());
  switch (p.kind()) {
    case PotentialKind::zero: break;
    case PotentialKind::constant: j["value"] = p.value(); break;
    case PotentialKind::piecewise:
      j["breaks"] = p.breaks();
      j["values"] = p.values();
      break;
    case PotentialKind::trig:
      j["cos"] = p.cos_coeffs();
      j["sin"] = p.sin_coeffs();
      j["period"] = p.period();
      break;
    case PotentialKind::table: j["values"] = p.values(); break;
  }
  if (p.kind() != PotentialKind::piecewise) j["length"] = p.length();
  return j;
}

json to_json(const LaurentPoly& p) {
  json terms = json::array();
  for (const auto& [e, c] : p.terms())
    terms.push_back(json{{"exponents", e}, {"re", c.real()}, {"im", c.imag()}});
  return terms;
}

json to_json(const PeriodicGraph& g) {
  json j;
  j["rank"] = g.rank;
  j["vertices"] = json::array();
  for (const auto& v : g.vertices) j["vertices"].push_back(json{{"id", v.id}, {"alpha", v.alpha}});
  j["potentials"] = json::object();
  for (const auto& [name, p] : g.potentials) j["potentials"][name] = to_json(p);
  j["edges"] = json::array();
  for (const auto& e : g.edges)
    j["edges"].push_back(json{{"tail", e.tail}, {"head", e.head}, {"shift", e.shift},
                              {"length", e.length}, {"potential", e.potential}});
  if (!g.dangling.empty()) {
    j["dangling"] = json::array();
    for (const auto& d : g.dangling)
      j["dangling"].push_back(json{{"vertex", d.vertex}, {"length", d.length},
                                   {"potential", d.potential}, {"end", to_string(d.end)}});
  }
  return j;
}

json to_json(const BilayerSpec& spec) {
  PeriodicGraph layer = spec.layer;
  json connectors = json::object();
  for (const auto& v : layer.vertices) {
    const std::string name = "connector:" + v.id;
    layer.potentials.insert_or_assign(name, spec.connectors.at(v.id));
    connectors[v.id] = name;
  }
  json j = to_json(layer);
  j["connectors"] = connectors;
  return j;
}

json to_json(const EdgeSpectral& e) {
  return json{{"lambda", to_json(e.lambda)}, {"c", to_json(e.c)},   {"s", to_json(e.s)},
              {"c_prime", to_json(e.c_prime)}, {"s_prime", to_json(e.s_prime)},
              {"a", to_json(e.a)},           {"b", to_json(e.b)}};
}

json to_json(const FactorReport& r) {
  return json{{"lambda", to_json(r.lambda)},
              {"mu", to_json(r.mu)},
              {"product_residual", r.product_residual},
              {"components_distinct", r.components_distinct},
              {"components_nonempty", json::array({r.components_nonempty.first, r.components_nonempty.second})},
              {"d_plus", to_json(r.d_plus)},
              {"d_minus", to_json(r.d_minus)}};
}

json to_json(const DecoratedReport& r) {
  return json{{"lambda", to_json(r.lambda)},
              {"neumann_residual", r.neumann_residual},
              {"dirichlet_residual", r.dirichlet_residual},
              {"neumann_matches", r.neumann_matches_plus ? "d_plus" : "d_minus"}};
}

json to_json(const GrapheneReport& r) {
  json modes = json::array();
  for (const auto& basis : r.mode_subspaces) {
    json cols = json::array();
    for (int c = 0; c < 2; ++c) {
      json col = json::array();
      for (int i = 0; i < 4; ++i) col.push_back(to_json(basis(i, c)));
      cols.push_back(col);
    }
    modes.push_back(cols);
  }
  return json{{"lambda", to_json(r.lambda)},
              {"B1", to_json(r.B1)},
              {"B2", to_json(r.B2)},
              {"R", to_json(r.R)},
              {"zeta_eigs", json::array({to_json(r.zeta_eigs.first), to_json(r.zeta_eigs.second)})},
              {"quad_residual", r.quad_residual},
              {"mode_subspaces", modes},
              {"ww", to_json(r.ww)}};
}

json to_json(const Square7Report& r) {
  json omega = json::array();
  for (cplx o : r.omega) omega.push_back(to_json(o));
  return json{{"lambda", to_json(r.lambda)},
              {"omega", omega},
              {"mu1", to_json(r.mu1)},
              {"nu2", to_json(r.nu2)},
              {"r_squared", to_json(r.r_squared)},
              {"discriminant_d2", to_json(r.discriminant_d2)},
              {"scale", r.scale},
              {"reducible", r.reducible},
              {"symmetry_residual", r.symmetry_residual},
              {"graph_d2", to_json(r.graph_d2)},
              {"graph_d2_relative", r.graph_d2_relative},
              {"graph_square", r.graph_square},
              {"d2_relative_difference", r.d2_relative_difference}};
}

// ---------------------------------------------------------------------------

namespace {

class Reader {
 public:
  explicit Reader(std::vector<std::string>& errors) : errors_(errors) {}

  void error(const std::string& path, const std::string& msg) {
    errors_.push_back(fmt::format("{}: {}", path, msg));
  }

  bool has(const json& j, const std::string& key) { return j.is_object() && j.contains(key); }

  const json* field(const json& j, const std::string& path, const std::string& key, bool required) {
    if (!j.is_object()) {
      error(path, "expected an object");
      return nullptr;
    }
    auto it = j.find(key);
    if (it == j.end()) {
      if (required) error(path, fmt::format("missing field '{}'", key));
      return nullptr;
    }
    return &*it;
  }

  std::optional<double> number(const json& j, const std::string& path, const std::string& key,
                               bool required) {
    const json* f = field(j, path, key, required);
    if (!f) return std::nullopt;
    if (!f->is_number()) {
      error(path + "." + key, "expected a number");
      return std::nullopt;
    }
    return f->get<double>();
  }

  std::optional<std::string> string(const json& j, const std::string& path, const std::string& key) {
    const json* f = field(j, path, key, true);
    if (!f) return std::nullopt;
    if (!f->is_string()) {
      error(path + "." + key, "expected a string");
      return std::nullopt;
    }
    return f->get<std::string>();
  }

  std::optional<std::vector<double>> numbers(const json& j, const std::string& path,
                                             const std::string& key, bool required) {
    const json* f = field(j, path, key, required);
    if (!f) return std::nullopt;
    if (!f->is_array()) {
      error(path + "." + key, "expected an array of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < f->size(); ++i) {
      if (!(*f)[i].is_number()) {
        error(fmt::format("{}.{}[{}]", path, key, i), "expected a number");
        return std::nullopt;
      }
      out.push_back((*f)[i].get<double>());
    }
    return out;
  }

 private:
  std::vector<std::string>& errors_;
};

}  // namespace

Potential potential_from_json(const json& j, const std::string& path, std::vector<std::string>& errors) {
  Reader rd(errors);
  const std::size_t before = errors.size();
  auto kind = rd.string(j, path, "kind");
  if (!kind) return Potential::zero();
  const double length = rd.number(j, path, "length", false).value_or(1.0);
  try {
    if (*kind == "zero") return Potential::zero(length);
    if (*kind == "constant") {
      auto v = rd.number(j, path, "value", true);
      if (v) return Potential::constant(*v, length);
    } else if (*kind == "piecewise") {
      auto br = rd.numbers(j, path, "breaks", true);
      auto vals = rd.numbers(j, path, "values", true);
      if (br && vals) return Potential::piecewise(*br, *vals);
    } else if (*kind == "trig") {
      auto c = rd.numbers(j, path, "cos", false);
      auto s = rd.numbers(j, path, "sin", false);
      std::optional<double> period = rd.number(j, path, "period", false);
      if (errors.size() == before)
        return Potential::trig(c.value_or(std::vector<double>{}), s.value_or(std::vector<double>{}),
                               length, period);
    } else if (*kind == "table") {
      auto vals = rd.numbers(j, path, "values", true);
      if (vals) return Potential::table(*vals, length);
    } else {
      rd.error(path + ".kind", fmt::format("unknown potential kind '{}'", *kind));
    }
  } catch (const DomainError& e) {
    rd.error(path, e.what());
  }
  if (errors.size() == before) rd.error(path, "invalid potential");
  return Potential::zero();
}

BuiltinModel graph_spec_from_json(const json& j) {
  std::vector<std::string> errors;
  Reader rd(errors);
  PeriodicGraph g;
  if (!j.is_object()) throw SchemaError({"$: expected an object"});
  if (auto rank = rd.field(j, "$", "rank", true)) {
    if (rank->is_number_integer())
      g.rank = rank->get<int>();
    else
      rd.error("rank", "expected an integer");
  }
  if (auto verts = rd.field(j, "$", "vertices", true)) {
    if (!verts->is_array()) rd.error("vertices", "expected an array");
    else
      for (std::size_t i = 0; i < verts->size(); ++i) {
        const std::string path = fmt::format("vertices[{}]", i);
        Vertex v;
        if (auto id = rd.string((*verts)[i], path, "id")) v.id = *id;
        v.alpha = rd.number((*verts)[i], path, "alpha", false).value_or(0.0);
        g.vertices.push_back(v);
      }
  }
  if (auto pots = rd.field(j, "$", "potentials", true)) {
    if (!pots->is_object()) rd.error("potentials", "expected an object");
    else
      for (const auto& [name, rec] : pots->items())
        g.potentials.insert_or_assign(name, potential_from_json(rec, "potentials." + name, errors));
  }
  if (auto edges = rd.field(j, "$", "edges", true)) {
    if (!edges->is_array()) rd.error("edges", "expected an array");
    else
      for (std::size_t i = 0; i < edges->size(); ++i) {
        const json& rec = (*edges)[i];
        const std::string path = fmt::format("edges[{}]", i);
        Edge e;
        if (auto t = rd.string(rec, path, "tail")) e.tail = *t;
        if (auto h = rd.string(rec, path, "head")) e.head = *h;
        if (auto p = rd.string(rec, path, "potential")) e.potential = *p;
        e.length = rd.number(rec, path, "length", false).value_or(1.0);
        if (auto s = rd.field(rec, path, "shift", true)) {
          if (!s->is_array()) rd.error(path + ".shift", "expected an integer array");
          else
            for (const auto& k : *s) {
              if (!k.is_number_integer()) {
                rd.error(path + ".shift", "expected an integer array");
                break;
              }
              e.shift.push_back(k.get<int>());
            }
        }
        g.edges.push_back(e);
      }
  }
  if (auto dangling = rd.field(j, "$", "dangling", false)) {
    if (!dangling->is_array()) rd.error("dangling", "expected an array");
    else
      for (std::size_t i = 0; i < dangling->size(); ++i) {
        const json& rec = (*dangling)[i];
        const std::string path = fmt::format("dangling[{}]", i);
        DanglingEdge d;
        if (auto v = rd.string(rec, path, "vertex")) d.vertex = *v;
        if (auto p = rd.string(rec, path, "potential")) d.potential = *p;
        d.length = rd.number(rec, path, "length", false).value_or(0.5);
        if (auto end = rd.string(rec, path, "end")) {
          if (*end == "dirichlet") d.end = EndCondition::dirichlet;
          else if (*end == "neumann") d.end = EndCondition::neumann;
          else rd.error(path + ".end", "expected 'dirichlet' or 'neumann'");
        }
        g.dangling.push_back(d);
      }
  }
  for (const auto& [key, value] : j.items())
    if (key != "rank" && key != "vertices" && key != "potentials" && key != "edges" &&
        key != "dangling" && key != "connectors")
      rd.error(key, "unknown field");

  if (!errors.empty()) throw SchemaError(std::move(errors));

  auto conn = j.find("connectors");
  if (conn == j.end()) {
    g.validate();
    return g;
  }
  BilayerSpec spec;
  if (!conn->is_object()) {
    errors.push_back("connectors: expected an object");
  } else {
    for (const auto& [vid, pid] : conn->items()) {
      if (!pid.is_string()) {
        errors.push_back(fmt::format("connectors.{}: expected a potential id", vid));
        continue;
      }
      auto it = g.potentials.find(pid.get<std::string>());
      if (it == g.potentials.end()) {
        errors.push_back(fmt::format("connectors.{}: unknown potential '{}'", vid, pid.get<std::string>()));
        continue;
      }
      spec.connectors.insert_or_assign(vid, it->second);
    }
  }
  spec.layer = std::move(g);
  try {
    spec.validate();
  } catch (const SchemaError& e) {
    for (const auto& m : e.messages()) errors.push_back(m);
  }
  if (!errors.empty()) throw SchemaError(std::move(errors));
  return spec;
}

BuiltinModel parse_graph_spec_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min(e.byte, text.size()); ++i)
      if (text[i] == '\n') ++line;
    throw SchemaError({fmt::format("line {}: {}", line, e.what())});
  }
  return graph_spec_from_json(j);
}

BuiltinModel parse_graph_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError(fmt::format("cannot open graph spec '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_graph_spec_text(ss.str());
}

Potential resolve_potential(const std::string& name_or_path) {
  const auto names = builtin_potential_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end())
    return builtin_potential(name_or_path);
  std::ifstream in(name_or_path);
  if (!in)
    throw DomainError(fmt::format("'{}' is neither a builtin potential nor a readable file", name_or_path));
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError({fmt::format("{}: {}", name_or_path, e.what())});
  }
  std::vector<std::string> errors;
  Potential p = potential_from_json(j, "$", errors);
  if (!errors.empty()) throw SchemaError(std::move(errors));
  return p;
}

}  // namespace qg
