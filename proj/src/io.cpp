// Copyright 2026 The coarsemed Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coarsemed/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "coarsemed/errors.hpp"

namespace coarsemed::io {

namespace fs = std::filesystem;

std::string fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json Loader::load(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  digests_.emplace_back(path.string(), "fnv1a64:" + fnv1a64(text));
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError("malformed JSON in '" + path.string() + "': " + e.what());
  }
}

Json Loader::resolve(const Json& ref, const fs::path& base) {
  if (!ref.is_string()) return ref;
  fs::path p = ref.get<std::string>();
  if (p.is_relative()) p = base / p;
  return load(p);
}

Dist dist_from_json(const Json& j, const std::string& field) {
  if (j.is_number_unsigned() || j.is_number_integer()) return Dist(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return Dist::parse(j.get<std::string>());
    } catch (const InputError& e) {
      throw InputError(field + ": " + e.what());
    }
  }
  throw InputError(field + ": expected an integer or a rational string");
}

Json dist_to_json(const Dist& d) { return d.to_string(); }

namespace {

const Json& need(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InputError(where + ": missing field '" + key + "'");
  return j.at(key);
}

std::size_t index_from_json(const Json& j, std::size_t limit, const std::string& field) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) throw InputError(field + ": expected a point index");
  const auto v = j.get<std::int64_t>();
  if (v < 0 || static_cast<std::uint64_t>(v) >= limit) throw InputError(field + ": index out of range");
  return static_cast<std::size_t>(v);
}

std::size_t label_or_index(const Json& j, const std::vector<std::string>& labels, const std::string& field) {
  if (j.is_string()) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == j.get<std::string>()) return i;
    }
    throw InputError(field + ": unknown label '" + j.get<std::string>() + "'");
  }
  return index_from_json(j, labels.size(), field);
}

bool is_file_ref(const Json& j) {
  if (!j.is_string()) return false;
  const auto s = j.get<std::string>();
  return s.size() > 5 && s.substr(s.size() - 5) == ".json";
}

}  // namespace

SpacePtr space_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("space: expected an object");
  std::string name = "X";
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw InputError("space.name: expected a string");
    name = j["name"].get<std::string>();
  }
  const auto& pts = need(j, "points", "space");
  if (!pts.is_array()) throw InputError("space.points: expected an array");
  std::vector<std::string> labels;
  for (const auto& p : pts) {
    if (!p.is_string()) throw InputError("space.points: labels must be strings");
    labels.push_back(p.get<std::string>());
  }
  const auto& metric = need(j, "metric", "space");
  const auto& kind = need(metric, "kind", "space.metric");
  if (kind == "matrix") {
    const auto& d = need(metric, "d", "space.metric");
    if (!d.is_array() || d.size() != labels.size()) throw InputError("space.metric.d: expected an n x n array");
    std::vector<std::vector<Dist>> table(labels.size());
    for (std::size_t a = 0; a < labels.size(); ++a) {
      if (!d[a].is_array() || d[a].size() != labels.size()) {
        throw InputError("space.metric.d[" + std::to_string(a) + "]: expected n entries");
      }
      for (std::size_t b = 0; b < labels.size(); ++b) {
        table[a].push_back(dist_from_json(d[a][b], "space.metric.d[" + std::to_string(a) + "][" + std::to_string(b) + "]"));
      }
    }
    return FiniteMetricSpace::from_matrix(std::move(name), std::move(labels), table);
  }
  if (kind == "graph") {
    const auto& e = need(metric, "edges", "space.metric");
    if (!e.is_array()) throw InputError("space.metric.edges: expected an array");
    std::vector<WeightedEdge> edges;
    for (std::size_t i = 0; i < e.size(); ++i) {
      const std::string field = "space.metric.edges[" + std::to_string(i) + "]";
      if (!e[i].is_array() || e[i].size() < 2 || e[i].size() > 3) throw InputError(field + ": expected [i, j, weight]");
      const auto a = static_cast<Point>(index_from_json(e[i][0], labels.size(), field));
      const auto b = static_cast<Point>(index_from_json(e[i][1], labels.size(), field));
      edges.push_back({a, b, e[i].size() == 3 ? dist_from_json(e[i][2], field) : Dist(1)});
    }
    return FiniteMetricSpace::from_graph(std::move(name), std::move(labels), edges);
  }
  throw InputError("space.metric.kind: expected \"matrix\" or \"graph\"");
}

Json space_to_json(const FiniteMetricSpace& X) {
  Json j;
  j["name"] = X.name();
  j["points"] = X.labels();
  Json d = Json::array();
  for (Point a = 0; a < X.size(); ++a) {
    Json row = Json::array();
    for (Point b = 0; b < X.size(); ++b) row.push_back(X.dist(a, b).to_string());
    d.push_back(std::move(row));
  }
  j["metric"] = {{"kind", "matrix"}, {"d", std::move(d)}};
  return j;
}

Json rips_to_json(const RipsGraph& rips) {
  Json j;
  j["name"] = rips.metric->name();
  j["points"] = rips.metric->labels();
  Json edges = Json::array();
  for (const auto& [a, b] : rips.edges()) edges.push_back({a, b, 1});
  j["metric"] = {{"kind", "graph"}, {"edges", std::move(edges)}};
  return j;
}

TernaryOp median_from_json(const Json& j, const SpacePtr& space, Loader& loader, const fs::path& base) {
  if (is_file_ref(j)) return median_from_json(loader.resolve(j, base), space, loader, base);
  const Json& kind = j.is_string() ? j : need(j, "kind", "median");
  if (!kind.is_string()) throw InputError("median.kind: expected a string");
  const auto k = kind.get<std::string>();
  if (k == "graph-median") return graph_median(space);
  if (k == "one-median") return one_median(space);
  if (k == "delta-centre") return delta_centre_median(space);
  if (k == "table") {
    const auto& values = need(j, "values", "median");
    if (!values.is_array()) throw InputError("median.values: expected an array");
    std::vector<Point> table;
    table.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      table.push_back(static_cast<Point>(index_from_json(values[i], space->size(), "median.values[" + std::to_string(i) + "]")));
    }
    return TernaryOp(space, "table", std::move(table));
  }
  if (k == "product") {
    const auto& factors = need(j, "factors", "median");
    if (!factors.is_array() || factors.empty()) throw InputError("median.factors: expected a nonempty array");
    std::vector<TernaryOp> ops;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const std::string field = "median.factors[" + std::to_string(i) + "]";
      const auto X = space_from_json(loader.resolve(need(factors[i], "space", field), base));
      ops.push_back(median_from_json(need(factors[i], "median", field), X, loader, base));
    }
    const auto prod = product_median(ops);
    if (prod.space->size() != space->size()) throw InputError("median.factors: product size differs from the space");
    return prod.op.with_space(space, "product");
  }
  throw InputError("median.kind: unknown kind '" + k + "'");
}

Json median_to_json(const TernaryOp& mu) {
  const auto& k = mu.kind();
  if (k == "graph-median" || k == "one-median" || k == "delta-centre") return Json{{"kind", k}};
  if (!mu.tabulated()) throw BudgetExceeded("median too large to serialise as a table");
  Json values = Json::array();
  for (const auto v : mu.table()) values.push_back(v);
  return Json{{"kind", "table"}, {"values", std::move(values)}};
}

std::vector<Point> map_table_from_json(const Json& j, std::size_t domain_size, std::size_t codomain_size,
                                       const std::string& field) {
  const Json& arr = j.is_object() ? need(j, "table", field) : j;
  if (!arr.is_array() || arr.size() != domain_size) {
    throw InputError(field + ": expected " + std::to_string(domain_size) + " point indices");
  }
  std::vector<Point> table;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    table.push_back(static_cast<Point>(index_from_json(arr[i], codomain_size, field + "[" + std::to_string(i) + "]")));
  }
  return table;
}

bool DiagramInput::complete() const {
  return std::all_of(medians.begin(), medians.end(), [](const auto& m) { return m.has_value(); });
}

std::vector<TernaryOp> DiagramInput::all_medians() const {
  std::vector<TernaryOp> out;
  for (std::size_t i = 0; i < medians.size(); ++i) {
    if (!medians[i]) throw InputError("diagram.medians: vertex '" + diagram.shape.vertices[i] + "' has no median");
    out.push_back(*medians[i]);
  }
  return out;
}

DiagramInput diagram_from_json(const Json& j, Loader& loader, const fs::path& base) {
  const auto& shape_j = need(j, "shape", "diagram");
  Shape shape;
  const auto& verts = need(shape_j, "vertices", "diagram.shape");
  if (!verts.is_array()) throw InputError("diagram.shape.vertices: expected an array");
  for (const auto& v : verts) {
    if (!v.is_string()) throw InputError("diagram.shape.vertices: labels must be strings");
    shape.vertices.push_back(v.get<std::string>());
  }
  const auto& arrows = need(shape_j, "arrows", "diagram.shape");
  if (!arrows.is_array()) throw InputError("diagram.shape.arrows: expected an array");
  for (std::size_t i = 0; i < arrows.size(); ++i) {
    const std::string field = "diagram.shape.arrows[" + std::to_string(i) + "]";
    const auto from = label_or_index(need(arrows[i], "from", field), shape.vertices, field + ".from");
    const auto to = label_or_index(need(arrows[i], "to", field), shape.vertices, field + ".to");
    const auto& label = need(arrows[i], "label", field);
    if (!label.is_string()) throw InputError(field + ".label: expected a string");
    shape.arrows.push_back({from, to, label.get<std::string>()});
  }
  shape.validate();

  const auto& objects_j = need(j, "objects", "diagram");
  std::vector<SpacePtr> objects;
  for (const auto& v : shape.vertices) {
    const auto& ref = need(objects_j, v, "diagram.objects");
    try {
      objects.push_back(space_from_json(loader.resolve(ref, base)));
    } catch (const InputError& e) {
      throw InputError("diagram.objects." + v + ": " + e.what());
    }
  }
  const auto& maps_j = need(j, "maps", "diagram");
  std::vector<ControlledMap> maps;
  for (const auto& a : shape.arrows) {
    const auto& X = objects[a.from];
    const auto& Y = objects[a.to];
    auto table = map_table_from_json(loader.resolve(need(maps_j, a.label, "diagram.maps"), base), X->size(), Y->size(), "diagram.maps." + a.label);
    maps.emplace_back(X, Y, std::move(table));
  }
  DiagramInput out{UCDiagram::make(std::move(shape), std::move(objects), std::move(maps)), {}};
  out.medians.resize(out.diagram.objects.size());
  if (j.contains("medians")) {
    const auto& med = j["medians"];
    if (!med.is_object()) throw InputError("diagram.medians: expected an object");
    for (std::size_t v = 0; v < out.diagram.shape.vertices.size(); ++v) {
      const auto& label = out.diagram.shape.vertices[v];
      if (!med.contains(label)) continue;
      try {
        out.medians[v] = median_from_json(med[label], out.diagram.objects[v], loader, base);
      } catch (const InputError& e) {
        throw InputError("diagram.medians." + label + ": " + e.what());
      }
    }
  }
  return out;
}

Json diagram_to_json(const UCDiagram& d, const std::vector<TernaryOp>& medians) {
  Json j;
  Json arrows = Json::array();
  for (const auto& a : d.shape.arrows) {
    arrows.push_back({{"from", d.shape.vertices[a.from]}, {"to", d.shape.vertices[a.to]}, {"label", a.label}});
  }
  j["shape"] = {{"vertices", d.shape.vertices}, {"arrows", std::move(arrows)}};
  Json objects = Json::object();
  for (std::size_t v = 0; v < d.objects.size(); ++v) objects[d.shape.vertices[v]] = space_to_json(*d.objects[v]);
  j["objects"] = std::move(objects);
  Json maps = Json::object();
  for (std::size_t a = 0; a < d.maps.size(); ++a) maps[d.shape.arrows[a].label] = d.maps[a].table();
  j["maps"] = std::move(maps);
  Json med = Json::object();
  for (std::size_t v = 0; v < medians.size(); ++v) med[d.shape.vertices[v]] = median_to_json(medians[v]);
  j["medians"] = std::move(med);
  return j;
}

Family family_from_json(const Json& j, Loader& loader, const fs::path& base, const EnumerationBudget& budget) {
  Family F;
  const auto& idx = need(j, "indices", "family");
  if (!idx.is_array()) throw InputError("family.indices: expected an array");
  for (const auto& v : idx) {
    if (!v.is_string()) throw InputError("family.indices: labels must be strings");
    F.indices.push_back(v.get<std::string>());
  }
  const auto& spaces = need(j, "spaces", "family");
  for (const auto& label : F.indices) {
    const std::string field = "family.spaces." + label;
    const auto entry = loader.resolve(need(spaces, label, "family.spaces"), base);
    const bool wrapped = entry.is_object() && entry.contains("space");
    SpacePtr X;
    try {
      X = space_from_json(wrapped ? loader.resolve(entry["space"], base) : entry);
    } catch (const InputError& e) {
      throw InputError(field + ": " + e.what());
    }
    const Json med = entry.is_object() && entry.contains("median") ? entry["median"] : Json("delta-centre");
    auto mu = median_from_json(med, X, loader, base);
    F.certificates.push_back(median_certificate(mu, budget));
    F.spaces.push_back(std::move(X));
    F.medians.push_back(std::move(mu));
  }
  if (j.contains("orth")) {
    const auto& orth = j["orth"];
    if (!orth.is_array()) throw InputError("family.orth: expected an array of pairs");
    for (std::size_t i = 0; i < orth.size(); ++i) {
      const std::string field = "family.orth[" + std::to_string(i) + "]";
      if (!orth[i].is_array() || orth[i].size() != 2) throw InputError(field + ": expected a pair");
      auto a = label_or_index(orth[i][0], F.indices, field);
      auto b = label_or_index(orth[i][1], F.indices, field);
      if (a > b) std::swap(a, b);
      F.orth.emplace_back(a, b);
    }
  }
  if (j.contains("constraints")) {
    const auto& cons = j["constraints"];
    if (!cons.is_array()) throw InputError("family.constraints: expected an array");
    for (std::size_t i = 0; i < cons.size(); ++i) {
      const std::string field = "family.constraints[" + std::to_string(i) + "]";
      const auto& c = cons[i];
      const auto& dir = need(c, "direction", field);
      if (!dir.is_array() || dir.size() != 2) throw InputError(field + ".direction: expected [U, V]");
      ConstraintData data;
      data.u = label_or_index(dir[0], F.indices, field + ".direction");
      data.v = label_or_index(dir[1], F.indices, field + ".direction");
      if (c.contains("pair")) {
        const auto& pair = c["pair"];
        if (!pair.is_array() || pair.size() != 2) throw InputError(field + ".pair: expected [U, V]");
        const std::set<std::size_t> p{label_or_index(pair[0], F.indices, field + ".pair"),
                                      label_or_index(pair[1], F.indices, field + ".pair")};
        if (p != std::set<std::size_t>{data.u, data.v}) throw InputError(field + ".pair: does not match direction");
      }
      if (data.u == data.v) throw InputError(field + ".direction: U and V must differ");
      data.theta = map_table_from_json(need(c, "theta", field), F.spaces[data.v]->size(), F.spaces[data.u]->size(),
                                       field + ".theta");
      data.O = static_cast<Point>(index_from_json(need(c, "O", field), F.spaces[data.v]->size(), field + ".O"));
      data.B = dist_from_json(need(c, "B", field), field + ".B");
      data.K = dist_from_json(need(c, "K", field), field + ".K");
      F.constraints.push_back(std::move(data));
    }
  }
  F.validate();
  return F;
}

Json family_to_json(const Family& F) {
  Json j;
  j["indices"] = F.indices;
  Json orth = Json::array();
  for (const auto& [a, b] : F.orth) orth.push_back({F.indices[a], F.indices[b]});
  j["orth"] = std::move(orth);
  Json spaces = Json::object();
  for (std::size_t i = 0; i < F.indices.size(); ++i) {
    spaces[F.indices[i]] = {{"space", space_to_json(*F.spaces[i])}, {"median", median_to_json(F.medians[i])}};
  }
  j["spaces"] = std::move(spaces);
  Json cons = Json::array();
  for (const auto& c : F.constraints) {
    const auto lo = std::min(c.u, c.v);
    const auto hi = std::max(c.u, c.v);
    cons.push_back({{"pair", {F.indices[lo], F.indices[hi]}},
                    {"direction", {F.indices[c.u], F.indices[c.v]}},
                    {"theta", c.theta},
                    {"O", c.O},
                    {"B", c.B.to_string()},
                    {"K", c.K.to_string()}});
  }
  j["constraints"] = std::move(cons);
  return j;
}

}  // namespace coarsemed::io
