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

#include "coarsemed/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "coarsemed/diagram.hpp"
#include "coarsemed/errors.hpp"
#include "coarsemed/hhs.hpp"
#include "coarsemed/io.hpp"
#include "coarsemed/report.hpp"

namespace coarsemed::cli {

namespace fs = std::filesystem;
using io::Json;

namespace {

struct Options {
  std::string out;
  std::optional<std::uint64_t> budget;
  std::optional<std::uint64_t> subsample;
  std::string space;
  std::string median = "graph-median";
  std::string domain;
  std::string codomain;
  std::string map;
  std::string median_dom = "graph-median";
  std::string median_cod = "graph-median";
  std::string diagram;
  std::string family;
  std::string kappa = "0";
  std::string sigma = "1";
  std::string L = "0";
  std::string max_C;
  std::string scales;
  std::string grid = "0,1,2";
  std::string diagram_out;
  std::string kind = "product-of-trees";
  std::size_t k = 2;
  std::size_t n = 5;
  std::uint64_t seed = 0;
  std::size_t depth = 1;
  std::size_t extra = 0;
};

EnumerationBudget enumeration_budget(const Options& o) {
  EnumerationBudget b;
  if (o.budget) {
    b.rho_pairs = *o.budget;
    b.five_point = *o.budget;
  }
  b.subsample_seed = o.subsample;
  return b;
}

TupleBudget tuple_budget(const Options& o) {
  TupleBudget b;
  if (o.budget) b.candidates = *o.budget;
  return b;
}

Dist parse_dist(const std::string& text, const std::string& flag) {
  try {
    return Dist::parse(text);
  } catch (const InputError& e) {
    throw InputError(flag + ": " + e.what());
  }
}

std::vector<Dist> parse_list(const std::string& text, const std::string& flag) {
  std::vector<Dist> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_dist(item, flag));
  if (out.empty()) throw InputError(flag + ": empty list");
  return out;
}

SpacePtr load_space(io::Loader& loader, const std::string& path, const std::string& flag) {
  if (path.empty()) throw InputError(flag + " is required");
  try {
    return io::space_from_json(loader.load(path));
  } catch (const InputError& e) {
    throw InputError(flag + " " + path + ": " + e.what());
  }
}

TernaryOp load_median(io::Loader& loader, const std::string& ref, const SpacePtr& space, const std::string& flag) {
  try {
    return io::median_from_json(Json(ref), space, loader, fs::path());
  } catch (const InputError& e) {
    throw InputError(flag + " " + ref + ": " + e.what());
  }
}

Json labels_of(const FiniteMetricSpace& X, const std::vector<Point>& pts) {
  Json out = Json::array();
  for (const auto p : pts) out.push_back(X.label(p));
  return out;
}

void report_certificate(RunReport& r, const MedianCertificate& cert, const FiniteMetricSpace& X,
                        const std::string& prefix = "") {
  r.constant(prefix + "C_sym", cert.sym.value);
  r.constant(prefix + "C_loc", cert.loc.value);
  r.constant(prefix + "C_4pt", cert.four.value);
  r.constant(prefix + "C", cert.c);
  r.constant(prefix + "rho_exact", Json(cert.rho_exact));
  r.constant(prefix + "rho_exact_through", cert.rho_exact_through);
  if (!cert.sym.witness.empty()) {
    Json w = labels_of(X, {cert.sym.witness.begin(), cert.sym.witness.begin() + 3});
    w.push_back(cert.sym.witness[3]);
    r.witness(prefix + "C_sym", std::move(w));
  }
  if (!cert.loc.witness.empty()) r.witness(prefix + "C_loc", X, cert.loc.witness);
  if (!cert.four.witness.empty()) r.witness(prefix + "C_4pt", X, cert.four.witness);
  r.data()[prefix + "rho"] = control_to_json(cert.rho);
}

MedianDiagram load_median_diagram(io::Loader& loader, const Options& o, Dist* kappa_K) {
  if (o.diagram.empty()) throw InputError("--diagram is required");
  const auto j = loader.load(o.diagram);
  const auto base = fs::path(o.diagram).parent_path();
  if (j.is_object() && j.contains("indices")) {
    const auto F = io::family_from_json(j, loader, base, enumeration_budget(o));
    if (kappa_K) {
      *kappa_K = Dist(0);
      for (const auto& c : F.constraints) *kappa_K = max(*kappa_K, c.K);
    }
    return build_hhs_diagram(F, enumeration_budget(o)).diagram;
  }
  auto in = io::diagram_from_json(j, loader, base);
  auto medians = in.all_medians();
  return MedianDiagram::make(std::move(in.diagram), std::move(medians), enumeration_budget(o));
}

UCDiagram load_diagram(io::Loader& loader, const Options& o) {
  if (o.diagram.empty()) throw InputError("--diagram is required");
  const auto j = loader.load(o.diagram);
  return io::diagram_from_json(j, loader, fs::path(o.diagram).parent_path()).diagram;
}

Family load_family(io::Loader& loader, const Options& o) {
  if (o.family.empty()) throw InputError("--family is required");
  const auto j = loader.load(o.family);
  return io::family_from_json(j, loader, fs::path(o.family).parent_path(), enumeration_budget(o));
}

void cmd_check_median(RunReport& r, io::Loader& loader, const Options& o) {
  const auto X = load_space(loader, o.space, "--space");
  const auto mu = load_median(loader, o.median, X, "--median");
  const auto cert = median_certificate(mu, enumeration_budget(o));
  report_certificate(r, cert, *X);
  if (!o.max_C.empty()) r.check("max_C", parse_dist(o.max_C, "--max-C"), cert.c, cert.c <= parse_dist(o.max_C, "--max-C"));
}

void cmd_cmp(RunReport& r, io::Loader& loader, const Options& o) {
  const auto X = load_space(loader, o.domain, "--domain");
  const auto Y = load_space(loader, o.codomain, "--codomain");
  if (o.map.empty()) throw InputError("--map is required");
  auto table = io::map_table_from_json(loader.load(o.map), X->size(), Y->size(), "--map");
  const ControlledMap f(X, Y, std::move(table));
  const auto mx = load_median(loader, o.median_dom, X, "--median-dom");
  const auto my = load_median(loader, o.median_cod, Y, "--median-cod");
  const auto d = cmp_defect(f, mx, my);
  r.constant("cmp", d.value);
  if (!d.witness.empty()) r.witness("cmp", *X, d.witness);
  r.data()["control"] = control_to_json(f.control());
}

void cmd_rips(RunReport& r, io::Loader& loader, const Options& o) {
  const auto X = load_space(loader, o.space, "--space");
  const Dist sigma = parse_dist(o.sigma, "--sigma");
  const auto rips = rips_graph(X, sigma);
  r.constant("sigma", sigma);
  r.constant("edges", Json(rips.edges().size()));
  r.constant("connected", Json(rips.metric->connected()));
  const auto xi = xi_map(rips);
  Dist worst_bound(0);
  Dist worst_value(0);
  Dist::Rational worst_ratio(-1);
  for (const auto& s : xi.control().samples()) {
    if (s.threshold == Dist(0) || s.threshold.is_infinite()) continue;
    const Dist bound = sigma * s.threshold;
    const auto ratio = s.bound.is_infinite() ? Dist::Rational(1 << 30) : s.bound.value() / bound.value();
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      worst_bound = bound;
      worst_value = s.bound;
    }
  }
  r.check("xi_control", worst_bound, worst_value, worst_value <= worst_bound);
  r.data()["xi_control"] = control_to_json(xi.control());
  if (!o.scales.empty()) {
    const auto table = filtration_distortion(X, parse_list(o.scales, "--scales"));
    Json rows = Json::array();
    for (const auto& e : table.entries) {
      rows.push_back({{"sigma", e.sigma.to_string()},
                      {"tau", e.tau.to_string()},
                      {"ratio", e.ratio.to_string()},
                      {"disconnected_pairs", e.disconnected_pairs}});
    }
    r.data()["distortion"] = std::move(rows);
    r.constant("recommended_scale", table.recommended_scale ? Json(table.recommended_scale->to_string()) : Json(nullptr));
  }
  r.data()["space"] = io::rips_to_json(rips);
}

void cmd_intervals(RunReport& r, io::Loader& loader, const Options& o) {
  const auto X = load_space(loader, o.space, "--space");
  const auto mu = load_median(loader, o.median, X, "--median");
  const auto cert = median_certificate(mu, enumeration_budget(o));
  r.constant("C", cert.c);
  r.data()["rho"] = control_to_json(cert.rho);
  const auto rep = interval_lemma_check(mu, cert, default_interval_grid(cert));
  for (const auto& c : rep.checks) {
    std::string name = c.name;
    if (c.name == "neighbourhood") name += "[L=" + c.L.to_string() + ",r=" + c.r.to_string() + "]";
    if (c.name == "nested") name += "[L=" + c.L.to_string() + "]";
    r.check(name, c.bound, c.observed, c.pass());
    if (!c.witness.empty()) r.witness(name, *X, c.witness);
  }
}

void cmd_five_point(RunReport& r, io::Loader& loader, const Options& o) {
  const auto X = load_space(loader, o.space, "--space");
  const auto mu = load_median(loader, o.median, X, "--median");
  const auto d = five_point_defect(mu, enumeration_budget(o));
  r.constant("E", d.value);
  r.constant("exhaustive", Json(d.exhaustive));
  if (!d.witness.empty()) r.witness("E", *X, d.witness);
}

void cmd_tripod(RunReport& r, io::Loader& loader, const Options& o) {
  const auto X = load_space(loader, o.space, "--space");
  const auto mu = load_median(loader, o.median, X, "--median");
  const Dist L = parse_dist(o.L, "--L");
  const auto d = tripod_defect(mu, L);
  r.constant("L", L);
  r.constant("R", d.value);
  r.constant("vacuous", Json(d.vacuous));
  if (!d.witness.empty()) r.witness("R", *X, d.witness);
}

void cmd_tuplespace(RunReport& r, io::Loader& loader, const Options& o) {
  const auto d = load_diagram(loader, o);
  const Dist kappa = parse_dist(o.kappa, "--kappa");
  const auto T = tuple_space(d, kappa, tuple_budget(o));
  r.constant("kappa", kappa);
  r.constant("tuples", Json(T.size()));
  r.constant("candidates_examined", Json(T.candidates_examined));
  r.check("projection_cone_defect", kappa, tuple_defect(d, T), true);
  Json list = Json::array();
  for (const auto t : T.tuples) list.push_back(T.ambient->label(t));
  r.data()["tuples"] = std::move(list);
}

void cmd_stabilize(RunReport& r, io::Loader& loader, const Options& o) {
  const auto d = load_diagram(loader, o);
  const auto rows = tuple_stabilization(d, parse_list(o.grid, "--grid"), tuple_budget(o));
  Json out = Json::array();
  for (const auto& row : rows) {
    out.push_back({{"kappa", row.kappa.to_string()},
                   {"kappa_prime", row.kappa_prime.to_string()},
                   {"size", row.size},
                   {"size_prime", row.size_prime},
                   {"excess", row.excess ? Json(row.excess->to_string()) : Json(nullptr)}});
  }
  r.data()["rows"] = std::move(out);
}

void cmd_recipe(RunReport& r, io::Loader& loader, const Options& o) {
  const auto d = load_diagram(loader, o);
  const Dist kappa = parse_dist(o.kappa, "--kappa");
  const Dist sigma = parse_dist(o.sigma, "--sigma");
  const auto apex = rips_tuple_apex(d, kappa, sigma, tuple_budget(o));
  r.constant("kappa", kappa);
  r.constant("sigma", sigma);
  r.constant("apex_size", Json(apex.tuples.size()));
  r.constant("apex_connected", Json(apex.rips.metric->connected()));
  r.check("cone_defect", kappa, apex.cone.defect, apex.cone.defect <= kappa);
  Json legs = Json::object();
  for (std::size_t j = 0; j < apex.cone.legs.size(); ++j) {
    legs[d.shape.vertices[j]] = control_to_json(apex.cone.legs[j].control());
  }
  r.data()["leg_controls"] = std::move(legs);
}

void cmd_hhs_build(RunReport& r, io::Loader& loader, const Options& o) {
  const auto F = load_family(loader, o);
  const auto H = build_hhs_diagram(F, enumeration_budget(o));
  const auto& shape = H.diagram.diagram.shape;
  r.constant("vertices", Json(shape.vertices.size()));
  r.constant("arrows", Json(shape.arrows.size()));
  r.constant("common_C", H.diagram.common_C);
  r.constant("c", H.diagram.c);
  r.constant("max_R", H.max_R);
  Json pairs = Json::array();
  for (std::size_t p = 0; p < H.pairs.size(); ++p) {
    pairs.push_back({{"vertex", shape.vertices[F.indices.size() + p]},
                     {"orthogonal", H.pairs[p].orthogonal},
                     {"size", H.pairs[p].points.size()},
                     {"R_induced", H.pair_medians[p].R.to_string()},
                     {"defect", H.pairwise[p].defect.value.to_string()},
                     {"bound", H.pairwise[p].bound.to_string()}});
  }
  r.data()["pairs"] = std::move(pairs);
  for (const auto& c : H.checks) r.check(c);
  if (!o.diagram_out.empty()) {
    std::ofstream f(o.diagram_out);
    if (!f) throw InputError("--diagram-out: cannot write '" + o.diagram_out + "'");
    f << io::diagram_to_json(H.diagram.diagram, H.diagram.medians).dump(1) << "\n";
  }
}

void cmd_hhs_verify(RunReport& r, io::Loader& loader, const Options& o) {
  const auto F = load_family(loader, o);
  const Dist C = F.common_C();
  const auto rho = F.common_rho();
  r.constant("common_C", C);
  for (std::size_t i = 0; i < F.indices.size(); ++i) {
    r.constant("delta:" + F.indices[i], hyperbolicity(*F.spaces[i]));
    r.constant("C:" + F.indices[i], F.certificates[i].c);
  }
  for (const auto& c : F.constraints) {
    const std::string tag = F.indices[c.u] + "," + F.indices[c.v];
    const auto b = bcii_defect(F.medians[c.v], F.certificates[c.v], *F.spaces[c.u], c.theta, c.O);
    r.constant("bcii:" + tag, b.defect.value);
    r.check("bcii:" + tag, c.B, b.defect.value, b.defect.value <= c.B);
    r.check("B_floor:" + tag, c.B, C + rho(C), C + rho(C) <= c.B);
    r.check("K_ge_B:" + tag, c.K, c.B, c.B <= c.K);
  }
  for (std::size_t i = 0; i < F.indices.size(); ++i) {
    for (std::size_t j = i + 1; j < F.indices.size(); ++j) {
      const auto R = constraint_space(F, i, j);
      const auto p = pairwise_subalgebra_defect(F, R);
      const std::string tag = F.indices[i] + "," + F.indices[j];
      r.constant("pair_size:" + tag, Json(R.points.size()));
      r.check("pairwise:" + tag, p.bound, p.defect.value, p.pass());
    }
  }
}

void cmd_assemble(RunReport& r, io::Loader& loader, const Options& o) {
  Dist K(0);
  const auto M = load_median_diagram(loader, o, &K);
  const Dist kappa = o.kappa == "K" ? K : parse_dist(o.kappa, "--kappa");
  const Dist sigma = parse_dist(o.sigma, "--sigma");
  const auto A = assemble_median_cone(M, kappa, sigma, enumeration_budget(o), tuple_budget(o));
  r.constant("kappa", kappa);
  r.constant("sigma", sigma);
  r.constant("tuples", Json(A.tuples.size()));
  r.constant("common_C", M.common_C);
  r.constant("c", M.c);
  r.constant("kappa_prime", A.closure.kappa_prime);
  r.constant("R_induced", A.induced.R);
  r.constant("target_scale", A.rips.target_scale);
  r.constant("cone_defect", A.cone_defect);
  report_certificate(r, A.rips.certificate, *A.apex(), "nu_");
  for (std::size_t j = 0; j < A.legs.size(); ++j) {
    r.constant("leg_cmp:" + M.diagram.shape.vertices[j], A.leg_cmp[j].value);
  }
  if (!A.closure.witness.empty()) r.witness("kappa_prime", *A.tuples.ambient, A.closure.witness);
  for (const auto& c : A.checks) r.check(c);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"coarse median certificates on finite metric spaces", "coarsemed"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "write the report to FILE");
    sub->add_option("--budget", o.budget, "override enumeration caps");
    sub->add_option("--subsample", o.subsample, "seeded sampling for the five-point scan");
    return sub;
  };
  auto space_median = [&](CLI::App* sub) {
    sub->add_option("--space", o.space, "space JSON")->required();
    sub->add_option("--median", o.median, "median kind or median JSON");
    return sub;
  };
  auto* check = space_median(common(app.add_subcommand("check-median", "median certificate")));
  check->add_option("--max-C", o.max_C, "assert C <= value");
  auto* cmp = common(app.add_subcommand("cmp", "cmp defect of a map"));
  cmp->add_option("--domain", o.domain)->required();
  cmp->add_option("--codomain", o.codomain)->required();
  cmp->add_option("--map", o.map)->required();
  cmp->add_option("--median-dom", o.median_dom);
  cmp->add_option("--median-cod", o.median_cod);
  auto* rips = common(app.add_subcommand("rips", "Rips graph at one scale"));
  rips->add_option("--space", o.space)->required();
  rips->add_option("--sigma", o.sigma);
  rips->add_option("--scales", o.scales, "comma separated scales for the distortion table");
  space_median(common(app.add_subcommand("intervals", "coarse interval checks")));
  space_median(common(app.add_subcommand("five-point", "five-point defect")));
  space_median(common(app.add_subcommand("tripod", "tripod defect")))->add_option("--L", o.L);
  auto* tuples = common(app.add_subcommand("tuplespace", "consistent tuple space"));
  tuples->add_option("--diagram", o.diagram)->required();
  tuples->add_option("--kappa", o.kappa);
  auto* stab = common(app.add_subcommand("stabilize", "tuple filtration excesses"));
  stab->add_option("--diagram", o.diagram)->required();
  stab->add_option("--grid", o.grid);
  auto* recipe = common(app.add_subcommand("recipe", "Rips tuple apex"));
  recipe->add_option("--diagram", o.diagram)->required();
  recipe->add_option("--kappa", o.kappa);
  recipe->add_option("--sigma", o.sigma);
  auto* build = common(app.add_subcommand("hhs-build", "diagram of a family"));
  build->add_option("--family", o.family)->required();
  build->add_option("--diagram-out", o.diagram_out, "also write the diagram JSON");
  common(app.add_subcommand("hhs-verify", "family constants"))->add_option("--family", o.family)->required();
  auto* toy = app.add_subcommand("toy-gen", "generate a toy family");
  toy->add_option("--out", o.out);
  toy->add_option("--kind", o.kind)->check(CLI::IsMember({"product-of-trees", "tree-collapse-chain"}));
  toy->add_option("--k", o.k);
  toy->add_option("--n", o.n);
  toy->add_option("--seed", o.seed);
  toy->add_option("--depth", o.depth);
  toy->add_option("--extra", o.extra);
  toy->add_option("--budget", o.budget);
  auto* assemble = common(app.add_subcommand("assemble", "median cone over a diagram or family"));
  assemble->add_option("--diagram", o.diagram, "diagram or family JSON")->required();
  assemble->add_option("--kappa", o.kappa, "rational, or K for the family's largest K");
  assemble->add_option("--sigma", o.sigma);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  const auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  auto emit = [&](const std::string& text) -> bool {
    if (o.out.empty()) {
      out << text;
      return true;
    }
    std::ofstream f(o.out);
    if (!f) return false;
    f << text;
    return true;
  };

  io::Loader loader;
  try {
    if (name == "toy-gen") {
      ToyParams p{o.k, o.n, o.seed, o.depth, o.extra, {}};
      if (o.budget) p.budget.rho_pairs = *o.budget;
      const auto F = toy_family(o.kind, p);
      if (!emit(io::family_to_json(F).dump(1) + "\n")) throw InputError("--out: cannot write '" + o.out + "'");
      return 0;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetExceeded& e) {
    err << "error: budget exceeded: " << e.what() << "\n";
    return 2;
  }

  RunReport report(name);
  try {
    if (name == "check-median") cmd_check_median(report, loader, o);
    if (name == "cmp") cmd_cmp(report, loader, o);
    if (name == "rips") cmd_rips(report, loader, o);
    if (name == "intervals") cmd_intervals(report, loader, o);
    if (name == "five-point") cmd_five_point(report, loader, o);
    if (name == "tripod") cmd_tripod(report, loader, o);
    if (name == "tuplespace") cmd_tuplespace(report, loader, o);
    if (name == "stabilize") cmd_stabilize(report, loader, o);
    if (name == "recipe") cmd_recipe(report, loader, o);
    if (name == "hhs-build") cmd_hhs_build(report, loader, o);
    if (name == "hhs-verify") cmd_hhs_verify(report, loader, o);
    if (name == "assemble") cmd_assemble(report, loader, o);
  } catch (const AssertionFailure& e) {
    report.failed(e.name(), e.what());
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetExceeded& e) {
    err << "error: budget exceeded: " << e.what() << "\n";
    return 2;
  } catch (const Json::exception& e) {
    err << "error: malformed JSON: " << e.what() << "\n";
    return 2;
  }
  report.inputs(loader.digests());
  if (!emit(report.dump())) {
    err << "error: --out: cannot write '" << o.out << "'\n";
    return 2;
  }
  if (!report.pass()) err << "assertion failed\n";
  return report.pass() ? 0 : 1;
}

}  // namespace coarsemed::cli
