#include "vtg/cli.hpp"

#include "vtg/approx.hpp"
#include "vtg/errors.hpp"
#include "vtg/families.hpp"
#include "vtg/growth.hpp"
#include "vtg/qi.hpp"
#include "vtg/quotient.hpp"
#include "vtg/structure.hpp"
#include "vtg/walk.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

namespace vtg::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Options {
  std::string family;
  std::string graph_file;
  std::string group;
  std::string group_file;
  std::string table_file;
  std::string h;
  std::size_t vertex = 0;
  std::string output = "-";
  std::size_t workers = 0;
  std::uint64_t seed = 1;

  std::size_t radius = 0;
  std::uint64_t n = 0;
  std::string d = "1";
  std::uint64_t q = 2;
  std::string alpha, beta;
  std::string k;
  std::string set;
  std::size_t ball = 1;
  bool tripling = false;
  std::size_t trials = 500;
  std::size_t higher_trials = 100;
  std::size_t mmax = 6;
  std::size_t max_set_size = 6;
  std::string weights;
  std::string csv;
  std::string fibres_csv;
  std::string quotient_graph;
  std::size_t pieces_max = 2;
  std::uint64_t m_max = 0;
  double penalty = kDefaultPiecePenalty;
  std::size_t slope_from = 0, slope_to = 0;
  std::uint64_t m_lo = 1, m_hi = 0;
  std::string c;
  std::string epsilon = "1/4";
  bool no_spectral = false;
};

// ---------------------------------------------------------------------------
// Families

struct Family {
  std::string kind;
  std::vector<std::size_t> params;
};

std::size_t parse_size(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw InputError("expected a non-negative integer, got '" + s + "'");
  return std::stoull(s);
}

Family parse_family(const std::string& text) {
  Family f;
  auto colon = text.find(':');
  f.kind = text.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (f.kind.rfind("lattice-Z^", 0) == 0) {
    f.params.push_back(parse_size(f.kind.substr(10)));
    f.kind = "lattice-Z";
    if (f.params[0] == 0) throw InputError("lattice dimension must be positive");
    return f;
  }
  std::size_t expected = 1;
  if (f.kind == "petersen" || f.kind == "heisenberg-Z") expected = 0;
  else if (f.kind == "torus") expected = 2;
  else if (f.kind != "cycle" && f.kind != "hypercube" && f.kind != "heisenberg-mod" && f.kind != "dihedral")
    throw InputError("unknown family '" + f.kind + "'");
  if (!rest.empty()) {
    std::stringstream ss(rest);
    std::string part;
    while (std::getline(ss, part, 'x')) f.params.push_back(parse_size(part));
  }
  if (f.params.size() != expected) throw InputError("family '" + f.kind + "' takes " + std::to_string(expected) + " parameter(s)");
  return f;
}

bool is_lazy(const Family& f) { return f.kind == "lattice-Z" || f.kind == "heisenberg-Z"; }

// Group and generators of a family that is a Cayley graph.
std::optional<std::pair<FiniteGroup, std::vector<GroupElement>>> cayley_data(const Family& f) {
  auto with_gens = [](FiniteGroup g) {
    auto gens = g.generators();
    return std::make_pair(std::move(g), std::move(gens));
  };
  if (f.kind == "cycle") return with_gens(cyclic_group(f.params[0]));
  if (f.kind == "torus")
    return with_gens(abelian_group({std::int64_t(f.params[0]), std::int64_t(f.params[1])}));
  if (f.kind == "hypercube") return with_gens(abelian_group(std::vector<std::int64_t>(f.params[0], 2)));
  if (f.kind == "dihedral") return with_gens(dihedral_group(f.params[0]));
  if (f.kind == "heisenberg-mod") return with_gens(heisenberg_mod(f.params[0]));
  return std::nullopt;
}

Graph family_graph(const Family& f) {
  if (is_lazy(f)) throw InputError("family '" + f.kind + "' is infinite; only growth tables are available");
  if (f.kind == "cycle") return cycle_graph(f.params[0]);
  if (f.kind == "torus") return torus_graph(f.params[0], f.params[1]);
  if (f.kind == "hypercube") return hypercube_graph(f.params[0]);
  if (f.kind == "petersen") return petersen_graph();
  auto data = cayley_data(f);
  auto s = GenSet::symmetric_closure(data->first, data->second);
  return cayley_graph(data->first, s);
}

void require_source(const Options& o) {
  if (o.family.empty() == o.graph_file.empty()) throw InputError("give exactly one of --family and --graph");
}

Graph load_graph(const Options& o) {
  require_source(o);
  if (!o.graph_file.empty()) return read_graph_file(o.graph_file);
  return family_graph(parse_family(o.family));
}

Instance load_instance(const Options& o) {
  require_source(o);
  if (!o.group_file.empty()) {
    if (!o.group.empty() && o.group != "file") throw InputError("--group-file conflicts with --group " + o.group);
    auto spec = read_group_file(o.group_file);
    auto g = FiniteGroup::generate(spec.identity, spec.generators);
    return perm_instance("file", load_graph(o), g);
  }
  if (!o.graph_file.empty()) {
    if (!o.group.empty() && o.group != "aut") throw InputError("a graph file supports --group aut or --group-file");
    return aut_instance(o.graph_file, read_graph_file(o.graph_file));
  }
  auto f = parse_family(o.family);
  if (is_lazy(f)) throw InputError("family '" + f.kind + "' is infinite");
  const bool cayley_family = f.kind == "dihedral" || f.kind == "heisenberg-mod";
  std::string group = o.group.empty() ? (cayley_family ? "regular" : "aut") : o.group;
  if (group == "regular") {
    auto data = cayley_data(f);
    if (!data) throw InputError("family '" + f.kind + "' has no regular group");
    return cayley_instance(o.family, data->first, data->second);
  }
  if (group == "aut") return aut_instance(o.family, family_graph(f));
  if (group == "rotations" || group == "dihedral") {
    if (f.kind != "cycle") throw InputError("--group " + group + " needs a cycle family");
    auto g = group == "rotations" ? cycle_rotations(f.params[0]) : cycle_dihedral(f.params[0]);
    return perm_instance(o.family, family_graph(f), g);
  }
  if (group == "translations") {
    if (f.kind != "torus") throw InputError("--group translations needs a torus family");
    return perm_instance(o.family, family_graph(f), torus_translations(f.params[0], f.params[1]));
  }
  throw InputError("unknown group '" + group + "'");
}

GenSet load_gen_set(const Options& o) {
  if (!o.group_file.empty()) {
    auto spec = read_group_file(o.group_file);
    auto g = FiniteGroup::generate(spec.identity, spec.generators);
    return GenSet::symmetric_closure(g, spec.generators);
  }
  if (o.family.empty()) throw InputError("give --family or --group-file");
  auto f = parse_family(o.family);
  auto data = cayley_data(f);
  if (!data) throw InputError("family '" + f.kind + "' is not a finite group");
  return GenSet::symmetric_closure(data->first, data->second);
}

GrowthTable load_table(const Options& o, std::size_t radius) {
  if (!o.table_file.empty()) {
    std::ifstream in(o.table_file);
    if (!in) throw InputError("cannot read " + o.table_file);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_growth_csv(ss.str());
  }
  require_source(o);
  if (!o.family.empty()) {
    auto f = parse_family(o.family);
    if (f.kind == "lattice-Z") return lattice_ball_table(f.params[0], radius);
    if (f.kind == "heisenberg-Z") {
      auto gens = heisenberg_generators(0);
      return cayley_ball_lazy(gens, radius);
    }
  }
  auto g = load_graph(o);
  if (o.vertex >= g.num_vertices()) throw InputError("--vertex out of range");
  return growth_table(g, o.vertex, radius);
}

FiniteGroup load_h(const Options& o, const FiniteGroup& g) {
  std::vector<GroupElement> gens;
  std::stringstream ss(o.h);
  std::string part;
  while (std::getline(ss, part, ';')) {
    if (part.find_first_not_of(" \t") == std::string::npos) continue;
    auto x = parse_element(part, g.identity());
    if (!g.contains(x)) throw InputError("H generator " + part + " is not in G");
    gens.push_back(x);
  }
  return subgroup(g, gens);
}

ElementSet parse_set(const std::string& text, const FiniteGroup& g) {
  ElementSet out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';')) {
    if (part.find_first_not_of(" \t") == std::string::npos) continue;
    auto x = parse_element(part, g.identity());
    if (!g.contains(x)) throw InputError("element " + part + " is not in the group");
    out.insert(x);
  }
  return out;
}

std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(parse_rational(part));
  if (out.empty()) throw InputError("empty list");
  return out;
}

// ---------------------------------------------------------------------------
// Output

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.output == "-") {
    out << text;
    return;
  }
  std::ofstream file(o.output);
  if (!file) throw InputError("cannot write " + o.output);
  file << text;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream file(path);
  if (!file) throw InputError("cannot write " + path);
  file << text;
}

Json rat(const Rational& q) { return to_string(q); }

Json doc(const std::string& command) {
  Json j;
  j["schema"] = 1;
  j["command"] = command;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json qi_json(const QiWitness& w) {
  Json j;
  j["C"] = rat(w.params.c);
  j["K"] = rat(w.params.k);
  j["verified"] = w.verified;
  j["min_K"] = rat(w.min_k);
  j["net_radius"] = w.net_radius;
  j["worst_pair"] = {w.worst_x, w.worst_y};
  return j;
}

Json group_gens_json(const FiniteGroup& g) {
  Json arr = Json::array();
  for (const auto& x : g.generators()) arr.push_back(x.to_string());
  return arr;
}

Json report_json(const StructureReport& r) {
  Json j;
  j["h_order"] = r.h_order;
  j["h_prime_order"] = r.h_prime.order();
  j["h_prime_generators"] = group_gens_json(r.h_prime);
  j["quotient_vertices"] = r.quotient_vertices;
  j["quotient_group_order"] = r.quotient_group_order;
  j["max_fibre_diameter"] = r.max_fibre_diameter;
  j["kernel_equal"] = r.kernel_equal;
  Json nil;
  nil["order"] = r.nilpotent.order;
  nil["index"] = r.nilpotent.index;
  nil["rank"] = r.nilpotent.rank ? Json(*r.nilpotent.rank) : Json("overflow");
  nil["step"] = r.nilpotent.step;
  j["nilpotent"] = nil;
  j["gen_set_size"] = r.gen_set_size;
  j["max_stabilizer"] = r.max_stabilizer;
  j["k"] = r.k;
  j["certified"] = {{"C", rat(r.certified.c)}, {"K", rat(r.certified.k)}};
  j["empirical_K"] = rat(r.empirical_k);
  j["chain_verified"] = r.chain_verified;
  return j;
}

// ---------------------------------------------------------------------------
// Commands

int cmd_build_graph(const Options& o, std::ostream& out) {
  emit(o, format_graph_text(load_graph(o)), out);
  return kOk;
}

int cmd_growth(const Options& o, std::ostream& out) {
  emit(o, format_growth_csv(load_table(o, o.radius)), out);
  return kOk;
}

int cmd_find_scale(const Options& o, std::ostream& out) {
  auto table = load_table(o, o.n);
  auto s = find_doubling_scale(table, o.n, parse_rational(o.d), o.q, parse_rational(o.alpha), parse_rational(o.beta));
  Json j = doc("find-scale");
  j["n"] = s.n;
  j["d"] = rat(s.d);
  j["q"] = s.q;
  j["alpha"] = rat(s.alpha);
  j["beta"] = rat(s.beta);
  j["scan"] = s.scan;
  j["m"] = s.m;
  j["ratio"] = rat(s.ratio);
  j["ratio_value"] = to_double(s.ratio);
  j["K_exponent"] = rat(s.k_exponent);
  j["K"] = s.k ? Json(to_string(*s.k)) : Json(std::to_string(s.q) + "^(" + to_string(s.k_exponent) + ")");
  emit(o, dump(j), out);
  return kOk;
}

int cmd_quotient(const Options& o, std::ostream& out) {
  auto inst = load_instance(o);
  auto h = load_h(o, inst.action.group());
  auto q = build_quotient(inst.graph, inst.action, h);
  auto diams = fibre_diameters(q);
  Json j = doc("quotient");
  j["instance"] = inst.name;
  j["vertices"] = inst.graph.num_vertices();
  j["group_order"] = inst.action.group().order();
  j["h_order"] = h.order();
  j["kernel_order"] = q.kernel().order();
  j["fibres"] = q.fibres().size();
  j["fibre_size"] = q.fibre_size();
  j["fibre_diameters"] = diams;
  j["quotient_vertices"] = q.quotient().num_vertices();
  j["quotient_edges"] = q.quotient().num_edges();
  j["quotient_group_order"] = q.quotient_group().order();
  if (!o.fibres_csv.empty()) write_file(o.fibres_csv, format_fibre_csv(q));
  if (!o.quotient_graph.empty()) write_file(o.quotient_graph, format_graph_text(q.quotient()));
  emit(o, dump(j), out);
  return kOk;
}

int cmd_qi_chain(const Options& o, std::ostream& out) {
  auto inst = load_instance(o);
  auto q = build_quotient(inst.graph, inst.action, load_h(o, inst.action.group()));
  auto r = canonical_chain(q, o.vertex);
  Json j = doc("qi-chain");
  j["instance"] = inst.name;
  j["k"] = r.k;
  j["projection"] = qi_json(r.projection);
  j["orbit_map"] = qi_json(r.orbit_map);
  j["orbit_inverse"] = qi_json(r.orbit_inverse);
  j["chain"] = qi_json(r.chain);
  j["certified"] = {{"C", rat(r.certified.c)}, {"K", rat(r.certified.k)}};
  j["composed"] = {{"C", rat(r.composed.c)}, {"K", rat(r.composed.k)}, {"verified", r.composed_verified}};
  emit(o, dump(j), out);
  return r.chain.verified ? kOk : kFalsified;
}

ElementSet ball_of(const GenSet& s, std::size_t r) {
  auto lens = word_lengths(s);
  ElementSet a;
  for (std::size_t i = 0; i < lens.size(); ++i)
    if (lens[i] <= r) a.insert(s.owner().element(i));
  return a;
}

int cmd_approx_certify(const Options& o, std::ostream& out) {
  auto s = load_gen_set(o);
  ElementSet a = o.set.empty() ? ball_of(s, o.ball) : parse_set(o.set, s.owner());
  ApproxCertificate cert;
  if (o.tripling) {
    cert = tripling_to_approx(a);
  } else {
    if (o.k.empty()) throw InputError("--k is required unless --tripling is given");
    cert = is_k_approximate(a, parse_rational(o.k));
  }
  Json j = doc("approx-certify");
  j["set_size"] = a.size();
  j["certified_set_size"] = cert.a.size();
  j["K"] = rat(cert.k);
  j["verified"] = cert.verified;
  j["method"] = cert.method;
  if (o.tripling) j["tripling"] = rat(cert.tripling);
  Json xs = Json::array();
  for (const auto& x : cert.x) xs.push_back(x.to_string());
  j["X"] = xs;
  emit(o, dump(j), out);
  return kOk;
}

ElementSet random_subset(const FiniteGroup& g, std::size_t max_size, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> size_dist(1, std::min(max_size, g.order()));
  std::uniform_int_distribution<std::size_t> pick(0, g.order() - 1);
  ElementSet out;
  const std::size_t size = size_dist(rng);
  while (out.size() < size) out.insert(g.element(pick(rng)));
  return out;
}

ElementSet random_symmetric(const FiniteGroup& g, std::size_t max_size, std::mt19937_64& rng) {
  ElementSet out{g.identity()};
  for (const auto& x : random_subset(g, max_size, rng)) {
    out.insert(x);
    out.insert(x.inverse());
  }
  return out;
}

int cmd_ruzsa_fuzz(const Options& o, std::ostream& out) {
  auto s = load_gen_set(o);
  const auto& g = s.owner();
  std::mt19937_64 rng(o.seed);
  for (std::size_t t = 0; t < o.trials; ++t) {
    auto u = random_subset(g, o.max_set_size, rng);
    auto v = random_subset(g, o.max_set_size, rng);
    auto w = random_subset(g, o.max_set_size, rng);
    check_ruzsa_triangle(u, v, w);
  }
  Rational worst_tripling_ratio = 0;
  for (std::size_t t = 0; t < o.higher_trials; ++t) {
    auto a = random_symmetric(g, o.max_set_size, rng);
    check_higher_products(a, o.mmax);
    auto cert = tripling_to_approx(a);
    worst_tripling_ratio = std::max(worst_tripling_ratio, cert.k / pow(cert.tripling, 3));
  }
  Json j = doc("ruzsa-fuzz");
  j["group_order"] = g.order();
  j["seed"] = o.seed;
  j["triangle_trials"] = o.trials;
  j["higher_product_trials"] = o.higher_trials;
  j["mmax"] = o.mmax;
  j["worst_cover_over_K_cubed"] = rat(worst_tripling_ratio);
  j["falsifications"] = 0;
  emit(o, dump(j), out);
  return kOk;
}

std::size_t worker_count(const Options& o) {
  if (o.workers > 0) return o.workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

int cmd_structure_search(const Options& o, std::ostream& out) {
  auto inst = load_instance(o);
  std::optional<std::array<double, 3>> weights;
  if (!o.weights.empty()) {
    auto w = parse_rational_list(o.weights);
    if (w.size() != 3) throw InputError("--weights takes three numbers");
    weights = std::array<double, 3>{to_double(w[0]), to_double(w[1]), to_double(w[2])};
  }
  auto result = search_H(inst.graph, inst.action, weights, worker_count(o));
  Json j = doc("structure-search");
  j["instance"] = inst.name;
  j["group_order"] = inst.action.group().order();
  Json rows = Json::array();
  std::ostringstream csv;
  csv << "candidate,h_order,h_prime_order,max_fibre_diameter,max_stabilizer,nilpotent_index,nilpotent_step,"
         "certified_K,empirical_K,pareto\n";
  for (std::size_t i = 0; i < result.candidates.size(); ++i) {
    const auto& c = result.candidates[i];
    bool pareto = std::find(result.pareto.begin(), result.pareto.end(), i) != result.pareto.end();
    Json row = report_json(c.report);
    row["candidate"] = i;
    row["h_generators"] = group_gens_json(c.h);
    row["pareto"] = pareto;
    row["idempotent"] = c.idempotent;
    rows.push_back(row);
    csv << i << ',' << c.h.order() << ',' << c.report.h_prime.order() << ',' << c.report.max_fibre_diameter << ','
        << c.report.max_stabilizer << ',' << c.report.nilpotent.index << ',' << c.report.nilpotent.step << ','
        << to_string(c.report.certified.k) << ',' << to_string(c.report.empirical_k) << ','
        << (pareto ? 1 : 0) << '\n';
  }
  j["candidates"] = rows;
  j["pareto"] = result.pareto;
  j["best"] = result.best;
  if (!o.csv.empty()) write_file(o.csv, csv.str());
  emit(o, dump(j), out);
  return kOk;
}

int cmd_cyclic_quotient(const Options& o, std::ostream& out) {
  auto s = load_gen_set(o);
  auto r = cyclic_quotient_search(s);
  Json j = doc("cyclic-quotient");
  j["group_order"] = s.owner().order();
  j["g_prime_order"] = r.g_prime.order();
  j["g_prime_generators"] = group_gens_json(r.g_prime);
  j["u_order"] = r.u.order();
  j["u_generators"] = group_gens_json(r.u);
  j["cyclic_order"] = r.cyclic_order;
  j["s_prime_size"] = r.s_prime_size;
  j["augmented"] = r.augmented;
  j["diam_quotient"] = r.diam_quotient;
  j["diam_group"] = r.diam_g;
  j["ratio"] = rat(r.ratio);
  emit(o, dump(j), out);
  return kOk;
}

int cmd_moderate_growth(const Options& o, std::ostream& out) {
  auto g = load_graph(o);
  Json j = doc("moderate-growth");
  j["vertices"] = g.num_vertices();
  Json fits = Json::array();
  for (const auto& d : parse_rational_list(o.d)) {
    auto fit = moderate_growth_fit(g, d);
    auto bound = check_mod_growth_diam(g, fit.a, d);
    Json f;
    f["d"] = rat(d);
    f["A"] = rat(fit.a);
    f["A_value"] = to_double(fit.a);
    f["exact"] = fit.exact;
    f["diameter"] = fit.diam;
    std::vector<double> slack(fit.slack.begin() + 1, fit.slack.end());
    f["slack"] = slack;
    f["diameter_bound"] = bound.bound;
    f["diameter_bound_power"] = rat(bound.bound_power);
    fits.push_back(f);
  }
  j["fits"] = fits;
  emit(o, dump(j), out);
  return kOk;
}

Json monomial_json(const PiecewiseMonomial& f) {
  Json pieces = Json::array();
  for (std::size_t i = 0; i < f.pieces(); ++i) {
    Json p;
    p["from"] = i == 0 ? Json("1") : rat(f.breakpoints[i - 1]);
    p["to"] = i + 1 < f.pieces() ? rat(f.breakpoints[i]) : Json("inf");
    p["coefficient"] = rat(f.coefficients[i]);
    p["degree"] = f.degrees[i];
    pieces.push_back(p);
  }
  return pieces;
}

int cmd_fit_profile(const Options& o, std::ostream& out) {
  std::size_t radius = o.radius;
  if (o.m_max > 0) radius = std::max<std::size_t>(radius, o.m_max * o.n);
  if (radius == 0) throw InputError("give --radius or --m-max");
  auto table = load_table(o, radius);
  std::optional<std::uint64_t> m_max;
  if (o.m_max > 0) m_max = o.m_max;
  auto fit = fit_growth_profile(table, o.n, o.pieces_max, m_max, o.penalty);
  auto scaling = pw_scaling_check(fit.f, 2, fit.f.max_degree());
  Json j = doc("fit-profile");
  j["n"] = fit.n;
  j["m_max"] = fit.ratio.size() - 1;
  j["pieces"] = monomial_json(fit.f);
  j["sse"] = fit.sse;
  j["max_deviation"] = fit.max_deviation;
  j["scaling_check_points"] = scaling.points;
  if (o.slope_to > 0) j["loglog_slope"] = loglog_slope(table, o.slope_from, o.slope_to);
  if (!o.csv.empty()) write_file(o.csv, format_profile_csv(fit));
  emit(o, dump(j), out);
  return kOk;
}

int cmd_persistence(const Options& o, std::ostream& out) {
  std::uint64_t m_hi = o.m_hi > 0 ? o.m_hi : 3 * o.n;
  auto table = load_table(o, std::max<std::size_t>({o.radius, m_hi, o.n + 1}));
  std::optional<Rational> c;
  if (!o.c.empty()) c = parse_rational(o.c);
  auto r = persistence_check(table, o.n, parse_rational(o.d), o.m_lo, m_hi, c);
  Json j = doc("persistence");
  j["n"] = r.n;
  j["d"] = rat(r.d);
  j["m_lo"] = r.m_lo;
  j["m_hi"] = r.m_hi;
  j["C_emp"] = rat(r.c_emp);
  j["C_emp_value"] = to_double(r.c_emp);
  if (r.holds) j["holds"] = *r.holds;
  j["trivial_clause_applies"] = r.trivial_clause_applies;
  emit(o, dump(j), out);
  return r.holds.value_or(true) ? kOk : kFalsified;
}

int cmd_transfer_check(const Options& o, std::ostream& out) {
  auto inst = load_instance(o);
  auto q = build_quotient(inst.graph, inst.action, load_h(o, inst.action.group()));
  std::optional<std::size_t> m_max;
  if (o.m_max > 0) m_max = o.m_max;
  auto r = growth_transfer_check(q, o.vertex, m_max);
  Json j = doc("transfer-check");
  j["instance"] = inst.name;
  j["k"] = r.k;
  j["fibre_size"] = r.fibre;
  j["stabilizer"] = r.stabilizer;
  j["gen_set_size"] = r.gen_set_size;
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"m", row.m},
                    {"S_m", row.s_m},
                    {"beta", row.beta_base},
                    {"beta_shifted", row.beta_base_shift},
                    {"beta_quotient", row.beta_quot}});
  j["rows"] = rows;
  emit(o, dump(j), out);
  return kOk;
}

int cmd_mixing(const Options& o, std::ostream& out) {
  auto g = load_graph(o);
  auto eps = parse_rational(o.epsilon);
  auto r = mixing_time_tv(g, eps, o.seed);
  Json j = doc("mixing");
  j["vertices"] = r.vertices;
  j["diameter"] = r.diameter;
  j["epsilon"] = rat(r.epsilon);
  j["t_mix"] = r.t_mix;
  j["exact"] = r.exact;
  j["second_basepoint"] = r.second_basepoint;
  j["ratio_t_mix_over_diam_squared"] = r.ratio;
  if (!o.no_spectral && r.vertices > 1) {
    auto s = spectral_gap(g, o.seed);
    j["lambda2"] = s.lambda2;
    j["spectral_gap"] = s.gap;
    j["relaxation_time"] = s.relaxation;
    j["residual"] = s.residual;
    j["iterations"] = s.iterations;
    auto band = std::ceil(s.relaxation * std::log(double(r.vertices) / to_double(eps)));
    j["sanity_band"] = band;
    j["within_sanity_band"] = double(r.t_mix) <= band;
  }
  if (!o.csv.empty()) write_file(o.csv, format_tv_csv(r));
  emit(o, dump(j), out);
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Vertex-transitive graphs of polynomial growth: quotients, growth and certificates", "vtg"};
  app.require_subcommand(1);

  std::vector<std::pair<CLI::App*, std::function<int(const Options&, std::ostream&)>>> commands;
  auto add = [&](const std::string& name, const std::string& help, auto fn) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--output", o.output, "Output path, - for standard output");
    sub->add_option("--seed", o.seed, "Seed for randomized steps");
    sub->add_option("--workers", o.workers, "Worker threads (default: available parallelism)");
    commands.emplace_back(sub, fn);
    return sub;
  };
  auto graph_source = [&](CLI::App* sub) {
    sub->add_option("--family", o.family,
                    "cycle:N, torus:AxB, hypercube:K, petersen, heisenberg-mod:P, heisenberg-Z, dihedral:N, "
                    "lattice-Z^D");
    sub->add_option("--graph", o.graph_file, "Graph file");
  };
  auto group_source = [&](CLI::App* sub) {
    sub->add_option("--group", o.group, "rotations, dihedral, aut, translations or regular");
    sub->add_option("--group-file", o.group_file, "Permutation group acting on the vertices");
  };
  auto table_source = [&](CLI::App* sub) {
    graph_source(sub);
    sub->add_option("--table", o.table_file, "Growth table CSV (r,beta)");
    sub->add_option("--vertex", o.vertex, "Basepoint");
  };

  auto* build = add("build-graph", "Write a family as a graph file", cmd_build_graph);
  graph_source(build);

  auto* growth = add("growth", "Growth table as CSV", cmd_growth);
  table_source(growth);
  growth->add_option("--radius", o.radius, "Largest radius")->required();

  auto* scale = add("find-scale", "Doubling scale search", cmd_find_scale);
  table_source(scale);
  scale->add_option("--n", o.n)->required();
  scale->add_option("--d", o.d)->required();
  scale->add_option("--q", o.q)->required();
  scale->add_option("--alpha", o.alpha)->required();
  scale->add_option("--beta", o.beta)->required();

  auto quotient_opts = [&](CLI::App* sub) {
    graph_source(sub);
    group_source(sub);
    sub->add_option("--h-gens", o.h, "Generators of H, separated by ';' (empty: trivial)");
    sub->add_option("--vertex", o.vertex, "Basepoint");
  };
  auto* quot = add("quotient", "Quotient by a normal subgroup", cmd_quotient);
  quotient_opts(quot);
  quot->add_option("--fibres-csv", o.fibres_csv, "Write the fibre map CSV here");
  quot->add_option("--quotient-graph", o.quotient_graph, "Write the quotient graph here");

  auto* chain = add("qi-chain", "Quasi-isometry chain to a Cayley graph of the quotient group", cmd_qi_chain);
  quotient_opts(chain);

  auto group_set = [&](CLI::App* sub) {
    sub->add_option("--family", o.family, "cycle:N, torus:AxB, hypercube:K, dihedral:N or heisenberg-mod:P");
    sub->add_option("--group-file", o.group_file, "Group file");
  };
  auto* approx = add("approx-certify", "Approximate group certificate", cmd_approx_certify);
  group_set(approx);
  approx->add_option("--set", o.set, "Elements of A separated by ';'");
  approx->add_option("--ball", o.ball, "Use A = S^r for this r when --set is absent");
  approx->add_option("--k", o.k, "Approximation constant K");
  approx->add_flag("--tripling", o.tripling, "Certify A^2 from the tripling constant of A");

  auto* fuzz = add("ruzsa-fuzz", "Seeded random checks of the sumset inequalities", cmd_ruzsa_fuzz);
  group_set(fuzz);
  fuzz->add_option("--trials", o.trials, "Random triples");
  fuzz->add_option("--higher-trials", o.higher_trials, "Random symmetric sets");
  fuzz->add_option("--mmax", o.mmax, "Largest product power");
  fuzz->add_option("--max-set-size", o.max_set_size, "Largest random set before symmetrisation");

  auto* search = add("structure-search", "Certify every normal subgroup as H", cmd_structure_search);
  graph_source(search);
  group_source(search);
  search->add_option("--weights", o.weights, "Weights for stabilizer, fibre diameter, nilpotent index");
  search->add_option("--csv", o.csv, "Write the candidate table here");

  auto* cyclic = add("cyclic-quotient", "Largest-diameter cyclic section", cmd_cyclic_quotient);
  group_set(cyclic);

  auto* moderate = add("moderate-growth", "Moderate growth fit and diameter bound", cmd_moderate_growth);
  graph_source(moderate);
  moderate->add_option("--d", o.d, "Exponent, or a comma-separated grid");

  auto* profile = add("fit-profile", "Piecewise-monomial growth profile", cmd_fit_profile);
  table_source(profile);
  profile->add_option("--n", o.n)->required();
  profile->add_option("--radius", o.radius);
  profile->add_option("--m-max", o.m_max);
  profile->add_option("--pieces-max", o.pieces_max);
  profile->add_option("--penalty", o.penalty);
  profile->add_option("--slope-from", o.slope_from);
  profile->add_option("--slope-to", o.slope_to);
  profile->add_option("--csv", o.csv, "Write m,beta_ratio,f_fit here");

  auto* persist = add("persistence", "Growth persistence constant", cmd_persistence);
  table_source(persist);
  persist->add_option("--n", o.n)->required();
  persist->add_option("--d", o.d);
  persist->add_option("--m-lo", o.m_lo);
  persist->add_option("--m-hi", o.m_hi);
  persist->add_option("--c", o.c);
  persist->add_option("--radius", o.radius);

  auto* transfer = add("transfer-check", "Growth of the quotient against the base", cmd_transfer_check);
  quotient_opts(transfer);
  transfer->add_option("--m-max", o.m_max);

  auto* mixing = add("mixing", "Lazy random walk mixing time", cmd_mixing);
  graph_source(mixing);
  mixing->add_option("--epsilon", o.epsilon);
  mixing->add_option("--csv", o.csv, "Write t,tv here");
  mixing->add_flag("--no-spectral", o.no_spectral);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    for (auto& [sub, fn] : commands)
      if (sub->parsed()) return fn(o, out);
    return kBadInput;
  } catch (const FalsificationError& e) {
    err << "falsified: " << e.what() << '\n';
    return kFalsified;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << '\n';
    return kResource;
  } catch (const InputError& e) {
    err << "bad input: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace vtg::cli
