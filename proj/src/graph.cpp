#include "vtg/graph.hpp"

#include "vtg/errors.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>

namespace vtg {

Graph Graph::from_edges(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edges,
                        bool merge_duplicates) {
  Graph g(n);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw InputError("edge endpoint out of range");
    if (u == v) throw InputError("graph has a loop at vertex " + std::to_string(u));
    g.adj_[u].push_back(static_cast<std::uint32_t>(v));
    g.adj_[v].push_back(static_cast<std::uint32_t>(u));
  }
  for (auto& nbrs : g.adj_) {
    std::sort(nbrs.begin(), nbrs.end());
    auto last = std::unique(nbrs.begin(), nbrs.end());
    if (last != nbrs.end() && !merge_duplicates) throw InputError("graph has a repeated edge");
    nbrs.erase(last, nbrs.end());
  }
  return g;
}

std::size_t Graph::num_edges() const {
  std::size_t total = 0;
  for (const auto& nbrs : adj_) total += nbrs.size();
  return total / 2;
}

bool Graph::adjacent(Vertex u, Vertex v) const {
  const auto& nbrs = adj_[u];
  return std::binary_search(nbrs.begin(), nbrs.end(), static_cast<std::uint32_t>(v));
}

std::optional<std::size_t> Graph::regular_degree() const {
  if (adj_.empty()) return std::nullopt;
  std::size_t d = adj_[0].size();
  for (const auto& nbrs : adj_)
    if (nbrs.size() != d) return std::nullopt;
  return d;
}

std::vector<std::pair<Vertex, Vertex>> Graph::edges() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  for (std::size_t u = 0; u < adj_.size(); ++u)
    for (auto v : adj_[u])
      if (u < v) out.emplace_back(u, v);
  return out;
}

void GrowthTable::validate() const {
  if (beta.empty() || beta[0] != 1) throw InputError("growth table must start with beta(0) = 1");
  for (std::size_t r = 1; r < beta.size(); ++r)
    if (beta[r] < beta[r - 1]) throw InputError("growth table is not nondecreasing");
}

void GrowthTable::validate_graph_table() const {
  validate();
  bool stalled = false;
  for (std::size_t r = 1; r < beta.size(); ++r) {
    if (beta[r] == beta[r - 1]) stalled = true;
    else if (stalled) throw FalsificationError("growth resumed after stalling");
  }
}

std::vector<std::uint32_t> distances_from(const Graph& g, Vertex x) {
  std::vector<std::uint32_t> dist(g.num_vertices(), kUnreachable);
  std::vector<std::uint32_t> queue;
  queue.reserve(g.num_vertices());
  dist[x] = 0;
  queue.push_back(static_cast<std::uint32_t>(x));
  for (std::size_t i = 0; i < queue.size(); ++i) {
    auto u = queue[i];
    for (auto v : g.neighbors(u)) {
      if (dist[v] == kUnreachable) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

std::vector<std::uint32_t> all_pairs_distances(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::uint32_t> out(n * n);
  for (std::size_t x = 0; x < n; ++x) {
    auto row = distances_from(g, x);
    std::copy(row.begin(), row.end(), out.begin() + static_cast<std::ptrdiff_t>(x * n));
  }
  return out;
}

bool is_connected(const Graph& g) {
  if (g.num_vertices() == 0) return true;
  auto dist = distances_from(g, 0);
  return std::find(dist.begin(), dist.end(), kUnreachable) == dist.end();
}

std::size_t eccentricity(const Graph& g, Vertex x) {
  auto dist = distances_from(g, x);
  std::uint32_t best = 0;
  for (auto d : dist) {
    if (d == kUnreachable) throw InputError("graph is disconnected");
    best = std::max(best, d);
  }
  return best;
}

std::size_t diameter(const Graph& g) {
  std::size_t best = 0;
  for (std::size_t x = 0; x < g.num_vertices(); ++x) best = std::max(best, eccentricity(g, x));
  return best;
}

std::vector<Vertex> ball(const Graph& g, Vertex x, std::size_t r) {
  if (x >= g.num_vertices()) throw InputError("ball: vertex out of range");
  auto dist = distances_from(g, x);
  std::vector<Vertex> out;
  for (std::size_t v = 0; v < dist.size(); ++v)
    if (dist[v] != kUnreachable && dist[v] <= r) out.push_back(v);
  return out;
}

GrowthTable growth_table(const Graph& g, Vertex x, std::size_t radius) {
  if (x >= g.num_vertices()) throw InputError("growth_table: vertex out of range");
  auto dist = distances_from(g, x);
  GrowthTable t;
  t.beta.assign(radius + 1, 0);
  std::size_t reachable = 0;
  for (auto d : dist) {
    if (d == kUnreachable) continue;
    ++reachable;
    if (d <= radius) ++t.beta[d];
  }
  for (std::size_t r = 1; r <= radius; ++r) t.beta[r] += t.beta[r - 1];
  t.exhausted = t.beta[radius] == reachable;
  return t;
}

Graph cayley_graph(const FiniteGroup& g, const GenSet& s) {
  if (g.order() != s.owner().order()) throw InputError("generating set belongs to another group");
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (std::size_t i = 0; i < g.order(); ++i) {
    for (const auto& x : s.elems()) {
      auto j = g.index_of(g.element(i) * x);
      if (!j) throw InputError("generator outside the group");
      if (*j > i) edges.emplace_back(i, *j);
    }
  }
  return Graph::from_edges(g.order(), edges, true);
}

GrowthTable cayley_ball_lazy(std::span<const GroupElement> gens, std::size_t radius, std::size_t cap) {
  if (gens.empty()) throw InputError("cayley_ball_lazy: no generators");
  ElementSet s(gens);
  for (const auto& x : s)
    if (!s.contains(x.inverse())) throw InputError("cayley_ball_lazy: generators not closed under inversion");
  GrowthTable t;
  ElementSet visited;
  visited.insert(gens[0].identity());
  t.beta.push_back(1);
  std::size_t level_begin = 0;
  for (std::size_t r = 1; r <= radius; ++r) {
    std::size_t level_end = visited.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (const auto& x : s) {
        visited.insert(visited[i] * x);
        if (visited.size() > cap) throw ResourceError("cayley_ball_lazy: ball exceeds cap");
      }
    }
    level_begin = level_end;
    t.beta.push_back(visited.size());
    if (visited.size() == level_end) t.exhausted = true;
  }
  if (radius == 0) {
    // Exhausted iff every generator is trivial.
    t.exhausted = std::all_of(s.begin(), s.end(), [](const GroupElement& x) { return x.is_identity(); });
  }
  return t;
}

bool is_automorphism(const Graph& g, const Permutation& p) {
  if (p.degree() != g.num_vertices()) return false;
  for (std::size_t u = 0; u < g.num_vertices(); ++u) {
    if (g.degree(u) != g.degree(p[u])) return false;
    for (auto v : g.neighbors(u))
      if (!g.adjacent(p[u], p[v])) return false;
  }
  return true;
}

namespace {

// Iterated distance-profile refinement: a vertex's new colour is its old
// colour together with the multiset of (colour, distance) over all vertices.
std::vector<std::size_t> refined_colours(const Graph& g, const std::vector<std::uint32_t>& dist) {
  const std::size_t n = g.num_vertices();
  std::vector<std::size_t> colour(n);
  for (std::size_t v = 0; v < n; ++v) colour[v] = g.degree(v);
  std::size_t classes = 0;
  while (true) {
    std::map<std::pair<std::size_t, std::vector<std::pair<std::size_t, std::uint32_t>>>, std::size_t> ids;
    std::vector<std::size_t> next(n);
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<std::pair<std::size_t, std::uint32_t>> profile(n);
      for (std::size_t u = 0; u < n; ++u) profile[u] = {colour[u], dist[v * n + u]};
      std::sort(profile.begin(), profile.end());
      auto [it, inserted] = ids.try_emplace({colour[v], std::move(profile)}, ids.size());
      next[v] = it->second;
    }
    colour = std::move(next);
    if (ids.size() == classes) break;
    classes = ids.size();
  }
  return colour;
}

}  // namespace

FiniteGroup automorphism_group(const Graph& g, std::size_t vertex_cap, std::size_t order_cap) {
  const std::size_t n = g.num_vertices();
  if (n > vertex_cap)
    throw ResourceError("automorphism_group: " + std::to_string(n) + " vertices exceeds cap of " +
                        std::to_string(vertex_cap));
  GroupElement identity(Permutation::identity(n));
  if (n == 0) return FiniteGroup::generate(identity, {});
  auto dist = all_pairs_distances(g);
  auto colour = refined_colours(g, dist);

  // Map vertices in order of distance from vertex 0 so that the distance
  // constraints to already-mapped vertices prune early.
  std::vector<Vertex> order(n);
  for (std::size_t v = 0; v < n; ++v) order[v] = v;
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return dist[a] < dist[b]; });

  // An automorphism is exactly a distance-preserving bijection, so partial
  // maps are extended only by distance-consistent images.
  ElementSet found;
  std::vector<std::uint32_t> image(n);
  std::vector<bool> used(n, false);
  std::vector<std::size_t> cursor(n + 1, 0);
  std::size_t depth = 0;
  while (true) {
    if (depth == n) {
      std::vector<std::uint32_t> images(n);
      for (std::size_t i = 0; i < n; ++i) images[order[i]] = image[i];
      Permutation p(std::move(images));
      if (!is_automorphism(g, p)) throw FalsificationError("automorphism search produced a non-automorphism");
      found.insert(GroupElement(std::move(p)));
      if (found.size() > order_cap) throw ResourceError("automorphism group exceeds cap");
      --depth;
      used[image[depth]] = false;
      continue;
    }
    const Vertex v = order[depth];
    bool advanced = false;
    for (std::size_t& w = cursor[depth]; w < n; ++w) {
      if (used[w] || colour[w] != colour[v]) continue;
      bool ok = true;
      for (std::size_t j = 0; j < depth && ok; ++j)
        ok = dist[w * n + image[j]] == dist[v * n + order[j]];
      if (!ok) continue;
      image[depth] = static_cast<std::uint32_t>(w);
      used[w] = true;
      ++w;
      advanced = true;
      break;
    }
    if (advanced) {
      ++depth;
      cursor[depth] = 0;
      continue;
    }
    if (depth == 0) break;
    --depth;
    used[image[depth]] = false;
  }
  return FiniteGroup::from_elements(identity, found);
}

void check_acts_by_automorphisms(const Graph& g, const Action& act) {
  if (act.degree() != g.num_vertices()) throw InputError("action degree differs from vertex count");
  for (const auto& s : act.group().generators())
    if (!is_automorphism(g, act.as_permutation(s)))
      throw InputError("group element " + s.to_string() + " is not a graph automorphism");
}

bool is_vertex_transitive(const Graph& g) {
  if (g.num_vertices() <= 1) return true;
  return is_transitive(Action::natural(automorphism_group(g)));
}

bool is_vertex_transitive(const Graph& g, const Action& act) {
  check_acts_by_automorphisms(g, act);
  return is_transitive(act);
}

GenSet ball_gen_set(const Graph& g, const Action& act, Vertex e) {
  check_acts_by_automorphisms(g, act);
  if (e >= g.num_vertices()) throw InputError("ball_gen_set: basepoint out of range");
  if (!is_transitive(act)) throw InputError("ball_gen_set: group is not transitive");
  auto dist = distances_from(g, e);
  const auto& group = act.group();
  ElementSet s;
  for (const auto& x : group.elements())
    if (dist[act.apply(x, e)] <= 1) s.insert(x);
  GenSet out(group, std::move(s));
  // g in S^n iff g(e) in B(e, n), for all n >= 1.
  auto len = word_lengths(out);
  for (std::size_t i = 0; i < group.order(); ++i) {
    std::size_t d = dist[act.apply(group.element(i), e)];
    if (std::max<std::size_t>(len[i], 1) != std::max<std::size_t>(d, 1))
      throw FalsificationError("S^n differs from the elements moving e into B(e, n)");
  }
  return out;
}

namespace {

std::vector<std::string> non_comment_lines(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(line);
  }
  return out;
}

}  // namespace

Graph parse_graph_text(const std::string& text) {
  auto lines = non_comment_lines(text);
  if (lines.empty()) throw InputError("graph file is empty");
  long long n = -1, m = -1;
  {
    std::istringstream head(lines[0]);
    std::string extra;
    if (!(head >> n >> m) || (head >> extra) || n < 0 || m < 0)
      throw InputError("graph header must be \"n m\"");
  }
  if (lines.size() != static_cast<std::size_t>(m) + 1)
    throw InputError("graph file declares " + std::to_string(m) + " edges but has " +
                     std::to_string(lines.size() - 1));
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::istringstream row(lines[i]);
    long long u = -1, v = -1;
    std::string extra;
    if (!(row >> u >> v) || (row >> extra) || u < 0 || v < 0)
      throw InputError("malformed edge line: " + lines[i]);
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  return Graph::from_edges(static_cast<std::size_t>(n), edges);
}

Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_graph_text(buf.str());
}

std::string format_graph_text(const Graph& g) {
  std::string out = std::to_string(g.num_vertices()) + " " + std::to_string(g.num_edges()) + "\n";
  for (auto [u, v] : g.edges()) out += std::to_string(u) + " " + std::to_string(v) + "\n";
  return out;
}

std::string format_growth_csv(const GrowthTable& t) {
  std::string out = "r,beta\n";
  for (std::size_t r = 0; r < t.beta.size(); ++r)
    out += std::to_string(r) + "," + std::to_string(t.beta[r]) + "\n";
  return out;
}

GrowthTable parse_growth_csv(const std::string& text) {
  auto lines = non_comment_lines(text);
  if (lines.empty()) throw InputError("growth CSV is empty");
  auto header = lines[0];
  header.erase(std::remove_if(header.begin(), header.end(), ::isspace), header.end());
  if (header != "r,beta") throw InputError("growth CSV header must be \"r,beta\"");
  GrowthTable t;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto comma = lines[i].find(',');
    if (comma == std::string::npos) throw InputError("malformed growth row: " + lines[i]);
    try {
      auto r = std::stoull(lines[i].substr(0, comma));
      auto b = std::stoull(lines[i].substr(comma + 1));
      if (r != t.beta.size()) throw InputError("growth CSV radii must be 0, 1, 2, ...");
      t.beta.push_back(b);
    } catch (const std::logic_error&) {
      throw InputError("malformed growth row: " + lines[i]);
    }
  }
  t.validate();
  return t;
}

}  // namespace vtg
