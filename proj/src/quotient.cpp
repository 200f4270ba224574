#include "vtg/quotient.hpp"

#include "vtg/errors.hpp"

#include <algorithm>
#include <set>

namespace vtg {

std::size_t QuotientSystem::fibre_size() const { return fibres_.empty() ? 0 : fibres_[0].size(); }

Permutation QuotientSystem::phi(const GroupElement& g) const {
  std::vector<std::uint32_t> images(fibres_.size());
  for (std::size_t f = 0; f < fibres_.size(); ++f)
    images[f] = static_cast<std::uint32_t>(fibre_of_[action_.apply(g, fibres_[f][0])]);
  return Permutation(std::move(images));
}

QuotientSystem build_quotient(const Graph& base, const Action& g, const FiniteGroup& h) {
  check_acts_by_automorphisms(base, g);
  if (!h.is_subgroup_of(g.group())) throw InputError("H is not a subgroup of G");
  if (!h.is_normal_in(g.group())) throw InputError("H is not normalized by G");

  QuotientSystem q(base, g, h);
  q.fibres_ = orbits(g.restrict_to(h));
  q.fibre_of_.assign(base.num_vertices(), 0);
  for (std::size_t f = 0; f < q.fibres_.size(); ++f)
    for (auto v : q.fibres_[f]) q.fibre_of_[v] = f;

  std::vector<std::pair<Vertex, Vertex>> edges;
  for (auto [u, v] : base.edges()) {
    auto fu = q.fibre_of_[u], fv = q.fibre_of_[v];
    if (fu != fv) edges.emplace_back(std::min(fu, fv), std::max(fu, fv));
  }
  q.quotient_ = Graph::from_edges(q.fibres_.size(), edges, true);

  // φ is well defined (g H(x) = H(g x)) and lands in Aut(Γ/H).
  std::vector<GroupElement> images;
  for (const auto& s : g.group().generators()) {
    Permutation p = q.phi(s);
    for (std::size_t x = 0; x < base.num_vertices(); ++x)
      if (q.fibre_of_[g.apply(s, x)] != p[q.fibre_of_[x]])
        throw FalsificationError("induced action on fibres is not well defined");
    if (!is_automorphism(q.quotient_, p)) throw FalsificationError("induced map is not an automorphism of Γ/H");
    images.emplace_back(std::move(p));
  }
  q.quotient_group_ = FiniteGroup::generate(GroupElement(Permutation::identity(q.fibres_.size())), images);

  ElementSet kernel;
  for (const auto& x : g.group().elements())
    if (q.phi(x).is_identity()) kernel.insert(x);
  q.kernel_ = FiniteGroup::from_elements(g.group().identity(), kernel);
  if (!h.is_subgroup_of(q.kernel_)) throw FalsificationError("H is not contained in the kernel H'");
  if (orbits(g.restrict_to(q.kernel_)) != q.fibres_)
    throw FalsificationError("H' orbits differ from H orbits");
  if (g.group().order() != q.kernel_.order() * q.quotient_group_.order())
    throw FalsificationError("|G_{Γ/H}| differs from [G:H']");
  return q;
}

std::vector<std::size_t> fibre_diameters(const QuotientSystem& q) {
  const auto& base = q.base();
  std::vector<std::size_t> out;
  std::vector<std::vector<std::uint32_t>> dist_rows(base.num_vertices());
  for (const auto& fibre : q.fibres()) {
    std::size_t diam = 0;
    for (auto x : fibre) {
      dist_rows[x] = distances_from(base, x);
      for (auto y : fibre) {
        if (dist_rows[x][y] == kUnreachable) throw InputError("fibre_diameters: base graph is disconnected");
        diam = std::max<std::size_t>(diam, dist_rows[x][y]);
      }
    }
    out.push_back(diam);
  }
  const auto& act = q.action();
  if (is_transitive(act)) {
    // An element carrying the first fibre onto each other one restricts to
    // an isometry between them.
    const auto& first = q.fibres()[0];
    for (std::size_t f = 0; f < q.fibres().size(); ++f) {
      const auto& target = q.fibres()[f];
      auto carriers = transporter(act, first[0], target[0]);
      const auto& g = carriers.front();
      std::vector<Vertex> mapped;
      for (auto x : first) mapped.push_back(act.apply(g, x));
      std::sort(mapped.begin(), mapped.end());
      if (mapped != target) throw FalsificationError("G does not carry fibres onto fibres");
      for (auto x : first)
        for (auto y : first)
          if (dist_rows[x][y] != dist_rows[act.apply(g, x)][act.apply(g, y)])
            throw FalsificationError("fibres are not isometric");
      if (out[f] != out[0]) throw FalsificationError("fibre diameters differ under a transitive group");
    }
  }
  return out;
}

std::optional<std::size_t> QuotientMetric::fibre_of(Vertex x) const {
  if (x >= fibre_index_.size() || fibre_index_[x] == static_cast<std::size_t>(-1)) return std::nullopt;
  return fibre_index_[x];
}

std::uint64_t QuotientMetric::vertex_distance(Vertex x, Vertex y) const {
  auto fx = fibre_of(x), fy = fibre_of(y);
  if (!fx || !fy) throw InputError("vertex outside X");
  return distance(*fx, *fy);
}

QuotientMetric quotient_metric(const Graph& g, const Action& h, std::span<const Vertex> x) {
  if (h.degree() != g.num_vertices()) throw InputError("quotient_metric: action degree mismatch");
  QuotientMetric qm;
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  qm.fibre_index_.assign(g.num_vertices(), kNone);
  std::vector<bool> in_x(g.num_vertices(), false);
  for (auto v : x) {
    if (v >= g.num_vertices()) throw InputError("quotient_metric: vertex out of range");
    in_x[v] = true;
  }
  std::vector<Vertex> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (auto v : sorted) {
    if (qm.fibre_index_[v] != kNone) continue;
    auto fibre = orbit(h, v);
    for (auto y : fibre) {
      if (!in_x[y]) throw InputError("X is not a union of H-fibres");
      qm.fibre_index_[y] = qm.fibres_.size();
    }
    qm.fibres_.push_back(std::move(fibre));
  }
  // One leg between two fibres costs the least d_Γ between their members.
  const std::size_t k = qm.fibres_.size();
  qm.dist_.assign(k * k, QuotientMetric::kInfinite);
  for (auto v : sorted) {
    auto d = distances_from(g, v);
    std::size_t fv = qm.fibre_index_[v];
    for (auto w : sorted) {
      if (d[w] == kUnreachable) continue;
      auto& cell = qm.dist_[fv * k + qm.fibre_index_[w]];
      cell = std::min<std::uint64_t>(cell, d[w]);
    }
  }
  for (std::size_t i = 0; i < k; ++i) qm.dist_[i * k + i] = 0;
  for (std::size_t m = 0; m < k; ++m)
    for (std::size_t i = 0; i < k; ++i) {
      if (qm.dist_[i * k + m] == QuotientMetric::kInfinite) continue;
      for (std::size_t j = 0; j < k; ++j) {
        if (qm.dist_[m * k + j] == QuotientMetric::kInfinite) continue;
        qm.dist_[i * k + j] = std::min(qm.dist_[i * k + j], qm.dist_[i * k + m] + qm.dist_[m * k + j]);
      }
    }
  return qm;
}

BallPreimageReport check_ball_preimage(const QuotientSystem& q, Vertex e, std::size_t m,
                                       std::optional<std::size_t> k) {
  BallPreimageReport r;
  r.m = m;
  if (!k) {
    auto s = ball_gen_set(q.base(), q.action(), e);
    k = word_radius(q.h(), s);
  }
  r.k = *k;
  auto dist = distances_from(q.base(), e);
  auto qball = ball(q.quotient(), q.fibre_of(e), m);
  std::vector<bool> in_preimage(q.base().num_vertices(), false);
  for (auto f : qball)
    for (auto v : q.fibres()[f]) {
      in_preimage[v] = true;
      ++r.preimage_size;
      r.k_tight = std::max<std::size_t>(r.k_tight, dist[v] > m ? dist[v] - m : 0);
    }
  for (std::size_t v = 0; v < dist.size(); ++v) {
    if (dist[v] > m) continue;
    ++r.ball_size;
    if (!in_preimage[v]) throw FalsificationError("B(e, m) is not inside the preimage of the quotient ball");
  }
  if (r.k_tight > r.k) throw FalsificationError("preimage of the quotient ball escapes B(e, m + k)");
  return r;
}

GenSetImageReport quotient_gen_set_image(const QuotientSystem& q, const GenSet& s, std::size_t n, Vertex e) {
  const auto& g = q.group();
  if (!s.owner().same_elements(g)) throw InputError("generating set is not for the acting group");
  GenSetImageReport r;
  r.n = n;
  const std::size_t he = q.fibre_of(e);
  // Word lengths are indexed by s.owner(); translate through the element.
  auto len = word_lengths(s);
  const auto& owner = s.owner();
  for (std::size_t i = 0; i < owner.order(); ++i)
    if (len[i] <= n) r.image.insert(GroupElement(q.phi(owner.element(i))));

  ElementSet stab_image;
  for (const auto& x : g.elements())
    if (q.action().apply(x, e) == e) stab_image.insert(GroupElement(q.phi(x)));
  ElementSet quotient_stab;
  auto qdist = distances_from(q.quotient(), he);
  ElementSet direct;
  for (const auto& gamma : q.quotient_group().elements()) {
    auto target = gamma.permutation()[he];
    if (target == he) quotient_stab.insert(gamma);
    if (qdist[target] <= n) direct.insert(gamma);
  }
  if (!stab_image.same_elements(quotient_stab))
    throw FalsificationError("φ(G_e) differs from the stabilizer of H(e) in G_{Γ/H}");
  r.stabilizer_image_size = stab_image.size();
  if (n >= 1 && !r.image.same_elements(direct))
    throw FalsificationError("φ(S^n) differs from the elements moving H(e) at most n");
  return r;
}

KernelEnlargementReport check_kernel_enlargement(const QuotientSystem& q, const GenSet& s) {
  KernelEnlargementReport r;
  r.h_order = q.h().order();
  r.kernel_order = q.kernel().order();
  auto q2 = build_quotient(q.base(), q.action(), q.kernel());
  if (q2.fibres() != q.fibres() || !(q2.quotient() == q.quotient()))
    throw FalsificationError("Γ/H' differs from Γ/H");
  if (!q2.quotient_group().same_elements(q.quotient_group()))
    throw FalsificationError("G_{Γ/H'} differs from G_{Γ/H}");
  if (!q2.kernel().same_elements(q.kernel())) throw FalsificationError("kernel of the H' quotient is not H'");
  if (q.group().order() / q.kernel().order() != q2.quotient_group().order())
    throw FalsificationError("G_{Γ/H'} is not isomorphic to G/H'");
  // φ is injective on G/H': distinct cosets of H' have distinct images.
  std::set<std::vector<std::uint32_t>> seen;
  auto ids = left_coset_ids(q.group(), q.kernel());
  std::vector<bool> done(q.group().order() / q.kernel().order(), false);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (done[ids[i]]) continue;
    done[ids[i]] = true;
    auto p = q2.phi(q.group().element(i));
    if (!seen.insert({p.images().begin(), p.images().end()}).second)
      throw FalsificationError("G/H' -> G_{Γ/H'} is not injective");
  }
  r.n = word_radius(q.h(), s);
  r.kernel_radius = word_radius(q.kernel(), s);
  if (r.kernel_radius > std::max<std::size_t>(r.n, 1))
    throw FalsificationError("H ⊆ S^n but H' ⊄ S^n");
  return r;
}

std::string format_fibre_csv(const QuotientSystem& q) {
  std::string out = "vertex,fibre\n";
  for (std::size_t v = 0; v < q.base().num_vertices(); ++v)
    out += std::to_string(v) + "," + std::to_string(q.fibre_of(v)) + "\n";
  return out;
}

}  // namespace vtg
