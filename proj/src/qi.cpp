#include "vtg/qi.hpp"

#include "vtg/errors.hpp"

#include <algorithm>
#include <limits>

namespace vtg {

MetricSpace::MetricSpace(std::size_t n, std::vector<std::uint64_t> dist) : n_(n), dist_(std::move(dist)) {
  if (dist_.size() != n_ * n_) throw InputError("distance matrix has the wrong size");
}

MetricSpace MetricSpace::of_graph(const Graph& g) {
  auto d = all_pairs_distances(g);
  std::vector<std::uint64_t> dist(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] == kUnreachable) throw InputError("metric of a disconnected graph");
    dist[i] = d[i];
  }
  return MetricSpace(g.num_vertices(), std::move(dist));
}

MetricSpace MetricSpace::of_quotient_metric(const QuotientMetric& qm) {
  const std::size_t n = qm.num_fibres();
  std::vector<std::uint64_t> dist(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      dist[i * n + j] = qm.distance(i, j);
      if (dist[i * n + j] == QuotientMetric::kInfinite) throw InputError("quotient metric is not finite");
    }
  return MetricSpace(n, std::move(dist));
}

QiParams compose_params(const QiParams& first, const QiParams& second) {
  return QiParams{first.c * second.c, second.c * first.k + 2 * second.k};
}

namespace {

std::int64_t small_int(const BigInt& z) {
  if (z > (std::int64_t{1} << 31)) throw InputError("QI constant has too large a numerator or denominator");
  return z.convert_to<std::int64_t>();
}

}  // namespace

QiWitness verify_qi(std::vector<std::size_t> map, std::shared_ptr<const MetricSpace> source,
                    std::shared_ptr<const MetricSpace> target, const QiParams& params) {
  if (params.c < 1 || params.k < 0) throw InputError("QI parameters need C >= 1 and K >= 0");
  if (map.size() != source->size()) throw InputError("map is not total on the source");
  for (auto y : map)
    if (y >= target->size()) throw InputError("map leaves the target space");
  QiWitness w;
  w.source = std::move(source);
  w.target = std::move(target);
  w.map = std::move(map);
  w.params = params;

  // C = p/q. d' >= d/C - K  <=>  K >= (dq - d'p)/p ; d' <= Cd + K  <=>  K >= (d'q - dp)/q.
  const std::int64_t p = small_int(numerator(params.c));
  const std::int64_t q = small_int(denominator(params.c));
  const auto& src = *w.source;
  const auto& tgt = *w.target;
  __int128 best_lower = 0, best_upper = 0;
  std::size_t lower_x = 0, lower_y = 0, upper_x = 0, upper_y = 0;
  for (std::size_t x = 0; x < src.size(); ++x) {
    for (std::size_t y = x + 1; y < src.size(); ++y) {
      __int128 d = src(x, y);
      __int128 dd = tgt(w.map[x], w.map[y]);
      __int128 lower = d * q - dd * p;
      __int128 upper = dd * q - d * p;
      if (lower > best_lower) {
        best_lower = lower;
        lower_x = x;
        lower_y = y;
      }
      if (upper > best_upper) {
        best_upper = upper;
        upper_x = x;
        upper_y = y;
      }
    }
  }
  std::vector<bool> hit(tgt.size(), false);
  for (auto y : w.map) hit[y] = true;
  std::vector<std::size_t> image;
  for (std::size_t y = 0; y < tgt.size(); ++y)
    if (hit[y]) image.push_back(y);
  for (std::size_t y = 0; y < tgt.size(); ++y) {
    std::uint64_t nearest = std::numeric_limits<std::uint64_t>::max();
    for (auto z : image) nearest = std::min(nearest, tgt(y, z));
    if (!image.empty()) w.net_radius = std::max(w.net_radius, nearest);
  }
  Rational lower_k(BigInt(static_cast<long long>(best_lower)), BigInt(p));
  Rational upper_k(BigInt(static_cast<long long>(best_upper)), BigInt(q));
  w.min_k = Rational(w.net_radius);
  if (lower_k > w.min_k) {
    w.min_k = lower_k;
    w.worst_x = lower_x;
    w.worst_y = lower_y;
  }
  if (upper_k > w.min_k) {
    w.min_k = upper_k;
    w.worst_x = upper_x;
    w.worst_y = upper_y;
  }
  w.verified = w.min_k <= params.k;
  return w;
}

QiWitness invert_qi(const QiWitness& w) {
  const auto& src = *w.source;
  const auto& tgt = *w.target;
  if (!w.verified) throw InputError("invert_qi needs a verified witness");
  // Smallest preimage of each image point.
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> preimage(tgt.size(), kNone);
  for (std::size_t x = 0; x < src.size(); ++x)
    if (preimage[w.map[x]] == kNone) preimage[w.map[x]] = x;
  std::vector<std::size_t> inverse(tgt.size());
  for (std::size_t y = 0; y < tgt.size(); ++y) {
    std::size_t best = kNone;
    for (std::size_t z = 0; z < tgt.size(); ++z) {
      if (preimage[z] == kNone) continue;
      if (best == kNone || tgt(y, z) < tgt(y, best)) best = z;
    }
    if (best == kNone) throw InputError("invert_qi: empty image");
    inverse[y] = preimage[best];
  }
  QiParams params{w.params.c, 3 * w.params.c * w.params.k};
  return verify_qi(std::move(inverse), w.target, w.source, params);
}

QiWitness compose_qi(const QiWitness& f, const QiWitness& g) {
  if (f.target->size() != g.source->size()) throw InputError("compose_qi: spaces do not match");
  std::vector<std::size_t> map(f.map.size());
  for (std::size_t x = 0; x < map.size(); ++x) map[x] = g.map[f.map[x]];
  return verify_qi(std::move(map), f.source, g.target, compose_params(f.params, g.params));
}

ChainReport canonical_chain(const QuotientSystem& q, Vertex e) {
  ChainReport r;
  auto s = ball_gen_set(q.base(), q.action(), e);
  r.k = word_radius(q.h(), s);
  auto base = std::make_shared<const MetricSpace>(MetricSpace::of_graph(q.base()));
  auto quot = std::make_shared<const MetricSpace>(MetricSpace::of_graph(q.quotient()));
  r.projection = verify_qi(q.fibre_map(), base, quot, QiParams{1, r.k});
  if (!r.projection.verified) throw FalsificationError("quotient projection is not a (1, k)-quasi-isometry");

  const auto& qg = q.quotient_group();
  const std::size_t he = q.fibre_of(e);
  auto qs = ball_gen_set(q.quotient(), q.quotient_action(), he);
  auto cayley = std::make_shared<const MetricSpace>(MetricSpace::of_graph(cayley_graph(qg, qs)));
  std::vector<std::size_t> orbit(qg.order());
  for (std::size_t i = 0; i < qg.order(); ++i) orbit[i] = qg.element(i).permutation()[he];
  r.orbit_map = verify_qi(std::move(orbit), cayley, quot, QiParams{1, 1});
  if (!r.orbit_map.verified) throw FalsificationError("orbit map is not a (1, 1)-quasi-isometry");
  r.orbit_inverse = invert_qi(r.orbit_map);
  if (!r.orbit_inverse.verified) throw FalsificationError("inverse orbit map fails (C, 3CK)");

  r.certified = QiParams{1, 3 + 2 * Rational(r.k)};
  r.composed = compose_params(r.projection.params, r.orbit_inverse.params);
  auto chain = compose_qi(r.projection, r.orbit_inverse);
  r.composed_verified = chain.verified;
  r.chain = verify_qi(chain.map, chain.source, chain.target, r.certified);
  return r;
}

}  // namespace vtg
