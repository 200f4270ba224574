#include "vtg/growth.hpp"

#include "vtg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

namespace vtg {

std::uint64_t table_value(const GrowthTable& t, std::uint64_t r) {
  if (t.beta.empty()) throw InputError("empty growth table");
  if (r <= t.radius()) return t.beta[r];
  if (t.exhausted) return t.beta.back();
  throw InputError("growth table does not cover radius " + std::to_string(r));
}

GrowthTable lattice_ball_table(std::size_t d, std::size_t radius) {
  if (d == 0) throw InputError("lattice dimension must be positive");
  GrowthTable t;
  const BigInt limit = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t r = 0; r <= radius; ++r) {
    BigInt total = 0;
    BigInt cd = 1, cr = 1, two = 1;  // C(d,k), C(r,k), 2^k
    for (std::size_t k = 0; k <= std::min(d, r); ++k) {
      total += two * cd * cr;
      cd = cd * (d - k) / (k + 1);
      cr = cr * (r - k) / (k + 1);
      two *= 2;
    }
    if (total > limit) throw ResourceError("lattice ball size overflows 64 bits");
    t.beta.push_back(total.convert_to<std::uint64_t>());
  }
  return t;
}

DoublingSearch find_doubling_scale(const GrowthTable& g, std::uint64_t n, const Rational& d, std::uint64_t q,
                                   const Rational& alpha, const Rational& beta) {
  g.validate();
  if (!(alpha > 0 && alpha < beta && beta < 1)) throw InputError("need 0 < alpha < beta < 1");
  if (d <= 0) throw InputError("need d > 0");
  if (q < 2) throw InputError("need q >= 2");
  DoublingSearch s;
  s.d = d;
  s.q = q;
  s.alpha = alpha;
  s.beta = beta;
  s.n = n;
  s.k_exponent = 2 * d / (beta - alpha);
  if (is_integer(s.k_exponent)) s.k = pow(BigInt(q), numerator(s.k_exponent).convert_to<std::uint64_t>());
  if (n == 0 || compare_rational_power(Rational(q), 2 / (beta - alpha), Rational(n)) > 0)
    throw InputError("need n >= q^(2/(beta-alpha))");
  const Rational growth(table_value(g, n), table_value(g, 1));
  if (compare_rational_power(Rational(n), d, growth) < 0) throw InputError("hypothesis beta(n) <= n^d beta(1) fails");

  const BigInt m0 =
      integer_root_floor(pow(BigInt(n), numerator(alpha).convert_to<std::uint64_t>()),
                         denominator(alpha).convert_to<std::uint64_t>());
  const Rational mid = (alpha + beta) / 2;
  BigInt m = m0;
  while (compare_rational_power(Rational(n), mid, Rational(m)) > 0) {
    s.scan.push_back(m.convert_to<std::uint64_t>());
    m *= q;
  }
  if (s.scan.empty()) s.scan.push_back(m0.convert_to<std::uint64_t>());

  for (auto point : s.scan) {
    Rational ratio(table_value(g, q * point), table_value(g, point));
    if (compare_rational_power(Rational(q), s.k_exponent, ratio) >= 0) {
      s.m = point;
      s.ratio = ratio;
      return s;
    }
  }
  throw FalsificationError("no scan point satisfies beta(qm) <= K beta(m)");
}

bool satisfies_moderate_growth(const GrowthTable& t, std::size_t order, std::size_t diam, const Rational& a,
                               const Rational& d) {
  if (a <= 0 || d <= 0) throw InputError("need A > 0 and d > 0");
  for (std::size_t n = 1; n <= diam; ++n) {
    Rational rhs = a * table_value(t, n) / Rational(order);
    if (compare_rational_power(Rational(n, diam), d, rhs) > 0) return false;
  }
  return true;
}

namespace {

struct GraphGrowth {
  std::size_t order = 0;
  std::size_t diam = 0;
  GrowthTable table;
};

GraphGrowth graph_growth(const Graph& g) {
  if (g.num_vertices() == 0) throw InputError("empty graph");
  if (!is_connected(g)) throw InputError("graph is not connected");
  if (!g.regular_degree()) throw InputError("graph is not regular, so not vertex-transitive");
  GraphGrowth out;
  out.order = g.num_vertices();
  out.diam = diameter(g);
  out.table = growth_table(g, 0, out.diam);
  out.table.validate_graph_table();
  return out;
}

}  // namespace

ModerateGrowthFit moderate_growth_fit(const Graph& g, const Rational& d) {
  if (d <= 0) throw InputError("need d > 0");
  auto gg = graph_growth(g);
  ModerateGrowthFit fit;
  fit.d = d;
  fit.diam = gg.diam;
  fit.order = gg.order;
  fit.table = gg.table;
  fit.a = 1;
  if (is_integer(d)) {
    auto e = numerator(d).convert_to<std::uint64_t>();
    for (std::size_t n = 1; n <= gg.diam; ++n) {
      Rational need = pow(Rational(n, gg.diam), e) * gg.order / gg.table[n];
      fit.a = std::max(fit.a, need);
    }
  } else {
    fit.exact = false;
    double worst = 1;
    for (std::size_t n = 1; n <= gg.diam; ++n)
      worst = std::max(worst, std::pow(double(n) / double(gg.diam), to_double(d)) * double(gg.order) /
                                  double(gg.table[n]));
    fit.a = round_up(worst);
    while (!satisfies_moderate_growth(gg.table, gg.order, gg.diam, fit.a, d))
      fit.a = round_up(to_double(fit.a) * (1 + 1e-9));
  }
  if (!satisfies_moderate_growth(gg.table, gg.order, gg.diam, fit.a, d))
    throw FalsificationError("fitted A fails the moderate growth inequality");
  fit.slack.assign(gg.diam + 1, 0);
  for (std::size_t n = 1; n <= gg.diam; ++n)
    fit.slack[n] = to_double(fit.a) * double(gg.table[n]) /
                   (std::pow(double(n) / double(gg.diam), to_double(d)) * double(gg.order));
  return fit;
}

std::vector<ModerateGrowthFit> moderate_growth_scan(const Graph& g, const std::vector<Rational>& ds) {
  std::vector<ModerateGrowthFit> out;
  for (const auto& d : ds) out.push_back(moderate_growth_fit(g, d));
  return out;
}

DiameterBoundReport check_mod_growth_diam(const Graph& g, const Rational& a, const Rational& d) {
  auto gg = graph_growth(g);
  if (!satisfies_moderate_growth(gg.table, gg.order, gg.diam, a, d))
    throw InputError("graph does not have (A, d)-moderate growth");
  DiameterBoundReport r;
  r.diam = gg.diam;
  r.bound_power = Rational(gg.order) / (a * table_value(gg.table, 1));
  r.bound = std::pow(to_double(r.bound_power), 1.0 / to_double(d));
  if (gg.diam == 0 || compare_rational_power(Rational(gg.diam), d, r.bound_power) < 0)
    throw FalsificationError("diameter is below the moderate-growth lower bound");
  return r;
}

PiecewiseMonomial PiecewiseMonomial::continuous(std::vector<Rational> breakpoints, std::vector<unsigned> degrees,
                                                const Rational& c0) {
  if (degrees.size() != breakpoints.size() + 1) throw InputError("need one more degree than breakpoints");
  PiecewiseMonomial f;
  f.coefficients.push_back(c0);
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    const Rational& x = breakpoints[i];
    Rational c = f.coefficients.back() * pow(x, degrees[i]) / pow(x, degrees[i + 1]);
    f.coefficients.push_back(c);
  }
  f.breakpoints = std::move(breakpoints);
  f.degrees = std::move(degrees);
  f.validate();
  return f;
}

void PiecewiseMonomial::validate() const {
  if (degrees.empty()) throw InputError("piecewise monomial has no pieces");
  if (coefficients.size() != degrees.size() || breakpoints.size() + 1 != degrees.size())
    throw InputError("piecewise monomial sizes disagree");
  for (const auto& c : coefficients)
    if (c <= 0) throw InputError("piecewise monomial coefficients must be positive");
  Rational prev = 1;
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    if (breakpoints[i] <= prev) throw InputError("breakpoints must increase past 1");
    prev = breakpoints[i];
    const Rational& x = breakpoints[i];
    if (coefficients[i] * pow(x, degrees[i]) != coefficients[i + 1] * pow(x, degrees[i + 1]))
      throw InputError("piecewise monomial is not continuous");
  }
}

Rational PiecewiseMonomial::eval(const Rational& x) const {
  if (x < 1) throw InputError("piecewise monomial is defined for x >= 1");
  std::size_t i = 0;
  while (i < breakpoints.size() && x >= breakpoints[i]) ++i;
  return coefficients[i] * pow(x, degrees[i]);
}

double PiecewiseMonomial::eval(double x) const {
  std::size_t i = 0;
  while (i < breakpoints.size() && x >= to_double(breakpoints[i])) ++i;
  return to_double(coefficients[i]) * std::pow(x, double(degrees[i]));
}

unsigned PiecewiseMonomial::max_degree() const { return *std::max_element(degrees.begin(), degrees.end()); }

ScalingReport pw_scaling_check(const PiecewiseMonomial& f, const Rational& c, unsigned dmax) {
  f.validate();
  if (c <= 1) throw InputError("need c > 1");
  if (f.max_degree() > dmax) throw InputError("a degree exceeds dmax");
  std::set<Rational> grid;
  Rational last = f.breakpoints.empty() ? Rational(1) : f.breakpoints.back();
  BigInt top = 2 * ceil(last) + 2;
  for (BigInt i = 1; i <= top; ++i) grid.insert(Rational(i));
  for (const auto& x : f.breakpoints) {
    grid.insert(x);
    if (x / c >= 1) grid.insert(x / c);
  }
  std::vector<Rational> points(grid.begin(), grid.end());
  for (std::size_t i = 0; i + 1 < points.size(); ++i) grid.insert((points[i] + points[i + 1]) / 2);

  ScalingReport r;
  const Rational factor = pow(c, dmax);
  for (const auto& x : grid) {
    Rational ratio = f.eval(c * x) / (factor * f.eval(x));
    if (r.points == 0 || ratio > r.worst) r.worst = ratio;
    ++r.points;
    if (ratio > 1) throw FalsificationError("f(cx) > c^dmax f(x) at x = " + to_string(x));
  }
  return r;
}

namespace {

constexpr std::uint64_t kFitNodeCap = 200'000'000;

struct FitSearch {
  std::size_t mmax = 0;
  std::size_t pieces_max = 1;
  double penalty = 0;
  std::vector<double> logy;  // logy[m]
  std::vector<double> logm;
  std::uint64_t nodes = 0;

  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_breaks;
  std::vector<unsigned> best_degrees;
  std::vector<std::size_t> breaks;
  std::vector<unsigned> degrees;

  // Piece starting at sample `b` with log f(b) = `start`.
  void run(std::size_t b, double start, double sse) {
    if (++nodes > kFitNodeCap) throw ResourceError("growth profile fit exceeded its search cap");
    const std::size_t used = degrees.size() + 1;
    const double cost_floor = sse + penalty * double(used - 1);
    if (cost_floor >= best) return;
    for (unsigned d = 0; d <= kMaxFitDegree; ++d) {
      if (!degrees.empty() && degrees.back() == d) continue;
      double piece = 0;
      for (std::size_t e = b + 1; e <= mmax + 1; ++e) {
        double fit = start + d * (logm[e - 1] - logm[b]);
        double diff = logy[e - 1] - fit;
        piece += diff * diff;
        if (e - b < 2) continue;
        if (cost_floor + piece >= best) break;
        if (e == mmax + 1) {
          best = cost_floor + piece;
          best_breaks = breaks;
          best_degrees = degrees;
          best_degrees.push_back(d);
        } else if (used < pieces_max && mmax + 1 - e >= 2) {
          breaks.push_back(e);
          degrees.push_back(d);
          run(e, start + d * (logm[e] - logm[b]), sse + piece);
          degrees.pop_back();
          breaks.pop_back();
        }
      }
    }
  }
};

}  // namespace

ProfileFit fit_growth_profile(const GrowthTable& g, std::uint64_t n, std::size_t pieces_max,
                              std::optional<std::uint64_t> m_max, double penalty) {
  g.validate();
  if (n == 0) throw InputError("need n >= 1");
  if (pieces_max == 0) throw InputError("need at least one piece");
  std::uint64_t mm = m_max ? *m_max : g.radius() / n;
  if (mm < 2) throw InputError("underdetermined fit: fewer than 2 points per piece");
  table_value(g, mm * n);

  ProfileFit fit;
  fit.n = n;
  fit.ratio.assign(mm + 1, 0);
  FitSearch search;
  search.mmax = mm;
  search.pieces_max = pieces_max;
  search.penalty = penalty;
  search.logy.assign(mm + 1, 0);
  search.logm.assign(mm + 2, 0);
  const double base = double(table_value(g, n));
  for (std::uint64_t m = 1; m <= mm; ++m) {
    fit.ratio[m] = double(table_value(g, m * n)) / base;
    search.logy[m] = std::log(fit.ratio[m]);
  }
  for (std::uint64_t m = 1; m <= mm + 1; ++m) search.logm[m] = std::log(double(m));
  search.run(1, 0.0, 0.0);

  std::vector<Rational> breakpoints;
  for (auto b : search.best_breaks) breakpoints.emplace_back(b);
  fit.f = PiecewiseMonomial::continuous(std::move(breakpoints), search.best_degrees);
  fit.sse = search.best - penalty * double(fit.f.pieces() - 1);
  for (std::uint64_t m = 1; m <= mm; ++m) {
    double f = fit.f.eval(double(m));
    fit.max_deviation = std::max({fit.max_deviation, fit.ratio[m] / f, f / fit.ratio[m]});
  }
  return fit;
}

std::string format_profile_csv(const ProfileFit& fit) {
  std::ostringstream out;
  out.precision(12);
  out << "m,beta_ratio,f_fit\n";
  for (std::size_t m = 1; m < fit.ratio.size(); ++m)
    out << m << ',' << fit.ratio[m] << ',' << fit.f.eval(double(m)) << '\n';
  return out.str();
}

double loglog_slope(const GrowthTable& g, std::size_t r0, std::size_t r1) {
  if (r0 == 0 || r1 <= r0) throw InputError("need 1 <= r0 < r1");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = double(r1 - r0 + 1);
  for (std::size_t r = r0; r <= r1; ++r) {
    double x = std::log(double(r));
    double y = std::log(double(table_value(g, r)));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

PersistenceReport persistence_check(const GrowthTable& g, std::uint64_t n, const Rational& d, std::uint64_t m_lo,
                                    std::uint64_t m_hi, std::optional<Rational> c) {
  g.validate();
  if (n == 0 || m_lo == 0 || m_lo > m_hi) throw InputError("need n >= 1 and 1 <= m_lo <= m_hi");
  if (d < 0) throw InputError("need d >= 0");
  PersistenceReport r;
  r.n = n;
  r.d = d;
  r.m_lo = m_lo;
  r.m_hi = m_hi;
  const std::uint64_t bn = table_value(g, n);
  table_value(g, m_hi);
  if (is_integer(d)) {
    auto e = numerator(d).convert_to<std::uint64_t>();
    for (auto m = m_lo; m <= m_hi; ++m) {
      Rational need = Rational(table_value(g, m), bn) / pow(Rational(m, n), e);
      if (m == m_lo || need > r.c_emp) r.c_emp = need;
    }
  } else {
    double worst = 0;
    for (auto m = m_lo; m <= m_hi; ++m)
      worst = std::max(worst, double(table_value(g, m)) / double(bn) /
                                  std::pow(double(m) / double(n), to_double(d)));
    r.c_emp = round_up(worst);
    // Outward correction until every m verifies exactly.
    for (auto m = m_lo; m <= m_hi; ++m) {
      while (compare_rational_power(Rational(m, n), d, Rational(table_value(g, m), bn) / r.c_emp) < 0)
        r.c_emp = round_up(to_double(r.c_emp) * (1 + 1e-9));
    }
  }
  if (c) r.holds = r.c_emp <= *c;
  r.trivial_clause_applies = bn <= n;
  if (r.trivial_clause_applies) {
    for (std::size_t rad = n; rad <= g.radius(); ++rad)
      if (g.beta[rad] != bn) throw FalsificationError("beta(n) <= n but the ball at radius n is not everything");
  }
  return r;
}

TransferReport growth_transfer_check(const QuotientSystem& q, Vertex e, std::optional<std::size_t> m_max) {
  TransferReport r;
  const Graph& base = q.base();
  auto sg = ball_gen_set(base, q.action(), e);
  r.k = word_radius(q.h(), sg);
  const std::size_t he = q.fibre_of(e);
  auto qa = q.quotient_action();
  auto qs = ball_gen_set(q.quotient(), qa, he);
  r.gen_set_size = qs.size();
  r.stabilizer = stabilizer(qa, he).order();
  r.fibre = q.fibres()[he].size();
  const std::size_t top = m_max ? *m_max : diameter(base);

  auto lens = word_lengths(qs);
  std::vector<std::size_t> s_count(top + 1, 0);
  for (auto l : lens)
    if (l <= top) ++s_count[l];
  for (std::size_t m = 1; m <= top; ++m) s_count[m] += s_count[m - 1];

  auto tb = growth_table(base, e, top + r.k);
  auto tq = growth_table(q.quotient(), he, top);
  for (std::size_t m = 0; m <= top; ++m) {
    TransferRow row;
    row.m = m;
    row.s_m = s_count[m];
    row.beta_base = table_value(tb, m);
    row.beta_base_shift = table_value(tb, m + r.k);
    row.beta_quot = table_value(tq, m);
    const std::string at = " at m = " + std::to_string(m);
    if (m >= 1 && row.s_m != r.stabilizer * row.beta_quot)
      throw FalsificationError("|S^m| != |stabilizer| beta_quotient(m)" + at);
    if (r.fibre * row.beta_quot < row.beta_base) throw FalsificationError("beta_quotient(m) < beta(m)/|H(e)|" + at);
    if (r.fibre * row.beta_quot > row.beta_base_shift)
      throw FalsificationError("beta_quotient(m) > beta(m+k)/|H(e)|" + at);
    if (m >= 1 && r.stabilizer * row.beta_base > r.fibre * row.s_m)
      throw FalsificationError("|stabilizer|/|H(e)| beta(m) > |S^m|" + at);
    r.rows.push_back(row);
  }
  return r;
}

}  // namespace vtg
