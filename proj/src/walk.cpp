#include "vtg/walk.hpp"

#include "vtg/errors.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace vtg {

namespace {

std::size_t check_walk_graph(const Graph& g) {
  if (g.num_vertices() == 0) throw InputError("empty graph");
  if (g.num_vertices() > kWalkVertexCap) throw ResourceError("graph exceeds the random walk vertex cap");
  auto deg = g.regular_degree();
  if (!deg) throw InputError("random walk analysis needs a regular graph");
  if (!is_connected(g)) throw InputError("random walk analysis needs a connected graph");
  return *deg;
}

// Numerators of P^t(x, .) over the common denominator (2 deg)^t.
class ExactWalk {
 public:
  ExactWalk(const Graph& g, std::size_t deg, Vertex start) : g_(g), deg_(deg), num_(g.num_vertices(), 0) {
    num_[start] = 1;
  }

  void step() {
    std::vector<BigInt> next(num_.size());
    for (Vertex x = 0; x < num_.size(); ++x) {
      BigInt v = num_[x] * deg_;
      for (auto y : g_.neighbors(x)) v += num_[y];
      next[x] = std::move(v);
    }
    num_ = std::move(next);
    den_ *= 2 * deg_;
  }

  // Σ |N_x n - D|; TV = this / (2 D n).
  BigInt l1() const {
    const BigInt n = num_.size();
    BigInt total = 0;
    for (const auto& v : num_) total += abs(v * n - den_);
    return total;
  }

  const BigInt& den() const { return den_; }

 private:
  const Graph& g_;
  std::size_t deg_;
  std::vector<BigInt> num_;
  BigInt den_ = 1;
};

class FloatWalk {
 public:
  FloatWalk(const Graph& g, std::size_t deg, Vertex start) : g_(g), deg_(double(deg)), p_(g.num_vertices(), 0.0) {
    p_[start] = 1.0;
  }

  void step() {
    std::vector<double> next(p_.size());
    for (Vertex x = 0; x < p_.size(); ++x) {
      double s = 0;
      for (auto y : g_.neighbors(x)) s += p_[y];
      next[x] = 0.5 * p_[x] + 0.5 * s / deg_;
    }
    p_ = std::move(next);
  }

  double tv() const {
    const double u = 1.0 / double(p_.size());
    double sum = 0, comp = 0;  // Kahan
    for (double v : p_) {
      double y = std::fabs(v - u) - comp;
      double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
    return 0.5 * sum;
  }

 private:
  const Graph& g_;
  double deg_;
  std::vector<double> p_;
};

}  // namespace

WalkReport mixing_time_tv(const Graph& g, const Rational& epsilon, std::uint64_t seed, std::uint64_t step_cap) {
  const std::size_t deg = check_walk_graph(g);
  if (epsilon <= 0 || epsilon >= 1) throw InputError("need 0 < epsilon < 1");
  WalkReport r;
  r.vertices = g.num_vertices();
  r.diameter = diameter(g);
  r.epsilon = epsilon;
  r.exact = r.vertices < kExactWalkBelow;
  if (r.vertices > 1) {
    std::mt19937_64 rng(seed);
    r.second_basepoint = 1 + std::uniform_int_distribution<std::size_t>(0, r.vertices - 2)(rng);
  }
  if (r.vertices == 1) {
    r.tv.push_back(0.0);
    return r;
  }

  const BigInt a = numerator(epsilon), b = denominator(epsilon);
  const BigInt n = r.vertices;
  if (r.exact) {
    ExactWalk w0(g, deg, 0), w1(g, deg, r.second_basepoint);
    BigInt prev_l1;
    for (std::uint64_t t = 0;; ++t) {
      BigInt l1 = w0.l1();
      if (w1.l1() != l1) throw InputError("TV curve depends on the basepoint; graph is not vertex-transitive");
      const BigInt scale = 2 * w0.den() * n;
      if (t > 0 && l1 > prev_l1 * (2 * deg))
        throw FalsificationError("TV distance increased along the lazy walk");
      r.tv.push_back(to_double(Rational(l1, scale)));
      if (b * l1 <= 2 * a * w0.den() * n) {
        r.t_mix = t;
        break;
      }
      if (t >= step_cap) throw ResourceError("mixing time exceeds the step cap");
      prev_l1 = l1;
      w0.step();
      w1.step();
    }
  } else {
    const double eps = to_double(epsilon);
    FloatWalk w0(g, deg, 0), w1(g, deg, r.second_basepoint);
    for (std::uint64_t t = 0;; ++t) {
      double tv = w0.tv();
      if (std::fabs(tv - w1.tv()) > 1e-12) throw InputError("TV curve depends on the basepoint; graph is not vertex-transitive");
      r.tv.push_back(tv);
      if (tv <= eps) {
        r.t_mix = t;
        break;
      }
      if (t >= step_cap) throw ResourceError("mixing time exceeds the step cap");
      w0.step();
      w1.step();
    }
  }
  r.ratio = r.diameter == 0 ? 0.0 : double(r.t_mix) / double(r.diameter * r.diameter);
  return r;
}

SpectralReport spectral_gap(const Graph& g, std::uint64_t seed, double tol, std::size_t max_iter) {
  const std::size_t deg = check_walk_graph(g);
  const std::size_t n = g.num_vertices();
  if (n < 2) throw InputError("spectral gap needs at least two vertices");
  auto apply = [&](const std::vector<double>& v) {
    std::vector<double> out(n);
    for (Vertex x = 0; x < n; ++x) {
      double s = 0;
      for (auto y : g.neighbors(x)) s += v[y];
      out[x] = 0.5 * v[x] + 0.5 * s / double(deg);
    }
    return out;
  };
  auto deflate_normalize = [&](std::vector<double>& v) {
    double mean = 0;
    for (double x : v) mean += x;
    mean /= double(n);
    double norm = 0;
    for (double& x : v) {
      x -= mean;
      norm += x * x;
    }
    norm = std::sqrt(norm);
    if (norm == 0) throw ResourceError("power iteration collapsed to the constant vector");
    for (double& x : v) x /= norm;
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  deflate_normalize(v);

  SpectralReport r;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    auto pv = apply(v);
    double rho = 0;
    for (std::size_t i = 0; i < n; ++i) rho += v[i] * pv[i];
    double res = 0;
    for (std::size_t i = 0; i < n; ++i) res += (pv[i] - rho * v[i]) * (pv[i] - rho * v[i]);
    res = std::sqrt(res);
    r.lambda2 = rho;
    r.residual = res;
    r.iterations = it;
    if (res <= tol) {
      r.gap = 1 - rho;
      r.relaxation = 1 / r.gap;
      return r;
    }
    v = std::move(pv);
    deflate_normalize(v);
  }
  throw ResourceError("power iteration did not converge; residual " + std::to_string(r.residual));
}

std::string format_tv_csv(const WalkReport& r) {
  std::ostringstream out;
  out.precision(15);
  out << "t,tv\n";
  for (std::size_t t = 0; t < r.tv.size(); ++t) out << t << ',' << r.tv[t] << '\n';
  return out.str();
}

}  // namespace vtg
