#pragma once

#include "vtg/graph.hpp"
#include "vtg/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vtg {

inline constexpr std::size_t kWalkVertexCap = 4096;
inline constexpr std::size_t kExactWalkBelow = 512;
inline constexpr std::uint64_t kWalkStepCap = 10'000'000;

struct SpectralReport {
  double lambda2 = 0;  // second largest eigenvalue of the lazy kernel
  double gap = 0;
  double relaxation = 0;  // 1 / gap
  double residual = 0;    // |P v - lambda2 v| for the returned unit vector v
  std::size_t iterations = 0;
};

struct WalkReport {
  std::size_t vertices = 0;
  std::size_t diameter = 0;
  Rational epsilon;
  std::uint64_t t_mix = 0;
  bool exact = false;
  std::vector<double> tv;  // tv[t] for t = 0..t_mix
  Vertex second_basepoint = 0;
  double ratio = 0;  // t_mix / diam^2
};

/// Lazy walk P = I/2 + A/(2 deg) from vertex 0; t_mix is the first t with
/// TV(P^t(0, .), uniform) <= epsilon. Exact rational powering below 512
/// vertices, doubles above (up to 4096). The TV curve from a second
/// basepoint (chosen by `seed`) must agree, exactly in exact mode and to
/// 1e-12 otherwise; InputError if not, and for non-regular or disconnected
/// input.
WalkReport mixing_time_tv(const Graph& g, const Rational& epsilon = Rational(1, 4), std::uint64_t seed = 1,
                          std::uint64_t step_cap = kWalkStepCap);

/// Second eigenvalue of the lazy kernel by power iteration on the
/// complement of the constants from a seeded start vector. Stops when the
/// residual is below `tol`; ResourceError after `max_iter` steps.
SpectralReport spectral_gap(const Graph& g, std::uint64_t seed = 1, double tol = 1e-11,
                            std::size_t max_iter = 5'000'000);

// TV curve CSV: header "t,tv".
std::string format_tv_csv(const WalkReport& r);

}  // namespace vtg
