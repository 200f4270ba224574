#pragma once

#include "vtg/graph.hpp"
#include "vtg/quotient.hpp"
#include "vtg/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vtg {

/// β(r) with the table extended by its last value when it is exhausted.
/// Throws InputError when r is beyond a non-exhausted table.
std::uint64_t table_value(const GrowthTable& t, std::uint64_t r);

/// Ball sizes of Z^d with the standard generators: Σ_k 2^k C(d,k) C(r,k).
/// Throws ResourceError on 64-bit overflow.
GrowthTable lattice_ball_table(std::size_t d, std::size_t radius);

struct DoublingSearch {
  Rational d;
  std::uint64_t q = 2;
  Rational alpha, beta;
  std::uint64_t n = 0;
  /// m = q^k ⌊n^α⌋ for k = 0..r-1, r least with q^r ⌊n^α⌋ >= n^{(α+β)/2}.
  std::vector<std::uint64_t> scan;
  std::uint64_t m = 0;
  Rational ratio;  // β(qm) / β(m)
  /// K = q^{k_exponent}, k_exponent = 2d/(β-α); `k` is set when it is an
  /// integer power.
  Rational k_exponent;
  std::optional<BigInt> k;
};

/// First scan point m with β(qm) <= K β(m). Preconditions (InputError):
/// 0 < α < β < 1, d > 0, q >= 2, n >= q^{2/(β-α)}, β(n) <= n^d β(1) and the
/// table covers the scan. No accepted point raises FalsificationError.
DoublingSearch find_doubling_scale(const GrowthTable& g, std::uint64_t n, const Rational& d,
                                   std::uint64_t q, const Rational& alpha, const Rational& beta);

struct ModerateGrowthFit {
  Rational a;
  Rational d;
  std::size_t diam = 0;
  std::size_t order = 0;
  GrowthTable table;
  /// slack[n] = A β(n) / ((n/diam)^d |Γ|) for n = 1..diam (slack[0] unused);
  /// a double for reporting.
  std::vector<double> slack;
  /// True when A was computed exactly; otherwise it is a rounded-up decimal
  /// that was re-verified by cross-powering.
  bool exact = true;
};

/// β(n) >= (1/A) (n/diam)^d |Γ| for 1 <= n <= diam, exact check.
bool satisfies_moderate_growth(const GrowthTable& t, std::size_t order, std::size_t diam,
                               const Rational& a, const Rational& d);

/// Minimal A for the given d, from the growth table at vertex 0. Γ must be
/// connected and regular (InputError otherwise).
ModerateGrowthFit moderate_growth_fit(const Graph& g, const Rational& d);
/// Fits for each d of a grid.
std::vector<ModerateGrowthFit> moderate_growth_scan(const Graph& g, const std::vector<Rational>& ds);

struct DiameterBoundReport {
  std::size_t diam = 0;
  /// |Γ| / (A β(1)); the bound is diam^d >= this.
  Rational bound_power;
  double bound = 0;  // bound_power^{1/d}
};

/// diam >= A^{-1/d} (|Γ| / β(1))^{1/d} for an (A, d)-moderate Γ. The
/// moderate-growth hypothesis is re-verified (InputError when it fails);
/// a failing bound raises FalsificationError.
DiameterBoundReport check_mod_growth_diam(const Graph& g, const Rational& a, const Rational& d);

/// Continuous f with f(x) = C_i x^{d_i} on [x_{i-1}, x_i), x_0 = 1 and the
/// last piece unbounded.
struct PiecewiseMonomial {
  std::vector<Rational> breakpoints;  // x_1 < ... < x_{k-1}, all > 1
  std::vector<Rational> coefficients;
  std::vector<unsigned> degrees;

  /// Builds the continuous function with f(1) = c0.
  static PiecewiseMonomial continuous(std::vector<Rational> breakpoints, std::vector<unsigned> degrees,
                                      const Rational& c0 = 1);
  std::size_t pieces() const { return degrees.size(); }
  Rational eval(const Rational& x) const;
  double eval(double x) const;
  /// Sizes match, C_i > 0, breakpoints increase past 1, continuity. Throws
  /// InputError.
  void validate() const;
  unsigned max_degree() const;
};

struct ScalingReport {
  std::size_t points = 0;
  Rational worst;  // max f(cx) / (c^dmax f(x)) over the grid
};

/// f(cx) <= c^dmax f(x) on the grid: integers 1..2⌈x_last⌉+2, every
/// breakpoint and every breakpoint divided by c (when >= 1), and midpoints
/// of consecutive grid points. FalsificationError when violated.
ScalingReport pw_scaling_check(const PiecewiseMonomial& f, const Rational& c, unsigned dmax);

inline constexpr unsigned kMaxFitDegree = 6;
inline constexpr double kDefaultPiecePenalty = 0.1;

struct ProfileFit {
  std::uint64_t n = 0;
  std::vector<double> ratio;  // ratio[m] = β(mn)/β(n), m = 1..M (index 0 unused)
  PiecewiseMonomial f;
  double sse = 0;             // Σ (log ratio - log f)^2
  double max_deviation = 1;   // max over m of max(ratio/f, f/ratio)
};

/// Fits m ↦ β(mn)/β(n), m = 1..M, by a continuous nondecreasing
/// piecewise monomial with f(1) = 1, integer breakpoints and integer
/// degrees 0..6, minimising SSE + penalty (pieces - 1) over every
/// admissible layout. Each piece needs two sample points (InputError).
/// M defaults to the largest value the table covers.
ProfileFit fit_growth_profile(const GrowthTable& g, std::uint64_t n, std::size_t pieces_max,
                              std::optional<std::uint64_t> m_max = std::nullopt,
                              double penalty = kDefaultPiecePenalty);

// Plot data CSV: header "m,beta_ratio,f_fit".
std::string format_profile_csv(const ProfileFit& fit);

/// Least-squares slope of log β(r) against log r for r in [r0, r1].
double loglog_slope(const GrowthTable& g, std::size_t r0, std::size_t r1);

struct PersistenceReport {
  std::uint64_t n = 0;
  Rational d;
  std::uint64_t m_lo = 0, m_hi = 0;
  /// max over m of β(m) / ((m/n)^d β(n)); rounded up when d is not an
  /// integer.
  Rational c_emp;
  std::optional<bool> holds;  // c_emp <= C when C was supplied
  bool trivial_clause_applies = false;  // β(n) <= n
};

/// Empirical constant of β(m) <= C (m/n)^d β(n) over m in [m_lo, m_hi], and
/// the clause β(n) <= n ⟹ Γ = B(x, n), checked on the table
/// (FalsificationError).
PersistenceReport persistence_check(const GrowthTable& g, std::uint64_t n, const Rational& d,
                                    std::uint64_t m_lo, std::uint64_t m_hi,
                                    std::optional<Rational> c = std::nullopt);

struct TransferRow {
  std::size_t m = 0;
  std::size_t s_m = 0;          // |S^m|
  std::uint64_t beta_base = 0;  // β_Γ(m)
  std::uint64_t beta_base_shift = 0;  // β_Γ(m + k)
  std::uint64_t beta_quot = 0;  // β_{Γ/H}(m)
};

struct TransferReport {
  std::size_t k = 0;             // word radius of H in the ball generating set of G
  std::size_t fibre = 0;         // |H(e)|
  std::size_t stabilizer = 0;    // |(G_{Γ/H})_{H(e)}|
  std::size_t gen_set_size = 0;  // |S|, S the ball generating set of G_{Γ/H}
  std::vector<TransferRow> rows;
};

/// For m = 0..m_max (default diam Γ), with S the ball generating set of
/// G_{Γ/H} at H(e):
///   |S^m| = |(G_{Γ/H})_{H(e)}| β_{Γ/H}(m)   (m >= 1),
///   |H(e)| β_{Γ/H}(m) >= β_Γ(m),
///   |H(e)| β_{Γ/H}(m) <= β_Γ(m + k),
///   |(G_{Γ/H})_{H(e)}| β_Γ(m) <= |H(e)| |S^m|   (m >= 1).
/// FalsificationError on any failure.
TransferReport growth_transfer_check(const QuotientSystem& q, Vertex e = 0,
                                     std::optional<std::size_t> m_max = std::nullopt);

}  // namespace vtg
