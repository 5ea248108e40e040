#ifndef PERC_ORACLE_HPP
#define PERC_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "perc/graphs.hpp"

namespace perc {

/// Integer coefficients c_o of sum_o c_o p^o (1-p)^(m-o): c_o is a statistic
/// summed over all configurations with exactly o open edges.
struct CountPolynomial {
  std::vector<std::uint64_t> coeff;

  double evaluate(double p) const;
  friend bool operator==(const CountPolynomial&, const CountPolynomial&) = default;
};

/// Exact configuration counts; every field of ExactReport is one of these
/// evaluated at p. Index k and rank i run from 1; slot 0 is unused.
struct ExactCounts {
  Index vertices = 0;
  Index edges = 0;
  Vertex origin = 0;
  CountPolynomial configs;         // binomial(m, o)
  CountPolynomial origin_size;     // |C(0)|
  CountPolynomial cmax;            // |C_max|
  std::vector<CountPolynomial> origin_tail;  // [k] 1{|C(0)| >= k}
  std::vector<CountPolynomial> z1, z2, z3;   // [k] Z_{>=k}, its square and cube
  std::vector<CountPolynomial> cmax_geq;     // [k] 1{|C_max| >= k}
  std::vector<CountPolynomial> ranked;       // [i] |C_(i)|
  std::vector<CountPolynomial> connected;    // [x] 1{0 <-> x}
};

/// Exact expectations at one p.
struct ExactReport {
  GraphSpec spec;
  double p = 0.0;
  Index vertices = 0;
  Index edges = 0;
  Vertex origin = 0;
  double chi = 0.0;
  double e_cmax = 0.0;
  std::vector<double> tail;          // [k] P(|C| >= k), k = 1..V
  std::vector<double> z_mean;        // [k] E Z_{>=k}
  std::vector<double> z_variance;    // [k] Var Z_{>=k}
  std::vector<double> z_third;       // [k] E Z_{>=k}^3
  std::vector<double> p_cmax_geq;    // [k] P(|C_max| >= k)
  std::vector<double> e_ranked;      // [i] E|C_(i)|
  std::vector<double> two_point;     // [x] P(0 <-> x), x = 0..V-1
};

constexpr int kOracleMaxEdges = 24;

/// Enumerates all 2^m bond configurations. Throws TooManyEdges for m > 24.
ExactCounts enumerate_counts(const GraphSpec& spec);

ExactReport evaluate(const ExactCounts& counts, const GraphSpec& spec, double p);
ExactReport enumerate_exact(const GraphSpec& spec, double p);

}  // namespace perc

#endif  // PERC_ORACLE_HPP
