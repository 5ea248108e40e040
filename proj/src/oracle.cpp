#include "perc/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "perc/error.hpp"
#include "perc/parallel.hpp"

namespace perc {

double CountPolynomial::evaluate(double p) const {
  const int m = static_cast<int>(coeff.size()) - 1;
  double total = 0.0;
  for (int o = 0; o <= m; ++o) {
    if (coeff[o] == 0) continue;
    total += static_cast<double>(coeff[o]) * std::pow(p, o) * std::pow(1.0 - p, m - o);
  }
  return total;
}

namespace {

void add(ExactCounts& into, const ExactCounts& from) {
  auto merge = [](CountPolynomial& a, const CountPolynomial& b) {
    for (std::size_t o = 0; o < a.coeff.size(); ++o) a.coeff[o] += b.coeff[o];
  };
  auto merge_all = [&](std::vector<CountPolynomial>& a, const std::vector<CountPolynomial>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) merge(a[i], b[i]);
  };
  merge(into.configs, from.configs);
  merge(into.origin_size, from.origin_size);
  merge(into.cmax, from.cmax);
  merge_all(into.origin_tail, from.origin_tail);
  merge_all(into.z1, from.z1);
  merge_all(into.z2, from.z2);
  merge_all(into.z3, from.z3);
  merge_all(into.cmax_geq, from.cmax_geq);
  merge_all(into.ranked, from.ranked);
  merge_all(into.connected, from.connected);
}

ExactCounts empty_counts(Index V, Index m, Vertex origin) {
  ExactCounts c;
  c.vertices = V;
  c.edges = m;
  c.origin = origin;
  CountPolynomial zero{std::vector<std::uint64_t>(static_cast<std::size_t>(m) + 1, 0)};
  c.configs = c.origin_size = c.cmax = zero;
  const auto per_k = static_cast<std::size_t>(V) + 1;
  c.origin_tail.assign(per_k, zero);
  c.z1.assign(per_k, zero);
  c.z2.assign(per_k, zero);
  c.z3.assign(per_k, zero);
  c.cmax_geq.assign(per_k, zero);
  c.ranked.assign(per_k, zero);
  c.connected.assign(static_cast<std::size_t>(V), zero);
  return c;
}

}  // namespace

ExactCounts enumerate_counts(const GraphSpec& spec) {
  const std::vector<Edge> edges = edge_list(spec);
  const Index m = static_cast<Index>(edges.size());
  require(m <= kOracleMaxEdges, ErrorCode::TooManyEdges,
          std::to_string(m) + " edges exceeds the enumeration limit of " +
              std::to_string(kOracleMaxEdges));
  const Index V = vertex_count(spec);
  const Vertex root0 = origin(spec);

  const std::uint64_t total = std::uint64_t{1} << m;
  const std::int64_t chunks = std::min<std::int64_t>(64, static_cast<std::int64_t>(total));
  const std::uint64_t per_chunk = (total + chunks - 1) / chunks;

  auto partial = parallel_map<ExactCounts>(chunks, [&](std::int64_t chunk) {
    ExactCounts c = empty_counts(V, m, root0);
    std::vector<Index> parent(static_cast<std::size_t>(V));
    std::vector<Index> size(static_cast<std::size_t>(V));
    std::vector<Index> sizes;
    const std::uint64_t begin = static_cast<std::uint64_t>(chunk) * per_chunk;
    const std::uint64_t end = std::min(total, begin + per_chunk);
    auto find = [&](Index x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (std::uint64_t mask = begin; mask < end; ++mask) {
      for (Index v = 0; v < V; ++v) parent[v] = v, size[v] = 1;
      for (Index e = 0; e < m; ++e) {
        if (!((mask >> e) & 1u)) continue;
        Index a = find(edges[e].u), b = find(edges[e].v);
        if (a == b) continue;
        if (size[a] < size[b]) std::swap(a, b);
        parent[b] = a;
        size[a] += size[b];
      }
      const auto o = static_cast<std::size_t>(std::popcount(mask));
      sizes.clear();
      for (Index v = 0; v < V; ++v)
        if (find(v) == v) sizes.push_back(size[v]);
      std::sort(sizes.begin(), sizes.end(), std::greater<>());
      const Index r0 = find(root0);
      const Index s0 = size[r0];
      const Index cmax = sizes.front();

      c.configs.coeff[o] += 1;
      c.origin_size.coeff[o] += static_cast<std::uint64_t>(s0);
      c.cmax.coeff[o] += static_cast<std::uint64_t>(cmax);
      for (std::size_t i = 0; i < sizes.size(); ++i)
        c.ranked[i + 1].coeff[o] += static_cast<std::uint64_t>(sizes[i]);
      Index z = 0;
      std::size_t next = 0;
      for (Index k = V; k >= 1; --k) {
        while (next < sizes.size() && sizes[next] >= k) z += sizes[next++];
        const auto uz = static_cast<std::uint64_t>(z);
        c.z1[k].coeff[o] += uz;
        c.z2[k].coeff[o] += uz * uz;
        c.z3[k].coeff[o] += uz * uz * uz;
        if (s0 >= k) c.origin_tail[k].coeff[o] += 1;
        if (cmax >= k) c.cmax_geq[k].coeff[o] += 1;
      }
      for (Index x = 0; x < V; ++x)
        if (find(x) == r0) c.connected[x].coeff[o] += 1;
    }
    return c;
  });

  ExactCounts out = empty_counts(V, m, root0);
  for (const auto& c : partial) add(out, c);
  return out;
}

ExactReport evaluate(const ExactCounts& c, const GraphSpec& spec, double p) {
  check_probability(p);
  ExactReport r;
  r.spec = spec;
  r.p = p;
  r.vertices = c.vertices;
  r.edges = c.edges;
  r.origin = c.origin;
  r.chi = c.origin_size.evaluate(p);
  r.e_cmax = c.cmax.evaluate(p);
  const auto per_k = static_cast<std::size_t>(c.vertices) + 1;
  r.tail.assign(per_k, 0.0);
  r.z_mean.assign(per_k, 0.0);
  r.z_variance.assign(per_k, 0.0);
  r.z_third.assign(per_k, 0.0);
  r.p_cmax_geq.assign(per_k, 0.0);
  r.e_ranked.assign(per_k, 0.0);
  for (std::size_t k = 1; k < per_k; ++k) {
    r.tail[k] = c.origin_tail[k].evaluate(p);
    r.z_mean[k] = c.z1[k].evaluate(p);
    r.z_variance[k] = std::max(0.0, c.z2[k].evaluate(p) - r.z_mean[k] * r.z_mean[k]);
    r.z_third[k] = c.z3[k].evaluate(p);
    r.p_cmax_geq[k] = c.cmax_geq[k].evaluate(p);
    r.e_ranked[k] = c.ranked[k].evaluate(p);
  }
  r.two_point.resize(static_cast<std::size_t>(c.vertices));
  for (std::size_t x = 0; x < r.two_point.size(); ++x) r.two_point[x] = c.connected[x].evaluate(p);
  return r;
}

ExactReport enumerate_exact(const GraphSpec& spec, double p) {
  check_probability(p);
  return evaluate(enumerate_counts(spec), spec, p);
}

}  // namespace perc
