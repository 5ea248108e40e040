#include "perc/graphs.hpp"

#include <array>

#include <algorithm>
#include <cmath>
#include <limits>

#include "perc/error.hpp"

namespace perc {

namespace {

constexpr Index kMaxVertices = Index{1} << 31;

// Integer power with overflow detection; returns -1 on overflow past `cap`.
Index checked_pow(Index base, int exp, Index cap) {
  Index out = 1;
  for (int i = 0; i < exp; ++i) {
    if (out > cap / base) return -1;
    out *= base;
  }
  return out;
}

bool is_product(Family f) { return f != Family::Complete && f != Family::ErdosRenyi; }

}  // namespace

std::string_view family_name(Family f) {
  switch (f) {
    case Family::TorusNN: return "torus-nn";
    case Family::TorusSpread: return "torus-spread";
    case Family::Hypercube: return "hypercube";
    case Family::Hamming: return "hamming";
    case Family::Complete: return "complete";
    case Family::ErdosRenyi: return "erdos-renyi";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (Family f : {Family::TorusNN, Family::TorusSpread, Family::Hypercube, Family::Hamming,
                   Family::Complete, Family::ErdosRenyi}) {
    if (family_name(f) == name) return f;
  }
  throw Error(ErrorCode::InvalidSpec, "unknown family '" + std::string(name) + "'");
}

void validate(const GraphSpec& s) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidSpec, msg); };
  switch (s.family) {
    case Family::TorusNN:
      if (s.d < 1) fail("torus-nn requires d >= 1");
      if (s.r < 3) fail("torus-nn requires r >= 3");
      break;
    case Family::TorusSpread:
      if (s.d < 1) fail("torus-spread requires d >= 1");
      if (s.L < 1) fail("torus-spread requires L >= 1");
      if (s.r < 2 * s.L + 1) fail("torus-spread requires r >= 2L+1");
      if (checked_pow(2 * s.L + 1, s.d, kMaxVertices) < 0) fail("torus-spread degree too large");
      break;
    case Family::Hypercube:
      if (s.d < 1) fail("hypercube requires d >= 1");
      break;
    case Family::Hamming:
      if (s.d < 1) fail("hamming requires d >= 1");
      if (s.r < 2) fail("hamming requires r >= 2");
      break;
    case Family::Complete:
    case Family::ErdosRenyi:
      if (s.n < 1) fail("complete/erdos-renyi requires n >= 1");
      if (s.n > (Index{1} << 24)) fail("n too large for complete-graph bond indexing");
      break;
  }
  if (is_product(s.family) && checked_pow(coordinate_radix(s), s.d, kMaxVertices) < 0) {
    fail("vertex count exceeds 2^31");
  }
}

int coordinate_count(const GraphSpec& s) { return is_product(s.family) ? s.d : 1; }

Index coordinate_radix(const GraphSpec& s) {
  switch (s.family) {
    case Family::Hypercube: return 2;
    case Family::Complete:
    case Family::ErdosRenyi: return s.n;
    default: return s.r;
  }
}

Index vertex_count(const GraphSpec& s) {
  validate(s);
  if (!is_product(s.family)) return s.n;
  return checked_pow(coordinate_radix(s), s.d, kMaxVertices);
}

Index degree(const GraphSpec& s) {
  validate(s);
  switch (s.family) {
    case Family::TorusNN: return 2 * Index{s.d};
    case Family::TorusSpread: return checked_pow(2 * s.L + 1, s.d, kMaxVertices) - 1;
    case Family::Hypercube: return s.d;
    case Family::Hamming: return Index{s.d} * (s.r - 1);
    case Family::Complete: return s.n - 1;
    case Family::ErdosRenyi:
      throw Error(ErrorCode::InvalidSpec,
                  "erdos-renyi is not regular before sampling; use expected degree (n-1)p");
  }
  return 0;
}

Index underlying_degree(const GraphSpec& s) {
  if (s.family == Family::ErdosRenyi) {
    validate(s);
    return s.n - 1;
  }
  return degree(s);
}

Index edge_count(const GraphSpec& s) {
  return vertex_count(s) * underlying_degree(s) / 2;
}

bool theory_out_of_range(const GraphSpec& s) {
  return (s.family == Family::TorusNN || s.family == Family::TorusSpread) && s.d <= 6;
}

bool calibration_only(const GraphSpec& s) { return s.family == Family::ErdosRenyi; }

std::vector<int> decode(const GraphSpec& s, Vertex v) {
  Index V = vertex_count(s);
  require(v >= 0 && v < V, ErrorCode::VertexOutOfRange, "vertex " + std::to_string(v));
  if (!is_product(s.family)) return {static_cast<int>(v)};
  const Index R = coordinate_radix(s);
  const Index shift = R / 2;
  std::vector<int> coords(static_cast<std::size_t>(s.d));
  for (auto& c : coords) {
    c = static_cast<int>(v % R - shift);
    v /= R;
  }
  return coords;
}

Vertex encode(const GraphSpec& s, const std::vector<int>& coords) {
  validate(s);
  require(static_cast<int>(coords.size()) == coordinate_count(s), ErrorCode::VertexOutOfRange,
          "wrong number of coordinates");
  if (!is_product(s.family)) {
    require(coords[0] >= 0 && coords[0] < s.n, ErrorCode::VertexOutOfRange, "coordinate out of range");
    return coords[0];
  }
  const Index R = coordinate_radix(s);
  const Index shift = R / 2;
  Index v = 0;
  for (std::size_t i = coords.size(); i-- > 0;) {
    Index digit = coords[i] + shift;
    require(digit >= 0 && digit < R, ErrorCode::VertexOutOfRange, "coordinate out of range");
    v = v * R + digit;
  }
  return v;
}

Vertex origin(const GraphSpec& s) {
  return encode(s, std::vector<int>(static_cast<std::size_t>(coordinate_count(s)), 0));
}

std::vector<Vertex> neighbors(const GraphSpec& s, Vertex v) {
  Graph g(s);
  require(v >= 0 && v < g.vertex_count(), ErrorCode::VertexOutOfRange, "vertex " + std::to_string(v));
  std::vector<Vertex> out;
  g.all_neighbors(v, out);
  return out;
}

std::vector<Edge> edge_list(const GraphSpec& s) {
  Graph g(s);
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(g.edge_count()));
  std::vector<Vertex> upper;
  EdgeIndex e = 0;
  for (Vertex u = 0; u < g.vertex_count(); ++u) {
    g.upper_neighbors(u, upper);
    for (Vertex v : upper) out.push_back({e++, u, v});
  }
  return out;
}

// --- Graph -----------------------------------------------------------------

Graph::Graph(const GraphSpec& spec) : spec_(spec) {
  validate(spec_);
  vertices_ = perc::vertex_count(spec_);
  degree_ = underlying_degree(spec_);
  edges_ = vertices_ * degree_ / 2;
  if (complete_like()) return;
  const Index R = coordinate_radix(spec_);
  radix_pow_.resize(static_cast<std::size_t>(spec_.d) + 1);
  radix_pow_[0] = 1;
  for (int i = 0; i < spec_.d; ++i) radix_pow_[i + 1] = radix_pow_[i] * R;
  offsets_.resize(static_cast<std::size_t>(vertices_) + 1);
  offsets_[0] = 0;
  std::vector<Vertex> upper;
  for (Vertex u = 0; u < vertices_; ++u) {
    upper_neighbors(u, upper);
    offsets_[u + 1] = offsets_[u] + static_cast<Index>(upper.size());
  }
}

bool Graph::complete_like() const noexcept {
  return spec_.family == Family::Complete || spec_.family == Family::ErdosRenyi;
}

EdgeIndex Graph::edges_before(Vertex u) const {
  if (complete_like()) return u * (vertices_ - 1) - u * (u - 1) / 2;
  return offsets_[static_cast<std::size_t>(u)];
}

void Graph::all_neighbors(Vertex u, std::vector<Vertex>& out) const {
  out.clear();
  if (complete_like()) {
    out.reserve(static_cast<std::size_t>(vertices_ - 1));
    for (Vertex v = 0; v < vertices_; ++v)
      if (v != u) out.push_back(v);
    return;
  }
  const Index R = coordinate_radix(spec_);
  const int d = spec_.d;
  std::array<Index, 64> digit{};
  for (int i = 0; i < d; ++i) digit[i] = (u / radix_pow_[i]) % R;

  switch (spec_.family) {
    case Family::TorusNN:
      for (int i = 0; i < d; ++i) {
        Index up = (digit[i] + 1) % R;
        Index down = (digit[i] + R - 1) % R;
        out.push_back(u + (up - digit[i]) * radix_pow_[i]);
        out.push_back(u + (down - digit[i]) * radix_pow_[i]);
      }
      break;
    case Family::Hypercube:
      for (int i = 0; i < d; ++i) out.push_back(u + (1 - 2 * digit[i]) * radix_pow_[i]);
      break;
    case Family::Hamming:
      for (int i = 0; i < d; ++i)
        for (Index c = 0; c < R; ++c)
          if (c != digit[i]) out.push_back(u + (c - digit[i]) * radix_pow_[i]);
      break;
    case Family::TorusSpread: {
      const int L = spec_.L;
      std::vector<int> delta(static_cast<std::size_t>(d), -L);
      while (true) {
        bool zero = std::all_of(delta.begin(), delta.end(), [](int x) { return x == 0; });
        if (!zero) {
          Index v = u;
          for (int i = 0; i < d; ++i) {
            Index c = ((digit[i] + delta[i]) % R + R) % R;
            v += (c - digit[i]) * radix_pow_[i];
          }
          out.push_back(v);
        }
        int i = 0;
        while (i < d && delta[i] == L) delta[i++] = -L;
        if (i == d) break;
        ++delta[i];
      }
      break;
    }
    default: break;
  }
  std::sort(out.begin(), out.end());
}

void Graph::upper_neighbors(Vertex u, std::vector<Vertex>& out) const {
  if (complete_like()) {
    out.clear();
    for (Vertex v = u + 1; v < vertices_; ++v) out.push_back(v);
    return;
  }
  if (spec_.family == Family::TorusNN) {
    out.clear();
    const Index R = radix_pow_[1];
    for (int i = 0; i < spec_.d; ++i) {
      const Index digit = (u / radix_pow_[i]) % R;
      const Index up = digit + 1 < R ? u + radix_pow_[i] : u - digit * radix_pow_[i];
      const Index down = digit > 0 ? u - radix_pow_[i] : u + (R - 1) * radix_pow_[i];
      if (up > u) out.push_back(up);
      if (down > u) out.push_back(down);
    }
    std::sort(out.begin(), out.end());
    return;
  }
  all_neighbors(u, out);
  out.erase(out.begin(), std::upper_bound(out.begin(), out.end(), u));
}

std::pair<Vertex, Vertex> Graph::endpoints(EdgeIndex e) const {
  require(e >= 0 && e < edges_, ErrorCode::InvalidArgument, "edge index out of range");
  if (complete_like()) {
    // Largest u with edges_before(u) <= e.
    Vertex lo = 0, hi = vertices_ - 1;
    while (lo < hi) {
      Vertex mid = (lo + hi + 1) / 2;
      if (edges_before(mid) <= e) lo = mid; else hi = mid - 1;
    }
    return {lo, lo + 1 + (e - edges_before(lo))};
  }
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), e);
  Vertex u = static_cast<Vertex>(it - offsets_.begin()) - 1;
  std::vector<Vertex> upper;
  upper_neighbors(u, upper);
  return {u, upper[static_cast<std::size_t>(e - offsets_[static_cast<std::size_t>(u)])]};
}

}  // namespace perc
