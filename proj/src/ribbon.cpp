#include "skein/ribbon.hpp"

#include <algorithm>
#include <map>
#include <random>

#include <boost/random/uniform_int_distribution.hpp>

#include "skein/errors.hpp"

namespace skein::ribbon {

RibbonGraph::RibbonGraph(std::vector<std::vector<int>> rotations, std::vector<RibbonEdge> edges)
    : rotations_(std::move(rotations)), edges_(std::move(edges)) {
  size_t h_count = 0;
  for (const auto& r : rotations_) h_count += r.size();
  vertex_of_.assign(h_count, -1);
  slot_of_.assign(h_count, -1);
  edge_of_.assign(h_count, -1);
  for (size_t v = 0; v < rotations_.size(); ++v)
    for (size_t k = 0; k < rotations_[v].size(); ++k) {
      int h = rotations_[v][k];
      if (h < 0 || static_cast<size_t>(h) >= h_count) throw MalformedGraph("half-edge id out of range");
      if (vertex_of_[h] != -1) throw MalformedGraph("half-edge appears in two rotations");
      vertex_of_[h] = static_cast<int>(v);
      slot_of_[h] = static_cast<int>(k);
    }
  if (edges_.size() * 2 != h_count) throw MalformedGraph("edges do not pair all half-edges");
  for (size_t e = 0; e < edges_.size(); ++e)
    for (int h : edges_[e].ends) {
      if (h < 0 || static_cast<size_t>(h) >= h_count) throw MalformedGraph("edge end out of range");
      if (edge_of_[h] != -1) throw MalformedGraph("half-edge used by two edges");
      edge_of_[h] = static_cast<int>(e);
    }
}

RibbonGraph RibbonGraph::from_labels(
    const std::vector<std::vector<std::string>>& rotations,
    const std::vector<std::pair<std::pair<std::string, std::string>, EdgeType>>& edges) {
  std::map<std::string, int> ids;
  std::vector<std::vector<int>> rot;
  for (const auto& r : rotations) {
    auto& out = rot.emplace_back();
    for (const auto& label : r) {
      auto [it, inserted] = ids.emplace(label, static_cast<int>(ids.size()));
      if (!inserted) throw MalformedGraph("half-edge '" + label + "' appears twice in rotations");
      out.push_back(it->second);
    }
  }
  std::vector<RibbonEdge> es;
  for (const auto& [pair, type] : edges) {
    auto a = ids.find(pair.first);
    auto b = ids.find(pair.second);
    if (a == ids.end() || b == ids.end()) throw MalformedGraph("edge refers to an unknown half-edge");
    es.push_back({{a->second, b->second}, type});
  }
  return RibbonGraph(std::move(rot), std::move(es));
}

int RibbonGraph::partner(int h) const {
  const auto& e = edges_[edge_of_[h]];
  return e.ends[0] == h ? e.ends[1] : e.ends[0];
}

int RibbonGraph::rotate(int h, int dir) const {
  const auto& r = rotations_[vertex_of_[h]];
  int k = static_cast<int>(r.size());
  return r[((slot_of_[h] + dir) % k + k) % k];
}

BoundaryTrace trace_boundary(const RibbonGraph& g) {
  // State (h, o): standing at half-edge h with local direction o. Step: walk
  // along the disc boundary to h1 = rotate(h, o), cross the band to its
  // partner, and reverse o on a moebius band.
  const int H = g.half_edge_count();
  auto index = [](int h, int o) { return 2 * h + (o > 0 ? 0 : 1); };
  std::vector<int> orbit_of(2 * H, -1);
  std::vector<std::vector<BandStep>> orbits;
  std::vector<std::vector<int>> orbit_states;

  for (int h0 = 0; h0 < H; ++h0)
    for (int o0 : {1, -1}) {
      if (orbit_of[index(h0, o0)] != -1) continue;
      int id = static_cast<int>(orbits.size());
      auto& steps = orbits.emplace_back();
      auto& states = orbit_states.emplace_back();
      int h = h0, o = o0;
      while (orbit_of[index(h, o)] == -1) {
        orbit_of[index(h, o)] = id;
        states.push_back(index(h, o));
        int h1 = g.rotate(h, o);
        int h2 = g.partner(h1);
        const RibbonEdge& e = g.edges()[g.edge_of(h1)];
        int o2 = e.type == EdgeType::Moebius ? -o : o;
        if (e.ends[0] == h1)
          steps.push_back({g.edge_of(h1), -o, +1});
        else
          steps.push_back({g.edge_of(h1), o2, -1});
        h = h2;
        o = o2;
      }
    }

  // Orbits come in mutually reverse pairs; keep the first of each pair.
  // The reverse of the walk through state (h, o) passes through (h1, -o)
  // with h1 = rotate(h, o).
  std::vector<int> keep(orbits.size(), -1);
  BoundaryTrace trace;
  for (size_t id = 0; id < orbits.size(); ++id) {
    if (keep[id] != -1) continue;
    int s = orbit_states[id].front();
    int h = s / 2, o = (s % 2 == 0) ? 1 : -1;
    int rev = orbit_of[index(g.rotate(h, o), -o)];
    keep[id] = 1;
    if (rev != static_cast<int>(id)) keep[rev] = 0;
    trace.components.push_back(orbits[id]);
  }
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.rotations()[v].empty()) trace.components.emplace_back();
  return trace;
}

int count_moebius_same_direction(const RibbonGraph& g, const BoundaryTrace& trace,
                                 const std::vector<int>& orientations) {
  if (orientations.size() != trace.components.size())
    throw Error("one orientation per boundary component is required");
  std::vector<std::vector<int>> dirs(g.edge_count());
  for (size_t c = 0; c < trace.components.size(); ++c)
    for (const auto& step : trace.components[c]) dirs[step.edge].push_back(step.direction * orientations[c]);
  int m = 0;
  for (int e = 0; e < g.edge_count(); ++e) {
    if (g.edges()[e].type != EdgeType::Moebius) continue;
    if (dirs[e].size() != 2) throw Error("band side traversal count is not two");
    if (dirs[e][0] == dirs[e][1]) ++m;
  }
  return m;
}

LemmaResult lemma_details(const RibbonGraph& g) {
  BoundaryTrace trace = trace_boundary(g);
  LemmaResult r;
  r.n = trace.n();
  r.chi = g.euler_characteristic();
  if (r.n > 24) throw Error("too many boundary components for exhaustive orientation check");
  r.assignments = 1 << r.n;
  std::vector<int> orient(r.n);
  for (int mask = 0; mask < r.assignments; ++mask) {
    for (int c = 0; c < r.n; ++c) orient[c] = (mask >> c) & 1 ? -1 : 1;
    int m = count_moebius_same_direction(g, trace, orient);
    r.m_values.push_back(m);
    if (((r.n + m + r.chi) % 2 + 2) % 2 != 0) r.holds = false;
  }
  return r;
}

bool lemma_check(const RibbonGraph& g) { return lemma_details(g).holds; }

RibbonGraph random_graph(std::uint64_t seed, int max_vertices, int max_edges) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](int lo, int hi) { return boost::random::uniform_int_distribution<int>(lo, hi)(rng); };
  int V = uniform(1, max_vertices);
  int E = uniform(0, max_edges);
  std::vector<std::vector<int>> rot(V);
  for (int h = 0; h < 2 * E; ++h) rot[uniform(0, V - 1)].push_back(h);
  for (auto& r : rot)
    for (int k = static_cast<int>(r.size()) - 1; k > 0; --k) std::swap(r[k], r[uniform(0, k)]);
  std::vector<int> perm(2 * E);
  for (int h = 0; h < 2 * E; ++h) perm[h] = h;
  for (int k = 2 * E - 1; k > 0; --k) std::swap(perm[k], perm[uniform(0, k)]);
  std::vector<RibbonEdge> edges;
  for (int e = 0; e < E; ++e)
    edges.push_back({{perm[2 * e], perm[2 * e + 1]}, uniform(0, 1) ? EdgeType::Moebius : EdgeType::Handle});
  return RibbonGraph(std::move(rot), std::move(edges));
}

}  // namespace skein::ribbon
