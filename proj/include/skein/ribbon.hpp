#pragma once

// Surfaces assembled from discs (vertices) and bands (edges), where a band is
// either untwisted (handle) or half-twisted (moebius). Boundary components are
// found by walking band sides; the parity identity n + m + chi = 0 mod 2 is
// checked over every choice of boundary orientations.

#include <cstdint>
#include <string>
#include <vector>

namespace skein::ribbon {

enum class EdgeType { Handle, Moebius };

struct RibbonEdge {
  int ends[2];  // half-edge ids; ends[0] is the canonical end
  EdgeType type;
};

class RibbonGraph {
 public:
  // rotations[v] lists half-edge ids in cyclic order around vertex v.
  // Half-edge ids must be 0..H-1, each used exactly once by a rotation and
  // exactly once by an edge; otherwise throws MalformedGraph.
  RibbonGraph(std::vector<std::vector<int>> rotations, std::vector<RibbonEdge> edges);

  // Convenience constructors for string-labelled half-edges.
  static RibbonGraph from_labels(const std::vector<std::vector<std::string>>& rotations,
                                 const std::vector<std::pair<std::pair<std::string, std::string>, EdgeType>>& edges);

  int vertex_count() const { return static_cast<int>(rotations_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int half_edge_count() const { return static_cast<int>(vertex_of_.size()); }
  int euler_characteristic() const { return vertex_count() - edge_count(); }

  const std::vector<std::vector<int>>& rotations() const { return rotations_; }
  const std::vector<RibbonEdge>& edges() const { return edges_; }

  int vertex_of(int h) const { return vertex_of_[h]; }
  int edge_of(int h) const { return edge_of_[h]; }
  int partner(int h) const;
  // Next half-edge around the vertex in direction dir (+1 or -1).
  int rotate(int h, int dir) const;

 private:
  std::vector<std::vector<int>> rotations_;
  std::vector<RibbonEdge> edges_;
  std::vector<int> vertex_of_, slot_of_, edge_of_;
};

// One pass along one side of a band.
struct BandStep {
  int edge;
  int side;       // +1 or -1, in the frame of the canonical end's vertex
  int direction;  // +1 from canonical end to the other end, -1 otherwise
};

struct BoundaryTrace {
  // One cyclic sequence of band steps per boundary component. Components of
  // bare discs (vertices without half-edges) are empty.
  std::vector<std::vector<BandStep>> components;
  int n() const { return static_cast<int>(components.size()); }
};

BoundaryTrace trace_boundary(const RibbonGraph& g);

// orientations[c] = +1 keeps the traced direction of component c, -1 reverses it.
int count_moebius_same_direction(const RibbonGraph& g, const BoundaryTrace& trace,
                                 const std::vector<int>& orientations);

struct LemmaResult {
  bool holds = true;
  int n = 0;
  int chi = 0;
  int assignments = 0;
  std::vector<int> m_values;  // one per assignment, bitmask order
};

// n + m + chi even for every one of the 2^n orientation assignments.
LemmaResult lemma_details(const RibbonGraph& g);
bool lemma_check(const RibbonGraph& g);

// Random graph with 1..max_vertices vertices, 0..max_edges edges, shuffled
// rotations and independently random edge types.
RibbonGraph random_graph(std::uint64_t seed, int max_vertices = 6, int max_edges = 10);

}  // namespace skein::ribbon
