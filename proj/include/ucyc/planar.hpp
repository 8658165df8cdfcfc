#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ucyc/bubbles.hpp"
#include "ucyc/diagram.hpp"

namespace ucyc {

/// Diagrams as planar graphs. Every crossing is a rotated upward crossing with
/// slots BL=0, BR=1, TR=2, TL=3 in counterclockwise order; the strand of
/// color `a` runs BL->TR and the strand of color `b` runs BR->TL. Cups and caps
/// disappear into edges, so isotopic diagrams give identical graphs.
///
/// Half-edge h walks edge h/2 along the strand (h even) or against it (h odd);
/// the face of h is the face on its left. Boundary ports are numbered
/// counterclockwise: bottom points left to right, then top points right to
/// left. The designated face is the one containing the gap between the last
/// bottom port and the first top port, i.e. the rightmost region.

struct PEnd {
  static constexpr int kBoundary = -1;
  static constexpr int kNone = -2;
  int v = kNone;  // crossing index, kBoundary or kNone
  int slot = 0;   // crossing slot or port index
  bool operator==(const PEnd&) const = default;
};

struct PEdge {
  PEnd tail, head;
  int color = 0;
  int dots = 0;
  bool alive = true;
};

struct PCross {
  int a = 0, b = 0;
  int edge[4] = {-1, -1, -1, -1};
  bool alive = true;
  int color_at(int slot) const { return slot % 2 == 0 ? a : b; }
};

/// A bubble in spade form relative to the face it sits in.
struct BubbleSym {
  int color = 0;
  bool cw = true;
  int m = 0;
  auto operator<=>(const BubbleSym&) const = default;
};

/// A bubble waiting to be slid into the designated face; he = -1 means it is
/// already there.
struct Deco {
  int he = -1;
  BubbleSym sym;
};

/// A closed component not attached to the boundary: its outer face is the
/// face of `outer_he`, which lies inside the face of `container_he`
/// (-1: the designated face).
struct Floating {
  int outer_he = -1;
  int container_he = -1;
};

/// Faces of a graph: cycles of half-edges, grouped into geometric faces
/// through containment of floating components. Geometric face 0 is the
/// designated face.
struct FaceInfo {
  std::vector<int> cyc;                  // half-edge -> cycle (-1 if dead)
  std::vector<std::vector<int>> cycles;  // cycle -> half-edges in order
  std::vector<int> geo;                  // cycle -> geometric face
  int ngeo = 1;
  std::vector<Weight> weight;  // per geometric face
  int geo_of(int he) const { return he < 0 ? 0 : geo[cyc[he]]; }
};

class PlanarGraph {
 public:
  PlanarGraph() = default;
  PlanarGraph(const CartanDatum* datum, Seq bottom, Seq top, Weight lambda);

  const CartanDatum& datum() const { return *datum_; }
  const Seq& bottom() const { return bottom_; }
  const Seq& top() const { return top_; }
  const Weight& lambda() const { return lambda_; }
  int ports() const { return static_cast<int>(bottom_.size() + top_.size()); }
  OneMorphism source() const { return {bottom_, lambda_, 0}; }
  OneMorphism target() const { return {top_, lambda_, 0}; }

  // Raw structure; callers keep it consistent.
  std::vector<PCross> cross;
  std::vector<PEdge> edges;
  std::vector<int> port_edge;
  /// Canonical bubbles of the designated face.
  BubbleMonomial des;
  std::vector<Deco> decos;
  std::vector<Floating> floating;

  int he_count() const { return 2 * static_cast<int>(edges.size()); }
  static int rev(int h) { return h ^ 1; }
  /// End the half-edge walks into / out of.
  PEnd arrival(int h) const;
  PEnd departure(int h) const;
  /// Half-edge leaving end `e` (which must be a crossing slot or port).
  int leaving(PEnd e) const;
  int next(int h) const;
  /// Port index as seen from its side: bottom position k -> k, top position t -> nb + nt-1-t.
  int top_port(int t) const { return static_cast<int>(bottom_.size() + top_.size()) - 1 - t; }
  Strand port_strand(int port) const;

  int alive_crossings() const;
  /// Half-edge arriving at the last bottom port (its face is designated); -1 without boundary.
  int designated_he() const;
  FaceInfo faces() const;
  /// Connected component per alive crossing/edge; ports count as one vertex.
  std::vector<int> edge_components(int* count) const;

  /// Drops dead elements and renumbers canonically (traversal from the ports,
  /// then floating components in order). Without boundary every component is
  /// floating and the designated face is the unbounded one. Returns the new
  /// index of every old crossing.
  std::vector<int> canonicalize();
  /// Canonical serialization; equal keys mean equal diagrams.
  std::string key() const;
  /// Structural self-check; throws std::logic_error.
  void validate() const;

 private:
  const CartanDatum* datum_ = nullptr;
  Seq bottom_, top_;
  Weight lambda_;
};

/// Slices to graph. Bubble generators and closed components are kept as
/// decorations and floating components.
/// `gen_crossing` receives, per generator, its crossing in the result (-1
/// for other generators).
PlanarGraph graph_from_diagram(const CartanDatum& datum, const Diagram& d, std::vector<int>* gen_crossing = nullptr);
/// Graph to slices; floating components and bubbles are drawn in their faces.
Diagram graph_to_diagram(const PlanarGraph& g);
/// Floating component `index` together with everything nested inside it, as
/// a closed graph whose outer face has the component's outside weight; and
/// the rest of the graph.
std::pair<PlanarGraph, PlanarGraph> split_floating(const PlanarGraph& g, int index);

/// Pieces of a local replacement: remove `site` crossings, add crossings,
/// then join endpoints. An endpoint is either the outside end of an edge that
/// touched a removed crossing (OuterSlot) or a slot of a new crossing.
struct SurgeryEnd {
  bool outer = true;
  int v = 0;     // removed crossing (outer) or index into `add` (new)
  int slot = 0;
};
struct SurgeryLink {
  SurgeryEnd x, y;
  int dots = 0;
};
/// A bubble placed on the left of a link walked from x to y.
struct SurgeryBubble {
  int link = 0;
  bool left = true;
  BubbleSym sym;
};
struct Surgery {
  std::vector<int> site;
  /// Edges between site crossings that belong to the replaced pattern; other
  /// edges touching the site are kept and rejoined through the links.
  std::vector<int> remove_edges;
  std::vector<PCross> add;
  std::vector<SurgeryLink> links;
  std::vector<SurgeryBubble> bubbles;
};

/// Applies the surgery; faces, decorations and floating components are
/// carried over. Throws std::logic_error on inconsistent input.
PlanarGraph apply_surgery(const PlanarGraph& g, const Surgery& s);

}  // namespace ucyc
