#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clutor/error.hpp"

namespace clutor {

// Side s of a triangle runs from its corner s to corner s+1 (mod 3), in the
// counterclockwise order induced by the surface orientation.
struct SlotRef {
  int tri = -1;
  int side = -1;
  bool operator==(const SlotRef&) const = default;
};

// Each edge is glued to exactly two sides; the forward slot traverses the
// edge along its intrinsic direction, the backward slot reversed. Punctures
// are not represented explicitly: they are the corner cycles.
struct EdgeSlots {
  SlotRef forward, backward;
};

struct FlipRecord {
  int edge = -1;       // index of the flipped edge (reused by the new edge)
  SlotRef fwd_before;  // forward slot of the old edge (t_f, s_f)
  SlotRef bwd_before;  // backward slot (t_r, s_r)
};

// Label transport of a homeomorphism or flip between two triangulations with
// identically indexed cells: edge e maps to edge_image[e].first, reversing
// direction when .second is set; triangle t maps to tri_image[t].first with
// corner k landing on corner k + rotation (mod 3).
struct Relabeling {
  std::vector<std::pair<int, bool>> edge_image;
  std::vector<std::pair<int, int>> tri_image;

  static Relabeling identity(int nedges, int ntris);
  Relabeling then(const Relabeling& next) const;
  Relabeling inverse() const;
  bool is_identity() const;
};

class Triangulation {
 public:
  Triangulation(std::vector<std::array<int, 3>> edge_of,
                std::vector<EdgeSlots> edges);

  static Triangulation once_punctured_torus();
  static Triangulation four_punctured_sphere();

  int triangle_count() const { return static_cast<int>(edge_of_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int edge_of(int tri, int side) const { return edge_of_.at(tri).at(side); }
  const EdgeSlots& slots(int edge) const { return edges_.at(edge); }
  bool is_forward(int tri, int side) const;

  int puncture_count() const;
  // For each puncture, the cyclic sequence of edges crossed when walking
  // once around it (each edge end contributes one crossing).
  std::vector<std::vector<int>> puncture_edge_cycles() const;
  // Of the punctured surface: F - E (ideal vertices carry no Euler weight).
  int euler_characteristic() const { return triangle_count() - edge_count(); }
  int genus() const;

  // All invariant violations, empty when valid.
  std::vector<std::string> validate() const;
  void require_valid() const;

  bool flippable(int edge) const;
  std::pair<Triangulation, FlipRecord> flip(int edge) const;

  bool operator==(const Triangulation& o) const;

  std::string to_json() const;
  static Triangulation from_json(const std::string& text);

 private:
  std::vector<std::array<int, 3>> edge_of_;
  std::vector<EdgeSlots> edges_;
};

// One torus letter: flip one edge of the standard once-punctured torus, then
// relabel back. The tables realize the standard mapping-class generators on
// the triangulation cut out by the lines x=0 (edge a), x=y (b), y=0 (c).
struct TorusMove {
  int flip_edge;
  Relabeling relabel;  // labels of T -> labels of flip(T)
};

const TorusMove& torus_move_L();
const TorusMove& torus_move_R();

struct MappingWord {
  // Builtin form: a word over {L, R} on the once-punctured torus.
  std::string letters;
  // Generic form: explicit flips (edge indices in the successively flipped
  // triangulations) plus the final relabeling back to the start.
  std::vector<int> generic_flips;
  std::optional<Relabeling> generic_relabel;

  bool is_generic() const { return generic_relabel.has_value(); }
  static MappingWord torus_word(std::string w) { return {std::move(w), {}, {}}; }
  static MappingWord generic(std::vector<int> flips, Relabeling relabel) {
    return {{}, std::move(flips), std::move(relabel)};
  }
};

// Expands a word into one flip sequence plus a single composed relabeling
// carrying the final triangulation's labels back to the original.
struct FlipProgram {
  std::vector<int> flips;  // edge to flip in the i-th triangulation
  Relabeling relabel;      // labels of T -> labels of the final triangulation
};

FlipProgram word_to_flips(const Triangulation& tri, const MappingWord& word);

}  // namespace clutor
