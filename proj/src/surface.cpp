#include "clutor/surface.hpp"

#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace clutor {

using nlohmann::json;

Relabeling Relabeling::identity(int nedges, int ntris) {
  Relabeling r;
  r.edge_image.reserve(nedges);
  for (int e = 0; e < nedges; ++e) r.edge_image.emplace_back(e, false);
  r.tri_image.reserve(ntris);
  for (int t = 0; t < ntris; ++t) r.tri_image.emplace_back(t, 0);
  return r;
}

Relabeling Relabeling::then(const Relabeling& next) const {
  Relabeling r;
  r.edge_image.reserve(edge_image.size());
  for (const auto& [e, rev] : edge_image) {
    auto [e2, rev2] = next.edge_image.at(e);
    r.edge_image.emplace_back(e2, rev != rev2);
  }
  r.tri_image.reserve(tri_image.size());
  for (const auto& [t, rot] : tri_image) {
    auto [t2, rot2] = next.tri_image.at(t);
    r.tri_image.emplace_back(t2, (rot + rot2) % 3);
  }
  return r;
}

Relabeling Relabeling::inverse() const {
  Relabeling r;
  r.edge_image.assign(edge_image.size(), {-1, false});
  r.tri_image.assign(tri_image.size(), {-1, 0});
  for (std::size_t e = 0; e < edge_image.size(); ++e)
    r.edge_image.at(edge_image[e].first) = {static_cast<int>(e),
                                            edge_image[e].second};
  for (std::size_t t = 0; t < tri_image.size(); ++t)
    r.tri_image.at(tri_image[t].first) = {static_cast<int>(t),
                                          (3 - tri_image[t].second) % 3};
  return r;
}

bool Relabeling::is_identity() const {
  for (std::size_t e = 0; e < edge_image.size(); ++e)
    if (edge_image[e] != std::make_pair(static_cast<int>(e), false))
      return false;
  for (std::size_t t = 0; t < tri_image.size(); ++t)
    if (tri_image[t] != std::make_pair(static_cast<int>(t), 0)) return false;
  return true;
}

Triangulation::Triangulation(std::vector<std::array<int, 3>> edge_of,
                             std::vector<EdgeSlots> edges)
    : edge_of_(std::move(edge_of)), edges_(std::move(edges)) {}

Triangulation Triangulation::once_punctured_torus() {
  // R^2/Z^2 cut by the lines x=0 (edge a=0), x=y (b=1), y=0 (c=2). Triangle 0
  // is below the diagonal with counterclockwise corners (0,0),(1,0),(1,1);
  // triangle 1 above it with corners (0,0),(1,1),(0,1).
  std::vector<std::array<int, 3>> edge_of = {{2, 0, 1}, {1, 2, 0}};
  std::vector<EdgeSlots> edges = {
      {{0, 1}, {1, 2}},  // a
      {{1, 0}, {0, 2}},  // b
      {{0, 0}, {1, 1}},  // c
  };
  return Triangulation(std::move(edge_of), std::move(edges));
}

Triangulation Triangulation::four_punctured_sphere() {
  // Boundary of a tetrahedron, faces oriented outward.
  std::vector<std::array<int, 3>> edge_of = {
      {0, 1, 2}, {3, 1, 4}, {5, 2, 3}, {4, 0, 5}};
  std::vector<EdgeSlots> edges = {
      {{0, 0}, {3, 1}}, {{0, 1}, {1, 1}}, {{0, 2}, {2, 1}},
      {{1, 0}, {2, 2}}, {{1, 2}, {3, 0}}, {{2, 0}, {3, 2}},
  };
  return Triangulation(std::move(edge_of), std::move(edges));
}

bool Triangulation::is_forward(int tri, int side) const {
  return edges_.at(edge_of(tri, side)).forward == SlotRef{tri, side};
}

int Triangulation::puncture_count() const {
  // Punctures are the corner cycles: walking around a corner crosses its
  // outgoing side onto the far end of the matching slot.
  std::set<std::pair<int, int>> seen;
  int count = 0;
  for (int t = 0; t < triangle_count(); ++t) {
    for (int k = 0; k < 3; ++k) {
      if (seen.count({t, k})) continue;
      ++count;
      int ct = t, ck = k;
      do {
        seen.insert({ct, ck});
        const EdgeSlots& es = edges_.at(edge_of(ct, ck));
        SlotRef other =
            (es.forward == SlotRef{ct, ck}) ? es.backward : es.forward;
        ct = other.tri;
        ck = (other.side + 1) % 3;
      } while (!(ct == t && ck == k));
    }
  }
  return count;
}

std::vector<std::vector<int>> Triangulation::puncture_edge_cycles() const {
  std::set<std::pair<int, int>> seen;
  std::vector<std::vector<int>> cycles;
  for (int t = 0; t < triangle_count(); ++t) {
    for (int k = 0; k < 3; ++k) {
      if (seen.count({t, k})) continue;
      std::vector<int> cycle;
      int ct = t, ck = k;
      do {
        seen.insert({ct, ck});
        int e = edge_of(ct, ck);
        cycle.push_back(e);
        const EdgeSlots& es = edges_.at(e);
        SlotRef other =
            (es.forward == SlotRef{ct, ck}) ? es.backward : es.forward;
        ct = other.tri;
        ck = (other.side + 1) % 3;
      } while (!(ct == t && ck == k));
      cycles.push_back(std::move(cycle));
    }
  }
  return cycles;
}

int Triangulation::genus() const {
  // chi(closed surface) = m - E + F = 2 - 2g
  int chi_closed = puncture_count() - edge_count() + triangle_count();
  return (2 - chi_closed) / 2;
}

std::vector<std::string> Triangulation::validate() const {
  std::vector<std::string> errors;
  if (edge_of_.empty()) {
    errors.push_back("empty triangulation");
    return errors;
  }
  for (int t = 0; t < triangle_count(); ++t)
    for (int s = 0; s < 3; ++s)
      if (edge_of_[t][s] < 0 || edge_of_[t][s] >= edge_count()) {
        errors.push_back("triangle " + std::to_string(t) + " side " +
                         std::to_string(s) + ": dangling slot");
        return errors;
      }

  // Every edge glued to exactly two slots, one per direction.
  std::map<int, std::vector<std::pair<SlotRef, bool>>> uses;
  for (int t = 0; t < triangle_count(); ++t)
    for (int s = 0; s < 3; ++s) {
      const EdgeSlots& es = edges_.at(edge_of_[t][s]);
      SlotRef self{t, s};
      if (es.forward == self)
        uses[edge_of_[t][s]].push_back({self, true});
      else if (es.backward == self)
        uses[edge_of_[t][s]].push_back({self, false});
      else
        errors.push_back("triangle " + std::to_string(t) + " side " +
                         std::to_string(s) +
                         ": edge record does not point back (dangling slot)");
    }
  for (int e = 0; e < edge_count(); ++e) {
    auto it = uses.find(e);
    if (it == uses.end() || it->second.size() != 2) {
      errors.push_back("edge " + std::to_string(e) +
                       ": not glued to exactly two slots");
      continue;
    }
    if (it->second[0].second == it->second[1].second)
      errors.push_back("edge " + std::to_string(e) +
                       ": orientation clash (gluing must reverse direction)");
    if (it->second[0].first.tri == it->second[1].first.tri)
      errors.push_back("edge " + std::to_string(e) + ": self-folded");
  }

  if (errors.empty() && genus() == 0 && puncture_count() <= 3)
    errors.push_back("genus-0 needs >3 punctures");
  return errors;
}

void Triangulation::require_valid() const {
  auto errors = validate();
  if (!errors.empty()) {
    std::string msg = "invalid triangulation: ";
    for (std::size_t i = 0; i < errors.size(); ++i)
      msg += (i ? "; " : "") + errors[i];
    throw ValidationError(msg);
  }
}

bool Triangulation::flippable(int edge) const {
  if (edge < 0 || edge >= edge_count()) return false;
  const EdgeSlots& es = edges_.at(edge);
  return es.forward.tri != es.backward.tri;
}

std::pair<Triangulation, FlipRecord> Triangulation::flip(int edge) const {
  if (!flippable(edge))
    throw ValidationError("edge " + std::to_string(edge) + " is not flippable");
  const EdgeSlots& es = edges_.at(edge);
  const int tf = es.forward.tri, sf = es.forward.side;
  const int tr = es.backward.tri, sr = es.backward.side;

  // The union of the two triangles is a quadrilateral with the flipped edge
  // as diagonal; the new diagonal joins the apexes, directed from the
  // forward triangle's apex to the backward one's. Replacement triangles:
  //   tf' = (B, C, C') and tr' = (A, C', C)
  // where A,B are the old diagonal's endpoints and C, C' the apexes.
  auto new_edge_of = edge_of_;
  std::vector<std::array<bool, 3>> new_fwd(triangle_count());
  for (int t = 0; t < triangle_count(); ++t)
    for (int s = 0; s < 3; ++s) new_fwd[t][s] = is_forward(t, s);

  auto old_flag = [&](int t, int s) { return is_forward(t, s); };
  new_edge_of[tf] = {edge_of_[tf][(sf + 1) % 3], edge,
                     edge_of_[tr][(sr + 2) % 3]};
  new_fwd[tf] = {old_flag(tf, (sf + 1) % 3), true, old_flag(tr, (sr + 2) % 3)};
  new_edge_of[tr] = {edge_of_[tr][(sr + 1) % 3], edge,
                     edge_of_[tf][(sf + 2) % 3]};
  new_fwd[tr] = {old_flag(tr, (sr + 1) % 3), false, old_flag(tf, (sf + 2) % 3)};

  std::vector<EdgeSlots> new_edges(edge_count(), EdgeSlots{{-1, -1}, {-1, -1}});
  for (int t = 0; t < triangle_count(); ++t)
    for (int s = 0; s < 3; ++s) {
      EdgeSlots& slot = new_edges.at(new_edge_of[t][s]);
      (new_fwd[t][s] ? slot.forward : slot.backward) = SlotRef{t, s};
    }

  Triangulation result(std::move(new_edge_of), std::move(new_edges));
  FlipRecord record{edge, {tf, sf}, {tr, sr}};
  return {std::move(result), record};
}

bool Triangulation::operator==(const Triangulation& o) const {
  if (edge_of_ != o.edge_of_) return false;
  for (int e = 0; e < edge_count(); ++e)
    if (edges_[e].forward != o.edges_[e].forward ||
        edges_[e].backward != o.edges_[e].backward)
      return false;
  return true;
}

std::string Triangulation::to_json() const {
  json tris = json::array();
  for (int t = 0; t < triangle_count(); ++t) {
    json slots = json::array();
    for (int s = 0; s < 3; ++s) slots.push_back({t, s});
    tris.push_back(slots);
  }
  json gluing = json::array();
  for (int e = 0; e < edge_count(); ++e) {
    const EdgeSlots& es = edges_[e];
    gluing.push_back({{es.forward.tri, es.forward.side},
                      {es.backward.tri, es.backward.side}});
  }
  json out = {{"triangles", tris}, {"gluing", gluing}};
  return out.dump(2);
}

Triangulation Triangulation::from_json(const std::string& text) {
  json in;
  try {
    in = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("triangulation JSON: ") + e.what());
  }
  if (!in.contains("triangles") || !in.contains("gluing"))
    throw ValidationError("triangulation JSON: missing triangles/gluing");

  int ntri = static_cast<int>(in["triangles"].size());
  auto slot_of = [&](const json& j) -> SlotRef {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() ||
        !j[1].is_number_integer())
      throw ValidationError("triangulation JSON: slot must be [tri, corner]");
    SlotRef s{j[0].get<int>(), j[1].get<int>()};
    if (s.tri < 0 || s.tri >= ntri || s.side < 0 || s.side >= 3)
      throw ValidationError("triangulation JSON: slot out of range");
    return s;
  };

  // The triangle list is redundant (triangle t owns slots [t,0..2]) but must
  // be consistent when present.
  for (int t = 0; t < ntri; ++t) {
    const json& row = in["triangles"][t];
    if (!row.is_array() || row.size() != 3)
      throw ValidationError("triangulation JSON: triangle needs 3 slots");
    for (int s = 0; s < 3; ++s) {
      SlotRef sl = slot_of(row[s]);
      if (sl.tri != t || sl.side != s)
        throw ValidationError("triangulation JSON: triangle slot mismatch");
    }
  }

  std::vector<std::array<int, 3>> edge_of(ntri, {-1, -1, -1});
  std::vector<EdgeSlots> edges;
  for (const json& pair : in["gluing"]) {
    if (!pair.is_array() || pair.size() != 2)
      throw ValidationError("triangulation JSON: gluing entry needs 2 slots");
    SlotRef a = slot_of(pair[0]);
    SlotRef b = slot_of(pair[1]);
    int e = static_cast<int>(edges.size());
    edges.push_back(EdgeSlots{a, b});
    for (SlotRef s : {a, b}) {
      if (edge_of[s.tri][s.side] != -1)
        throw ValidationError("triangulation JSON: slot glued twice");
      edge_of[s.tri][s.side] = e;
    }
  }
  for (int t = 0; t < ntri; ++t)
    for (int s = 0; s < 3; ++s)
      if (edge_of[t][s] == -1)
        throw ValidationError("triangulation JSON: unglued slot (dangling)");
  return Triangulation(std::move(edge_of), std::move(edges));
}

const TorusMove& torus_move_L() {
  // (x,y) -> (x, x+y): carries a to a, b to the new slope-2 edge reversed,
  // c to b; realized by the flip at c.
  static const TorusMove move = [] {
    TorusMove m;
    m.flip_edge = 2;
    m.relabel.edge_image = {{0, false}, {2, true}, {1, false}};
    m.relabel.tri_image = {{0, 2}, {1, 1}};
    return m;
  }();
  return move;
}

const TorusMove& torus_move_R() {
  // (x,y) -> (x+y, y): carries a to b, b to the new slope-1/2 edge, c to c;
  // realized by the flip at a.
  static const TorusMove move = [] {
    TorusMove m;
    m.flip_edge = 0;
    m.relabel.edge_image = {{1, false}, {0, false}, {2, false}};
    m.relabel.tri_image = {{1, 2}, {0, 1}};
    return m;
  }();
  return move;
}

namespace {

// Transport of a relabeling A: labels(T) -> labels(Tk) through a flip on
// both sides: labels(flip(T, e)) -> labels(flip(Tk, A(e))). New triangles
// correspond by their role in the flip quadrilateral.
Relabeling transport_through_flip(const Relabeling& a, const Triangulation& t,
                                  int edge, const Triangulation& tk) {
  auto [ge, grev] = a.edge_image.at(edge);
  const EdgeSlots& before = t.slots(edge);
  const EdgeSlots& target = tk.slots(ge);
  Relabeling f = a;
  f.edge_image[edge] = {ge, grev};
  int tf = before.forward.tri, tr = before.backward.tri;
  int tfk = target.forward.tri, trk = target.backward.tri;
  if (!grev) {
    f.tri_image[tf] = {tfk, 0};
    f.tri_image[tr] = {trk, 0};
  } else {
    f.tri_image[tf] = {trk, 0};
    f.tri_image[tr] = {tfk, 0};
  }
  // The old relabeling must already have sent the flip quad onto the target
  // quad; anything else is a bug in the move tables.
  int expect_f = grev ? trk : tfk;
  if (a.tri_image.at(tf).first != expect_f)
    throw InternalConsistencyError("relabeling does not respect flip quad");
  return f;
}

}  // namespace

FlipProgram word_to_flips(const Triangulation& tri, const MappingWord& word) {
  tri.require_valid();
  if (word.is_generic()) {
    FlipProgram p{word.generic_flips, *word.generic_relabel};
    if (static_cast<int>(p.relabel.edge_image.size()) != tri.edge_count() ||
        static_cast<int>(p.relabel.tri_image.size()) != tri.triangle_count())
      throw ValidationError("generic word: relabeling size mismatch");
    return p;
  }
  if (!(tri == Triangulation::once_punctured_torus()))
    throw ValidationError("L/R words require the once-punctured torus");

  FlipProgram out;
  out.relabel = Relabeling::identity(tri.edge_count(), tri.triangle_count());
  Triangulation current = tri;
  for (char letter : word.letters) {
    const TorusMove* move = nullptr;
    if (letter == 'L') move = &torus_move_L();
    else if (letter == 'R') move = &torus_move_R();
    else
      throw ValidationError(std::string("word letter '") + letter +
                            "' is not L or R");
    int edge_here = out.relabel.edge_image.at(move->flip_edge).first;
    Triangulation flipped = current.flip(edge_here).first;
    out.flips.push_back(edge_here);
    Relabeling f =
        transport_through_flip(out.relabel, tri, move->flip_edge, current);
    out.relabel = move->relabel.then(f);
    current = std::move(flipped);
  }
  return out;
}

}  // namespace clutor
