#include "clutor/cluster.hpp"

#include <json.hpp>

namespace clutor {

using nlohmann::json;

ClusterMap ClusterMap::then(const ClusterMap& next) const {
  if (final_.eps_matrix() != next.initial_quiver().eps_matrix())
    throw InternalConsistencyError(
        "cluster map composition: quivers do not meet");
  std::vector<Step> steps = steps_;
  steps.insert(steps.end(), next.steps().begin(), next.steps().end());
  return ClusterMap(initial_, next.final_quiver(), std::move(steps));
}

void ClusterMap::verify() const {
  // Permute steps re-label vertices, so the chain is checked on the exchange
  // matrices alone.
  Quiver cur = initial_;
  for (const Step& s : steps_) {
    if (s.kind == Step::Kind::Mutate) {
      if (s.quiver_before.eps_matrix() != cur.eps_matrix())
        throw InternalConsistencyError(
            "cluster map: stored quiver disagrees with the mutation chain");
      cur = cur.mutated(s.vertex);
    } else {
      cur = cur.permuted(s.perm);
    }
  }
  if (cur.eps_matrix() != final_.eps_matrix())
    throw InternalConsistencyError(
        "cluster map: chain does not end at the recorded final quiver");
}

std::string ClusterMap::to_json() const {
  json steps = json::array();
  for (const Step& s : steps_) {
    if (s.kind == Step::Kind::Mutate)
      steps.push_back({{"mutate", s.vertex},
                       {"epsilon", s.quiver_before.eps_matrix()}});
    else
      steps.push_back({{"permute", s.perm}});
  }
  json out = {{"dim", dim()}, {"steps", steps}};
  return out.dump(2);
}

ClusterMap flip_map(const Quiver& q, const Triangulation& tri, int edge,
                    int rank) {
  if (!tri.flippable(edge))
    throw ValidationError("flip_map: edge " + std::to_string(edge) +
                          " is not flippable");
  const int n = rank;
  auto [flipped, record] = tri.flip(edge);
  const int tf = record.fwd_before.tri, sf = record.fwd_before.side;
  const int tr = record.bwd_before.tri, sr = record.bwd_before.side;

  // The flip quadrilateral is the shadow of an n-subdivided tetrahedron and
  // the coordinate change is the octahedron recurrence swept from the old
  // diagonal to the new one: one mutation per unit octahedron, i.e. per
  // 4-tuple (a,b,c,d) >= 0 with a+b+c+d = n-2, fired at the quad position
  // (u,v) = (c+d+1, b+c+1) in time order tau = b+d. In the chart the old
  // diagonal is u = v and the new one u+v = n; positions on the lines x = i
  // return to duty at later times, so vertices can mutate more than once.
  // Total count (n+1)n(n-1)/6; for n = 2, 3 this degenerates to the edge
  // vertices followed by the interior lines.
  auto vertex_at = [&](int u, int v) {
    if (u == v) return q.index_of(VertexLoc::edge_vertex(edge, u));
    if (u < v) {
      std::array<int, 3> bary{};
      bary[sf] = n - v;
      bary[(sf + 1) % 3] = u;
      bary[(sf + 2) % 3] = v - u;
      return q.index_of(VertexLoc::interior_vertex(tf, bary));
    }
    std::array<int, 3> bary{};
    bary[sr] = v;
    bary[(sr + 1) % 3] = n - u;
    bary[(sr + 2) % 3] = u - v;
    return q.index_of(VertexLoc::interior_vertex(tr, bary));
  };
  std::vector<int> sequence;
  for (int tau = 0; tau <= n - 2; ++tau)
    for (int d = 0; d <= tau; ++d) {
      int b = tau - d;
      for (int c = 0; c <= n - 2 - tau; ++c)
        sequence.push_back(vertex_at(c + d + 1, b + c + 1));
    }

  std::vector<Step> steps;
  Quiver cur = q;
  for (int k : sequence) {
    steps.push_back(Step::mutate(k, cur));
    cur = cur.mutated(k);
  }

  Quiver rebuilt = Quiver::build(flipped, n);
  std::vector<int> bij =
      vertex_bijection(q, rebuilt, FlipCorrespondence{record, n});
  // Slot i of the result holds the coordinate of the rebuilt quiver's vertex
  // i, i.e. the mutated slot that maps onto it.
  std::vector<int> perm(bij.size());
  for (std::size_t i = 0; i < bij.size(); ++i) perm[bij[i]] = static_cast<int>(i);
  steps.push_back(Step::permute(perm));

  if (cur.permuted(perm).eps_matrix() != rebuilt.eps_matrix())
    throw InternalConsistencyError(
        "flip mutation sequence does not reproduce the flipped quiver");
  return ClusterMap(q, rebuilt, std::move(steps));
}

namespace {

// One torus letter as a self-map program: flip, then pull the labels back.
ClusterMap torus_letter_map(const Triangulation& tri, const Quiver& q,
                            const TorusMove& move, int rank) {
  ClusterMap flip = flip_map(q, tri, move.flip_edge, rank);
  const Quiver& after = flip.final_quiver();
  std::vector<int> transport =
      vertex_bijection(q, after, RelabelCorrespondence{move.relabel});
  if (after.permuted(transport).eps_matrix() != q.eps_matrix())
    throw InternalConsistencyError(
        "torus letter does not return to the starting quiver");
  std::vector<Step> steps = flip.steps();
  steps.push_back(Step::permute(transport));
  return ClusterMap(q, q, std::move(steps));
}

}  // namespace

ClusterMap mapping_class_map(const Triangulation& tri, const MappingWord& word,
                             int rank) {
  tri.require_valid();
  Quiver q = Quiver::build(tri, rank);

  if (!word.is_generic()) {
    if (!word.letters.empty() &&
        !(tri == Triangulation::once_punctured_torus()))
      throw ValidationError("L/R words require the once-punctured torus");
    ClusterMap acc = ClusterMap::identity(q);
    for (char letter : word.letters) {
      const TorusMove& move =
          letter == 'L'
              ? torus_move_L()
              : (letter == 'R' ? torus_move_R()
                               : throw ValidationError(
                                     std::string("word letter '") + letter +
                                     "' is not L or R"));
      acc = acc.then(torus_letter_map(tri, q, move, rank));
    }
    return acc;
  }

  FlipProgram program = word_to_flips(tri, word);
  ClusterMap acc = ClusterMap::identity(q);
  Triangulation cur = tri;
  for (int edge : program.flips) {
    ClusterMap f = flip_map(Quiver::build(cur, rank), cur, edge, rank);
    cur = cur.flip(edge).first;
    acc = acc.then(f);
  }
  std::vector<int> transport = vertex_bijection(
      q, acc.final_quiver(), RelabelCorrespondence{program.relabel});
  if (acc.final_quiver().permuted(transport).eps_matrix() != q.eps_matrix())
    throw InternalConsistencyError(
        "mapping word does not return to the starting quiver");
  std::vector<Step> steps = acc.steps();
  steps.push_back(Step::permute(transport));
  return ClusterMap(q, q, std::move(steps));
}

SymbolicMap symbolic_map(const ClusterMap& m) {
  std::vector<RationalFunction> coords;
  coords.reserve(m.dim());
  for (int i = 0; i < m.dim(); ++i)
    coords.push_back(RationalFunction::variable(m.dim(), i));
  SymbolicMap out;
  try {
    out.components = apply_map(m, coords);
  } catch (const SizeCapExceeded&) {
    // expansion outgrew the cap mid-program: hand back the seed coordinates
    // with the flag down rather than half a map
    out.components = std::move(coords);
    out.fully_reduced = false;
    out.aborted = true;
    return out;
  }
  for (const auto& f : out.components)
    if (!f.reduced()) out.fully_reduced = false;
  return out;
}

}  // namespace clutor
