#include "clutor/quiver.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace clutor {

using nlohmann::json;

std::string VertexLoc::to_string() const {
  std::ostringstream out;
  if (on_edge)
    out << "edge " << edge << " pos " << pos;
  else
    out << "tri " << tri << " (" << bary[0] << "," << bary[1] << ","
        << bary[2] << ")";
  return out.str();
}

namespace {

// Slot order of the standard once-punctured torus quiver at rank 3, chosen
// once so that vertex i carries the coordinate y_{i+1} of the reference
// formulas for the L/R generator maps. Frozen by the golden-formula tests.
constexpr std::array<int, 8> kTorusRank3Order = {0, 1, 5, 6, 3, 4, 2, 7};

}  // namespace

void Quiver::rebuild_lookup() {
  edge_index_.clear();
  tri_index_.clear();
  for (int i = 0; i < size(); ++i) {
    const VertexLoc& v = verts_[i];
    if (v.on_edge)
      edge_index_[{v.edge, v.pos}] = i;
    else
      tri_index_[{v.tri, v.bary}] = i;
  }
}

int Quiver::index_of(const VertexLoc& loc) const {
  if (loc.on_edge) {
    auto it = edge_index_.find({loc.edge, loc.pos});
    if (it == edge_index_.end())
      throw InternalConsistencyError("quiver vertex lookup failed: " +
                                     loc.to_string());
    return it->second;
  }
  auto it = tri_index_.find({loc.tri, loc.bary});
  if (it == tri_index_.end())
    throw InternalConsistencyError("quiver vertex lookup failed: " +
                                   loc.to_string());
  return it->second;
}

Quiver Quiver::build(const Triangulation& tri, int rank) {
  tri.require_valid();
  if (rank < 2) throw ValidationError("quiver rank must be at least 2");
  const int n = rank;

  Quiver q;
  q.rank_ = n;
  for (int e = 0; e < tri.edge_count(); ++e)
    for (int p = 1; p < n; ++p)
      q.verts_.push_back(VertexLoc::edge_vertex(e, p));
  for (int t = 0; t < tri.triangle_count(); ++t)
    for (int c0 = 1; c0 <= n - 2; ++c0)
      for (int c1 = 1; c1 <= n - 1 - c0; ++c1)
        q.verts_.push_back(
            VertexLoc::interior_vertex(t, {c0, c1, n - c0 - c1}));
  q.rebuild_lookup();
  q.eps_.assign(q.size(), std::vector<int>(q.size(), 0));

  // Lattice point of triangle t -> global vertex (or -1 for a corner).
  auto global_index = [&](int t, std::array<int, 3> c) -> int {
    int zeros = (c[0] == 0) + (c[1] == 0) + (c[2] == 0);
    if (zeros >= 2) return -1;  // marked point
    if (zeros == 0) return q.index_of(VertexLoc::interior_vertex(t, c));
    int m = c[0] == 0 ? 0 : (c[1] == 0 ? 1 : 2);
    int side = (m + 1) % 3;
    int p = c[(side + 1) % 3];
    int e = tri.edge_of(t, side);
    int pos = tri.is_forward(t, side) ? p : n - p;
    return q.index_of(VertexLoc::edge_vertex(e, pos));
  };

  // Small edges of the n-subdivision, oriented parallel to the triangle's
  // counterclockwise sides; those lying on the sides themselves are not part
  // of the quiver. steps[s] moves parallel to side s; the edge lies on a
  // side exactly when coordinate (s+2)%3 is zero at both ends.
  constexpr std::array<std::array<int, 3>, 3> steps = {
      {{-1, 1, 0}, {0, -1, 1}, {1, 0, -1}}};
  for (int t = 0; t < tri.triangle_count(); ++t) {
    for (int c0 = 0; c0 <= n; ++c0)
      for (int c1 = 0; c1 <= n - c0; ++c1) {
        std::array<int, 3> u = {c0, c1, n - c0 - c1};
        for (int s = 0; s < 3; ++s) {
          std::array<int, 3> v = {u[0] + steps[s][0], u[1] + steps[s][1],
                                  u[2] + steps[s][2]};
          if (v[0] < 0 || v[1] < 0 || v[2] < 0) continue;
          if (u[(s + 2) % 3] == 0) continue;  // runs along a side
          int ui = global_index(t, u);
          int vi = global_index(t, v);
          if (ui < 0 || vi < 0)
            throw InternalConsistencyError("corner endpoint off the boundary");
          q.eps_[ui][vi] += 1;
          q.eps_[vi][ui] -= 1;
        }
      }
  }

  if (n == 3 && tri == Triangulation::once_punctured_torus()) {
    std::vector<int> order(kTorusRank3Order.begin(), kTorusRank3Order.end());
    return q.permuted(order);
  }
  return q;
}

Quiver Quiver::from_matrix(std::vector<VertexLoc> vertices,
                           std::vector<std::vector<int>> eps, int rank) {
  Quiver q;
  q.rank_ = rank;
  q.verts_ = std::move(vertices);
  q.eps_ = std::move(eps);
  if (q.eps_.size() != q.verts_.size())
    throw ValidationError("quiver: matrix/vertex size mismatch");
  for (int i = 0; i < q.size(); ++i) {
    if (static_cast<int>(q.eps_[i].size()) != q.size())
      throw ValidationError("quiver: matrix is not square");
    for (int j = 0; j < q.size(); ++j)
      if (q.eps_[i][j] != -q.eps_[j][i])
        throw ValidationError("quiver: matrix is not skew-symmetric");
  }
  q.rebuild_lookup();
  return q;
}

Quiver Quiver::mutated(int k) const {
  if (k < 0 || k >= size())
    throw ValidationError("mutation index out of range");
  Quiver q = *this;
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < size(); ++j) {
      if (i == k || j == k) {
        q.eps_[i][j] = -eps_[i][j];
      } else {
        int a = eps_[i][k], b = eps_[k][j];
        q.eps_[i][j] = eps_[i][j] + (std::abs(a) * b + a * std::abs(b)) / 2;
      }
    }
  return q;
}

Quiver Quiver::permuted(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != size())
    throw ValidationError("permutation size mismatch");
  Quiver q;
  q.rank_ = rank_;
  q.verts_.resize(size());
  q.eps_.assign(size(), std::vector<int>(size(), 0));
  for (int i = 0; i < size(); ++i) {
    q.verts_[i] = verts_.at(perm[i]);
    for (int j = 0; j < size(); ++j) q.eps_[i][j] = eps_.at(perm[i]).at(perm[j]);
  }
  q.rebuild_lookup();
  return q;
}

std::vector<std::string> Quiver::check(const Triangulation& tri) const {
  std::vector<std::string> errors;
  long expected = -(static_cast<long>(rank_) * rank_ - 1) *
                  tri.euler_characteristic();
  if (expected != size())
    errors.push_back("vertex count " + std::to_string(size()) +
                     " != -(n^2-1)chi = " + std::to_string(expected));
  for (int i = 0; i < size(); ++i) {
    if (eps_[i][i] != 0) errors.push_back("nonzero diagonal at " + std::to_string(i));
    for (int j = 0; j < size(); ++j) {
      if (eps_[i][j] != -eps_[j][i]) {
        errors.push_back("epsilon not skew-symmetric");
        return errors;
      }
      if (std::abs(eps_[i][j]) > 2)
        errors.push_back("entry out of range at (" + std::to_string(i) + "," +
                         std::to_string(j) + ")");
    }
  }
  return errors;
}

std::string Quiver::to_json() const {
  json verts = json::array();
  for (const auto& v : verts_) {
    if (v.on_edge)
      verts.push_back({{"edge", v.edge}, {"pos", v.pos}});
    else
      verts.push_back({{"tri", v.tri}, {"bary", v.bary}});
  }
  json out = {{"rank", rank_}, {"vertices", verts}, {"epsilon", eps_}};
  return out.dump(2);
}

std::string Quiver::to_text() const {
  std::ostringstream out;
  out << size() << " vertices, rank " << rank_ << "\n";
  for (int i = 0; i < size(); ++i)
    out << "y" << (i + 1) << ": " << verts_[i].to_string() << "\n";
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < size(); ++j)
      if (eps_[i][j] > 0)
        out << "y" << (i + 1) << " -> y" << (j + 1) << " (x" << eps_[i][j]
            << ")\n";
  return out.str();
}

namespace {

VertexLoc transport_relabel(const VertexLoc& v, const Relabeling& r, int n) {
  if (v.on_edge) {
    auto [e2, rev] = r.edge_image.at(v.edge);
    return VertexLoc::edge_vertex(e2, rev ? n - v.pos : v.pos);
  }
  auto [t2, rot] = r.tri_image.at(v.tri);
  std::array<int, 3> b{};
  for (int k = 0; k < 3; ++k) b[(k + rot) % 3] = v.bary[k];
  return VertexLoc::interior_vertex(t2, b);
}

// Vertices inside the flip quadrilateral keep their geometric position; in
// the chart A=(0,0), C'=(n,0), B=(n,n), C=(0,n) the old diagonal is u=v and
// the new one u+v=n.
VertexLoc transport_flip(const VertexLoc& v, const FlipRecord& rec, int n) {
  const int tf = rec.fwd_before.tri, sf = rec.fwd_before.side;
  const int tr = rec.bwd_before.tri, sr = rec.bwd_before.side;

  int u = -1, w = -1;
  if (v.on_edge && v.edge == rec.edge) {
    u = v.pos;
    w = v.pos;
  } else if (!v.on_edge && v.tri == tf) {
    int beta = v.bary[(sf + 1) % 3], gamma = v.bary[(sf + 2) % 3];
    u = beta;
    w = beta + gamma;
  } else if (!v.on_edge && v.tri == tr) {
    int r0 = v.bary[sr], r2 = v.bary[(sr + 2) % 3];
    u = r0 + r2;
    w = r0;
  } else {
    return v;  // outside the quad
  }

  if (u + w == n) return VertexLoc::edge_vertex(rec.edge, u);
  if (u + w > n)
    return VertexLoc::interior_vertex(tf, {u + w - n, n - u, n - w});
  return VertexLoc::interior_vertex(tr, {n - u - w, u, w});
}

}  // namespace

std::vector<int> vertex_bijection(const Quiver& q, const Quiver& q2,
                                  const Correspondence& corr) {
  if (q.size() != q2.size() || q.rank() != q2.rank())
    throw ValidationError("vertex bijection: size or rank mismatch");
  std::vector<int> out(q.size(), -1);
  for (int i = 0; i < q.size(); ++i) {
    VertexLoc target = std::visit(
        [&](const auto& c) -> VertexLoc {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, IdentityCorrespondence>)
            return q.vertex(i);
          else if constexpr (std::is_same_v<T, FlipCorrespondence>)
            return transport_flip(q.vertex(i), c.record, q.rank());
          else
            return transport_relabel(q.vertex(i), c.relabel, q.rank());
        },
        corr);
    out[i] = q2.index_of(target);
  }
  std::vector<int> seen(q.size(), 0);
  for (int x : out)
    if (++seen.at(x) > 1)
      throw InternalConsistencyError("vertex correspondence is not injective");
  return out;
}

}  // namespace clutor
