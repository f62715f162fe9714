#include "orbkit/triangulation.hpp"

#include <algorithm>
#include <numeric>

#include "orbkit/errors.hpp"

namespace orbkit {

namespace {

int sort_parity(std::vector<int>& v) {
  int parity = 1;
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = i + 1; j < v.size(); ++j)
      if (v[i] > v[j]) {
        std::swap(v[i], v[j]);
        parity = -parity;
      }
  return parity;
}

std::vector<int> facet_tuple(const std::vector<int>& simplex, int omit) {
  std::vector<int> f;
  for (size_t i = 0; i < simplex.size(); ++i)
    if (static_cast<int>(i) != omit) f.push_back(simplex[i]);
  return f;
}

struct UnionFind {
  std::vector<int> parent;
  int make() {
    parent.push_back(static_cast<int>(parent.size()));
    return parent.back();
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

void OrderedTriangulation::validate_shape() const {
  if (dim < 1 || dim > 3) fail(ErrorCode::ShapeError, "triangulation dimension must be 1, 2 or 3");
  if (simplices.size() != orient.size()) fail(ErrorCode::ShapeError, "orientation list length mismatch");
  for (size_t s = 0; s < simplices.size(); ++s) {
    if (static_cast<int>(simplices[s].size()) != dim + 1)
      fail(ErrorCode::ShapeError, "top simplex arity mismatch");
    for (int v : simplices[s])
      if (v < 0 || v >= vertices) fail(ErrorCode::ShapeError, "vertex id out of range");
    for (size_t i = 0; i + 1 < simplices[s].size(); ++i)
      if (simplices[s][i] >= simplices[s][i + 1])
        fail(ErrorCode::ShapeError, "top simplices must be strictly increasing vertex tuples");
    if (orient[s] != 1 && orient[s] != -1) fail(ErrorCode::ShapeError, "orientation signs must be +1/-1");
  }
  for (const Gluing& g : gluings) {
    if (g.from.size() != g.to.size() || g.from.size() != static_cast<size_t>(dim))
      fail(ErrorCode::ShapeError, "gluing arity mismatch");
  }
}

Complex::Complex(OrderedTriangulation t) : t_(std::move(t)) {
  t_.validate_shape();
  const int dim = t_.dim;

  std::map<std::vector<int>, std::vector<std::pair<int, int>>> by_tuple;
  for (int s = 0; s < top_count(); ++s)
    for (int f = 0; f <= dim; ++f) {
      std::vector<int> key = facet_tuple(t_.simplices[s], f);
      by_tuple[key].push_back({s, f});
    }

  std::map<std::vector<int>, bool> consumed;
  for (const Gluing& g : t_.gluings) {
    std::vector<int> from = g.from, to = g.to;
    std::vector<int> fs = from, ts = to;
    std::sort(fs.begin(), fs.end());
    std::sort(ts.begin(), ts.end());
    auto itf = by_tuple.find(fs);
    auto itt = by_tuple.find(ts);
    if (itf == by_tuple.end() || itt == by_tuple.end() || itf->second.size() != 1 || itt->second.size() != 1)
      fail(ErrorCode::ShapeError, "gluing does not match exactly one facet on each side");
    FacetPair p;
    p.s1 = itf->second[0].first;
    p.f1 = itf->second[0].second;
    p.s2 = itt->second[0].first;
    p.f2 = itt->second[0].second;
    p.map_from = from;
    p.map_to = to;
    pairs_.push_back(p);
    consumed[fs] = consumed[ts] = true;
  }
  for (auto& [key, inc] : by_tuple) {
    if (consumed.count(key)) continue;
    if (inc.size() == 1) {
      boundary_facets_.push_back(inc[0]);
    } else if (inc.size() == 2) {
      FacetPair p;
      p.s1 = inc[0].first;
      p.f1 = inc[0].second;
      p.s2 = inc[1].first;
      p.f2 = inc[1].second;
      p.map_from = key;
      p.map_to = key;
      pairs_.push_back(p);
    } else {
      fail(ErrorCode::ShapeError, "facet shared by more than two top simplices");
    }
  }

  cells_.resize(dim + 1);
  for (int k = 0; k <= dim; ++k) {
    std::map<std::vector<int>, int> index;
    UnionFind uf;
    auto intern = [&](const std::vector<int>& tup) {
      auto it = index.find(tup);
      if (it != index.end()) return it->second;
      int id = uf.make();
      index[tup] = id;
      return id;
    };
    for (int s = 0; s < top_count(); ++s) {
      const auto& sx = t_.simplices[s];
      std::vector<int> pos(k + 1);
      std::iota(pos.begin(), pos.end(), 0);
      while (true) {
        std::vector<int> tup;
        for (int p : pos) tup.push_back(sx[p]);
        intern(tup);
        int i = k;
        while (i >= 0 && pos[i] == dim - k + i) --i;
        if (i < 0) break;
        ++pos[i];
        for (int j = i + 1; j <= k; ++j) pos[j] = pos[j - 1] + 1;
      }
    }
    for (const FacetPair& p : pairs_) {
      if (p.map_from == p.map_to) continue;
      int fs = static_cast<int>(p.map_from.size());
      if (k + 1 > fs) continue;
      std::vector<int> pos(k + 1);
      std::iota(pos.begin(), pos.end(), 0);
      while (true) {
        std::vector<int> a, b;
        for (int p2 : pos) {
          a.push_back(p.map_from[p2]);
          b.push_back(p.map_to[p2]);
        }
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        uf.unite(intern(a), intern(b));
        int i = k;
        while (i >= 0 && pos[i] == fs - 1 - k + i) --i;
        if (i < 0) break;
        ++pos[i];
        for (int j = i + 1; j <= k; ++j) pos[j] = pos[j - 1] + 1;
      }
    }
    std::map<int, int> root_to_cell;
    for (auto& [tup, id] : index) {
      int r = uf.find(id);
      auto it = root_to_cell.find(r);
      int cell;
      if (it == root_to_cell.end()) {
        cell = static_cast<int>(cells_[k].size());
        cells_[k].push_back({});
        root_to_cell[r] = cell;
      } else {
        cell = it->second;
      }
      cells_[k][cell].members.push_back(tup);
      cell_index_[k][tup] = cell;
    }
    for (auto& c : cells_[k]) std::sort(c.members.begin(), c.members.end());
  }
}

int Complex::cell_of(int s, const std::vector<int>& positions) const {
  std::vector<int> tup;
  for (int p : positions) tup.push_back(t_.simplices[s][p]);
  std::sort(tup.begin(), tup.end());
  int k = static_cast<int>(tup.size()) - 1;
  auto it = cell_index_[k].find(tup);
  if (it == cell_index_[k].end()) fail(ErrorCode::Internal, "cell lookup failed");
  return it->second;
}

void Complex::validate_oriented() const {
  for (const FacetPair& p : pairs_) {
    int sign1 = t_.orient[p.s1] * ((p.f1 % 2 == 0) ? 1 : -1);
    int sign2 = t_.orient[p.s2] * ((p.f2 % 2 == 0) ? 1 : -1);
    std::vector<int> from = p.map_from, to = p.map_to;
    std::vector<size_t> order(from.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return from[a] < from[b]; });
    std::vector<int> img;
    for (size_t i : order) img.push_back(to[i]);
    int parity = sort_parity(img);
    if (sign1 * parity != -sign2)
      fail(ErrorCode::ShapeError, "interior facet with non-opposite induced orientations");
  }
}

bool Complex::order_preserving_gluings() const {
  for (const FacetPair& p : pairs_) {
    std::vector<int> from = p.map_from, to = p.map_to;
    std::vector<size_t> order(from.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return from[a] < from[b]; });
    std::vector<int> img;
    for (size_t i : order) img.push_back(to[i]);
    if (!std::is_sorted(img.begin(), img.end())) return false;
  }
  return true;
}

namespace {

int boundary_sign(int position) { return position % 2 == 0 ? 1 : -1; }

OrderedTriangulation replace_by_cofaces(const OrderedTriangulation& t, const std::vector<int>& old_idx,
                                        const std::vector<int>& W) {
  std::vector<bool> used(W.size(), false);
  int kappa_num = 0;
  for (int idx : old_idx) {
    const auto& sx = t.simplices[idx];
    int omit = -1;
    size_t si = 0;
    for (size_t wi = 0; wi < W.size(); ++wi) {
      if (si < sx.size() && sx[si] == W[wi]) {
        ++si;
      } else {
        if (omit >= 0) fail(ErrorCode::InvalidMove, "simplex is not a facet of the move support");
        omit = static_cast<int>(wi);
      }
    }
    if (si != sx.size() || omit < 0) fail(ErrorCode::InvalidMove, "simplex is not a facet of the move support");
    used[omit] = true;
    int k = t.orient[idx] * boundary_sign(omit);
    if (kappa_num == 0)
      kappa_num = k;
    else if (kappa_num != k)
      fail(ErrorCode::InvalidMove, "orientations are incompatible with the move");
  }
  OrderedTriangulation out = t;
  std::vector<int> remove(old_idx.begin(), old_idx.end());
  std::sort(remove.rbegin(), remove.rend());
  for (int idx : remove) {
    out.simplices.erase(out.simplices.begin() + idx);
    out.orient.erase(out.orient.begin() + idx);
  }
  for (size_t wi = 0; wi < W.size(); ++wi) {
    if (used[wi]) continue;
    std::vector<int> face = facet_tuple(W, static_cast<int>(wi));
    for (const auto& sx : out.simplices)
      if (sx == face) fail(ErrorCode::InvalidMove, "move would duplicate an existing top simplex");
    out.simplices.push_back(face);
    out.orient.push_back(-kappa_num * boundary_sign(static_cast<int>(wi)));
  }
  return out;
}

bool simplex_exists(const OrderedTriangulation& t, const std::vector<int>& tup) {
  for (const auto& s : t.simplices)
    if (s == tup) return true;
  return false;
}

bool tuple_in_complex(const Complex& c, const std::vector<int>& tup) {
  int k = static_cast<int>(tup.size()) - 1;
  if (k > c.dim()) return false;
  for (int id = 0; id < c.cell_count(k); ++id)
    for (const auto& m : c.cell(k, id).members)
      if (m == tup) return true;
  return false;
}

bool vertex_in_gluings(const OrderedTriangulation& t, int v) {
  for (const Gluing& g : t.gluings) {
    for (int x : g.from)
      if (x == v) return true;
    for (int x : g.to)
      if (x == v) return true;
  }
  return false;
}

OrderedTriangulation drop_vertex_gap(OrderedTriangulation t, int v) {
  for (auto& sx : t.simplices)
    for (int& x : sx)
      if (x > v) --x;
  for (auto& g : t.gluings) {
    for (int& x : g.from)
      if (x > v) --x;
    for (int& x : g.to)
      if (x > v) --x;
  }
  --t.vertices;
  return t;
}

}  // namespace

namespace {
OrderedTriangulation apply_move_impl(const OrderedTriangulation& t, const PachnerMove& mv);
}

OrderedTriangulation apply_move(const OrderedTriangulation& t, const PachnerMove& mv) {
  OrderedTriangulation out = apply_move_impl(t, mv);
  // a move on a quotient complex may accidentally merge cells or over-share
  // facets; reject such instances instead of producing a broken complex
  try {
    Complex check(out);
    check.validate_oriented();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ShapeError)
      fail(ErrorCode::InvalidMove, std::string("move produces an invalid complex: ") + e.what());
    throw;
  }
  return out;
}

namespace {
OrderedTriangulation apply_move_impl(const OrderedTriangulation& t, const PachnerMove& mv) {
  t.validate_shape();
  const int dim = t.dim;
  if (mv.kind == "13" || mv.kind == "14") {
    if ((mv.kind == "13") != (dim == 2)) fail(ErrorCode::InvalidMove, "move kind does not match dimension");
    if (mv.target < 0 || mv.target >= static_cast<int>(t.simplices.size()))
      fail(ErrorCode::InvalidMove, "no such simplex");
    OrderedTriangulation out = t;
    int n = out.vertices++;
    std::vector<int> W = t.simplices[mv.target];
    W.push_back(n);
    return replace_by_cofaces(out, {mv.target}, W);
  }
  if (mv.kind == "22" || mv.kind == "23") {
    if ((mv.kind == "22") != (dim == 2)) fail(ErrorCode::InvalidMove, "move kind does not match dimension");
    Complex c(t);
    const auto& pairs = c.facet_pairs();
    if (mv.target < 0 || mv.target >= static_cast<int>(pairs.size()))
      fail(ErrorCode::InvalidMove, "no such facet pair");
    const FacetPair& p = pairs[mv.target];
    if (p.s1 == p.s2 || p.map_from != p.map_to) fail(ErrorCode::InvalidMove, "facet pair is glued nontrivially");
    std::vector<int> W = t.simplices[p.s1];
    for (int v : t.simplices[p.s2])
      if (std::find(W.begin(), W.end(), v) == W.end()) W.push_back(v);
    std::sort(W.begin(), W.end());
    if (static_cast<int>(W.size()) != dim + 2) fail(ErrorCode::InvalidMove, "move support is degenerate");
    std::vector<int> diag;
    for (int v : W)
      if (std::find(p.map_from.begin(), p.map_from.end(), v) == p.map_from.end()) diag.push_back(v);
    if (tuple_in_complex(c, diag)) fail(ErrorCode::InvalidMove, "flip diagonal already present");
    return replace_by_cofaces(t, {p.s1, p.s2}, W);
  }
  if (mv.kind == "31" || mv.kind == "41") {
    if ((mv.kind == "31") != (dim == 2)) fail(ErrorCode::InvalidMove, "move kind does not match dimension");
    int v = mv.target;
    if (v < 0 || v >= t.vertices || vertex_in_gluings(t, v)) fail(ErrorCode::InvalidMove, "vertex not removable");
    std::vector<int> star;
    std::vector<int> W;
    for (int s = 0; s < static_cast<int>(t.simplices.size()); ++s) {
      const auto& sx = t.simplices[s];
      if (std::find(sx.begin(), sx.end(), v) != sx.end()) {
        star.push_back(s);
        for (int x : sx)
          if (std::find(W.begin(), W.end(), x) == W.end()) W.push_back(x);
      }
    }
    if (static_cast<int>(star.size()) != dim + 1) fail(ErrorCode::InvalidMove, "vertex star has the wrong size");
    std::sort(W.begin(), W.end());
    if (static_cast<int>(W.size()) != dim + 2) fail(ErrorCode::InvalidMove, "vertex star support is degenerate");
    std::vector<int> target = W;
    target.erase(std::find(target.begin(), target.end(), v));
    if (simplex_exists(t, target)) fail(ErrorCode::InvalidMove, "target simplex already present");
    OrderedTriangulation out = replace_by_cofaces(t, star, W);
    return drop_vertex_gap(out, v);
  }
  if (mv.kind == "32") {
    if (dim != 3) fail(ErrorCode::InvalidMove, "32 move needs dimension 3");
    Complex c(t);
    if (mv.target < 0 || mv.target >= c.cell_count(1)) fail(ErrorCode::InvalidMove, "no such edge");
    const Cell& edge = c.cell(1, mv.target);
    if (edge.members.size() != 1) fail(ErrorCode::InvalidMove, "edge is identified with another edge");
    const std::vector<int>& e = edge.members[0];
    std::vector<int> star;
    std::vector<int> W;
    for (int s = 0; s < static_cast<int>(t.simplices.size()); ++s) {
      const auto& sx = t.simplices[s];
      if (std::includes(sx.begin(), sx.end(), e.begin(), e.end())) {
        star.push_back(s);
        for (int x : sx)
          if (std::find(W.begin(), W.end(), x) == W.end()) W.push_back(x);
      }
    }
    if (star.size() != 3) fail(ErrorCode::InvalidMove, "edge is not shared by exactly three tetrahedra");
    std::sort(W.begin(), W.end());
    if (W.size() != 5) fail(ErrorCode::InvalidMove, "edge star support is degenerate");
    std::vector<int> others;
    for (int x : W)
      if (x != e[0] && x != e[1]) others.push_back(x);
    for (int ei : {e[0], e[1]}) {
      std::vector<int> cand = others;
      cand.push_back(ei);
      std::sort(cand.begin(), cand.end());
      if (simplex_exists(t, cand)) fail(ErrorCode::InvalidMove, "replacement tetrahedron already present");
    }
    return replace_by_cofaces(t, star, W);
  }
  fail(ErrorCode::InvalidMove, "unknown move kind " + mv.kind);
}
}  // namespace

std::vector<PachnerMove> legal_moves(const OrderedTriangulation& t, const std::string& kind) {
  std::vector<PachnerMove> out;
  auto try_push = [&](const PachnerMove& mv) {
    try {
      apply_move(t, mv);
      out.push_back(mv);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InvalidMove) throw;
    }
  };
  if (kind == "13" || kind == "14") {
    for (int s = 0; s < static_cast<int>(t.simplices.size()); ++s) try_push({kind, s});
  } else if (kind == "22" || kind == "23") {
    Complex c(t);
    for (int p = 0; p < static_cast<int>(c.facet_pairs().size()); ++p) try_push({kind, p});
  } else if (kind == "31" || kind == "41") {
    for (int v = 0; v < t.vertices; ++v) try_push({kind, v});
  } else if (kind == "32") {
    Complex c(t);
    for (int e = 0; e < c.cell_count(1); ++e) try_push({kind, e});
  } else {
    fail(ErrorCode::InvalidMove, "unknown move kind " + kind);
  }
  return out;
}

OrderedTriangulation relabel(const OrderedTriangulation& t, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != t.vertices) fail(ErrorCode::ShapeError, "permutation size mismatch");
  OrderedTriangulation out = t;
  for (size_t s = 0; s < out.simplices.size(); ++s) {
    for (int& v : out.simplices[s]) v = perm[v];
    std::vector<int> sorted = out.simplices[s];
    int parity = sort_parity(sorted);
    out.simplices[s] = sorted;
    out.orient[s] *= parity;
  }
  for (auto& g : out.gluings) {
    for (int& v : g.from) v = perm[v];
    for (int& v : g.to) v = perm[v];
  }
  return out;
}

OrderedTriangulation disjoint_union(const OrderedTriangulation& a, const OrderedTriangulation& b) {
  if (a.dim != b.dim) fail(ErrorCode::ShapeError, "dimension mismatch");
  OrderedTriangulation out = a;
  int off = a.vertices;
  out.vertices += b.vertices;
  for (size_t s = 0; s < b.simplices.size(); ++s) {
    std::vector<int> sx = b.simplices[s];
    for (int& v : sx) v += off;
    out.simplices.push_back(sx);
    out.orient.push_back(b.orient[s]);
  }
  for (const Gluing& g : b.gluings) {
    Gluing h = g;
    for (int& v : h.from) v += off;
    for (int& v : h.to) v += off;
    out.gluings.push_back(h);
  }
  return out;
}

OrderedTriangulation tri_sphere_2d() {
  OrderedTriangulation t;
  t.dim = 2;
  t.vertices = 4;
  t.simplices = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  t.orient = {-1, 1, -1, 1};
  return t;
}

OrderedTriangulation tri_torus_2d() {
  OrderedTriangulation t;
  t.dim = 2;
  t.vertices = 4;
  t.simplices = {{0, 1, 2}, {1, 2, 3}};
  t.orient = {1, -1};
  t.gluings = {{{0, 1}, {2, 3}}, {{0, 2}, {1, 3}}};
  return t;
}

OrderedTriangulation tri_genus2_2d() {
  OrderedTriangulation t;
  t.dim = 2;
  t.vertices = 9;  // center 0, ring 1..8
  for (int i = 1; i <= 7; ++i) {
    t.simplices.push_back({0, i, i + 1});
    t.orient.push_back(1);
  }
  t.simplices.push_back({0, 1, 8});
  t.orient.push_back(-1);
  // octagon word a b a^-1 b^-1 c d c^-1 d^-1
  t.gluings = {{{1, 2}, {4, 3}}, {{2, 3}, {5, 4}}, {{5, 6}, {8, 7}}, {{6, 7}, {1, 8}}};
  return t;
}

OrderedTriangulation tri_s3_two_tet() {
  OrderedTriangulation t;
  t.dim = 3;
  t.vertices = 4;
  t.simplices = {{0, 1, 2, 3}, {0, 1, 2, 3}};
  t.orient = {1, -1};
  return t;
}

OrderedTriangulation tri_s3_boundary_4simplex() {
  OrderedTriangulation t;
  t.dim = 3;
  t.vertices = 5;
  t.simplices = {{1, 2, 3, 4}, {0, 2, 3, 4}, {0, 1, 3, 4}, {0, 1, 2, 4}, {0, 1, 2, 3}};
  t.orient = {1, -1, 1, -1, 1};
  return t;
}

OrderedTriangulation tri_s2xs1() {
  CylinderComplex cyl = prism_cylinder(tri_sphere_2d());
  OrderedTriangulation t = cyl.tri;
  int off = cyl.vertex_offset;
  OrderedTriangulation base = tri_sphere_2d();
  for (const auto& tri : base.simplices) {
    Gluing g;
    for (int v : tri) g.from.push_back(v + off);
    g.to = tri;
    t.gluings.push_back(g);
  }
  return t;
}

OrderedTriangulation tri_t3_cube() {
  OrderedTriangulation t;
  t.dim = 3;
  t.vertices = 8;
  int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (auto& p : perms) {
    int a = 1 << p[0];
    int b = a | (1 << p[1]);
    t.simplices.push_back({0, a, b, 7});
    int parity = 1;
    int arr[3] = {p[0], p[1], p[2]};
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        if (arr[i] > arr[j]) parity = -parity;
    t.orient.push_back(parity);
  }
  t.gluings = {{{0, 2, 6}, {1, 3, 7}}, {{0, 4, 6}, {1, 5, 7}}, {{0, 1, 5}, {2, 3, 7}},
               {{0, 4, 5}, {2, 6, 7}}, {{0, 1, 3}, {4, 5, 7}}, {{0, 2, 3}, {4, 6, 7}}};
  return t;
}

OrderedTriangulation tri_circle(int segments) {
  if (segments < 2) fail(ErrorCode::ShapeError, "circle needs at least 2 segments");
  OrderedTriangulation t;
  t.dim = 1;
  t.vertices = segments;
  for (int i = 0; i + 1 < segments; ++i) {
    t.simplices.push_back({i, i + 1});
    t.orient.push_back(1);
  }
  t.simplices.push_back({0, segments - 1});
  t.orient.push_back(-1);
  return t;
}

CylinderComplex prism_cylinder(const OrderedTriangulation& base) {
  base.validate_shape();
  Complex bc(base);
  if (!bc.order_preserving_gluings())
    fail(ErrorCode::Unsupported, "prism cylinders need order-preserving gluings in the base");
  CylinderComplex out;
  out.vertex_offset = base.vertices;
  OrderedTriangulation& t = out.tri;
  t.dim = base.dim + 1;
  t.vertices = 2 * base.vertices;
  const int off = base.vertices;
  if (base.dim == 2) {
    for (size_t s = 0; s < base.simplices.size(); ++s) {
      int a = base.simplices[s][0], b = base.simplices[s][1], c = base.simplices[s][2];
      int e = base.orient[s];
      t.simplices.push_back({a, b, c, c + off});
      t.orient.push_back(e);
      t.simplices.push_back({a, b, b + off, c + off});
      t.orient.push_back(-e);
      t.simplices.push_back({a, a + off, b + off, c + off});
      t.orient.push_back(e);
    }
  } else if (base.dim == 1) {
    for (size_t s = 0; s < base.simplices.size(); ++s) {
      int a = base.simplices[s][0], b = base.simplices[s][1];
      int e = base.orient[s];
      t.simplices.push_back({a, b, b + off});
      t.orient.push_back(e);
      t.simplices.push_back({a, a + off, b + off});
      t.orient.push_back(-e);
    }
  } else {
    fail(ErrorCode::Unsupported, "prism cylinders implemented for 1d and 2d bases");
  }
  for (const Gluing& g : base.gluings) {
    if (base.dim == 2) {
      std::vector<int> f = g.from, h = g.to;
      std::vector<size_t> order(f.size());
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](size_t x, size_t y) { return f[x] < f[y]; });
      int f0 = f[order[0]], f1 = f[order[1]], t0 = h[order[0]], t1 = h[order[1]];
      t.gluings.push_back({{f0, f1, f1 + off}, {t0, t1, t1 + off}});
      t.gluings.push_back({{f0, f0 + off, f1 + off}, {t0, t0 + off, t1 + off}});
    } else {
      int f0 = g.from[0], t0 = g.to[0];
      t.gluings.push_back({{f0, f0 + off}, {t0, t0 + off}});
    }
  }
  return out;
}

}  // namespace orbkit
