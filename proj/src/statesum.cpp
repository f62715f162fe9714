#include "orbkit/statesum.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace orbkit {

namespace {

// ----------------------------------------------------------------------
// exact factor-graph contraction with variable elimination (sparse tables)

struct Factor {
  std::vector<int> vars;
  std::vector<NFE> vals;  // dense build buffer, mixed radix over vars
};

struct SparseFactor {
  std::vector<int> vars;
  std::vector<int> dims;
  std::vector<std::pair<uint64_t, NFE>> items;  // packed nonzero entries
};

struct Graph {
  FieldTag field{1};
  std::vector<int> domain;
  std::vector<SparseFactor> factors;
  NFE scalar = NFE::one(FieldTag{1});
  long touched = 0;

  explicit Graph(FieldTag f) : field(f), scalar(NFE::one(f)) {}

  int add_var(int dom) {
    domain.push_back(dom);
    return static_cast<int>(domain.size()) - 1;
  }

  void add_factor(Factor f) {
    if (f.vars.empty()) {
      scalar *= f.vals[0];
      return;
    }
    SparseFactor sf;
    sf.vars = f.vars;
    for (int v : f.vars) sf.dims.push_back(domain[v]);
    for (uint64_t idx = 0; idx < f.vals.size(); ++idx)
      if (!f.vals[idx].is_zero()) sf.items.push_back({idx, f.vals[idx]});
    add_sparse(std::move(sf));
  }

  void add_sparse(SparseFactor sf) {
    if (sf.vars.empty()) {
      NFE v = NFE::zero(field);
      for (auto& [k, x] : sf.items) v += x;
      scalar *= v;
      return;
    }
    factors.push_back(std::move(sf));
  }

  static std::vector<int> unpack(uint64_t key, const std::vector<int>& dims) {
    std::vector<int> a(dims.size());
    for (size_t i = dims.size(); i-- > 0;) {
      a[i] = static_cast<int>(key % dims[i]);
      key /= dims[i];
    }
    return a;
  }

  SparseFactor join(const SparseFactor& a, const SparseFactor& b) {
    // positions of shared vars
    std::vector<int> shared_a, shared_b;
    std::vector<int> b_only;
    for (size_t i = 0; i < b.vars.size(); ++i) {
      auto it = std::find(a.vars.begin(), a.vars.end(), b.vars[i]);
      if (it != a.vars.end()) {
        shared_a.push_back(static_cast<int>(it - a.vars.begin()));
        shared_b.push_back(static_cast<int>(i));
      } else {
        b_only.push_back(static_cast<int>(i));
      }
    }
    SparseFactor out;
    out.vars = a.vars;
    out.dims = a.dims;
    for (int i : b_only) {
      out.vars.push_back(b.vars[i]);
      out.dims.push_back(b.dims[i]);
    }
    // bucket b by its shared projection
    std::map<uint64_t, std::vector<size_t>> buckets;
    std::vector<std::vector<int>> b_assign(b.items.size());
    for (size_t j = 0; j < b.items.size(); ++j) {
      b_assign[j] = unpack(b.items[j].first, b.dims);
      uint64_t key = 0;
      for (int pos : shared_b) key = key * b.dims[pos] + b_assign[j][pos];
      buckets[key].push_back(j);
    }
    for (const auto& [ka, va] : a.items) {
      std::vector<int> aa = unpack(ka, a.dims);
      uint64_t key = 0;
      for (size_t i = 0; i < shared_a.size(); ++i) key = key * b.dims[shared_b[i]] + aa[shared_a[i]];
      auto it = buckets.find(key);
      if (it == buckets.end()) continue;
      for (size_t j : it->second) {
        ++touched;
        uint64_t ko = ka;
        for (int pos : b_only) ko = ko * b.dims[pos] + b_assign[j][pos];
        out.items.push_back({ko, va * b.items[j].second});
      }
    }
    return out;
  }

  void eliminate(int var) {
    std::vector<SparseFactor> touching;
    std::vector<SparseFactor> rest;
    for (auto& f : factors) {
      if (std::find(f.vars.begin(), f.vars.end(), var) != f.vars.end())
        touching.push_back(std::move(f));
      else
        rest.push_back(std::move(f));
    }
    factors = std::move(rest);
    if (touching.empty()) {
      scalar *= NFE::rational(domain[var], field);
      return;
    }
    std::sort(touching.begin(), touching.end(),
              [](const SparseFactor& x, const SparseFactor& y) { return x.items.size() < y.items.size(); });
    SparseFactor joined = touching[0];
    for (size_t i = 1; i < touching.size(); ++i) joined = join(joined, touching[i]);
    // marginalize var out (handle repeated occurrences of var in vars)
    std::vector<int> keep_pos;
    for (size_t i = 0; i < joined.vars.size(); ++i)
      if (joined.vars[i] != var) keep_pos.push_back(static_cast<int>(i));
    SparseFactor out;
    for (int i : keep_pos) {
      out.vars.push_back(joined.vars[i]);
      out.dims.push_back(joined.dims[i]);
    }
    std::map<uint64_t, NFE> accum;
    for (const auto& [k, v] : joined.items) {
      std::vector<int> a = unpack(k, joined.dims);
      // entries with inconsistent repeated-var assignments are no-ops only if
      // the factor was built densely; sparse joins keep repeats consistent
      uint64_t ko = 0;
      for (size_t i = 0; i < keep_pos.size(); ++i) ko = ko * out.dims[i] + a[keep_pos[i]];
      auto it = accum.find(ko);
      if (it == accum.end())
        accum.emplace(ko, v);
      else
        it->second += v;
    }
    out.items.assign(accum.begin(), accum.end());
    add_sparse(std::move(out));
  }

  NFE contract() {
    // consolidate repeated variables inside each factor first
    for (auto& f : factors) {
      std::vector<int> uniq;
      for (int v : f.vars)
        if (std::find(uniq.begin(), uniq.end(), v) == uniq.end()) uniq.push_back(v);
      if (uniq.size() == f.vars.size()) continue;
      SparseFactor nf;
      nf.vars = uniq;
      for (int v : uniq) nf.dims.push_back(domain[v]);
      std::map<uint64_t, NFE> accum;
      for (const auto& [k, val] : f.items) {
        std::vector<int> a = unpack(k, f.dims);
        bool consistent = true;
        std::vector<int> chosen(uniq.size(), -1);
        for (size_t i = 0; i < f.vars.size(); ++i) {
          size_t u = std::find(uniq.begin(), uniq.end(), f.vars[i]) - uniq.begin();
          if (chosen[u] < 0)
            chosen[u] = a[i];
          else if (chosen[u] != a[i])
            consistent = false;
        }
        if (!consistent) continue;
        uint64_t ko = 0;
        for (size_t u = 0; u < uniq.size(); ++u) ko = ko * nf.dims[u] + chosen[u];
        auto it = accum.find(ko);
        if (it == accum.end())
          accum.emplace(ko, val);
        else
          it->second += val;
      }
      nf.items.assign(accum.begin(), accum.end());
      f = std::move(nf);
    }
    std::vector<bool> alive(domain.size(), true);
    while (true) {
      int best = -1;
      size_t best_cost = 0;
      for (size_t v = 0; v < domain.size(); ++v) {
        if (!alive[v]) continue;
        size_t cost = 1;
        bool used = false;
        for (const auto& f : factors)
          if (std::find(f.vars.begin(), f.vars.end(), static_cast<int>(v)) != f.vars.end()) {
            used = true;
            cost *= std::max<size_t>(f.items.size(), 1);
          }
        if (!used) {
          alive[v] = false;
          scalar *= NFE::rational(domain[v], field);
          continue;
        }
        if (best < 0 || cost < best_cost) {
          best = static_cast<int>(v);
          best_cost = cost;
        }
      }
      if (best < 0) break;
      eliminate(best);
      alive[best] = false;
    }
    NFE out = scalar;
    for (const auto& f : factors) {
      if (!f.vars.empty()) fail(ErrorCode::Internal, "contraction left live variables");
      NFE v = NFE::zero(field);
      for (const auto& [k, x] : f.items) v += x;
      out *= v;
    }
    return out;
  }
};

// ----------------------------------------------------------------------
// 2d network construction

struct Side {
  int a, b;  // positions within the triangle tuple
};

const Side kSides[3] = {{0, 1}, {1, 2}, {0, 2}};

int side_index(int a, int b) {
  for (int i = 0; i < 3; ++i)
    if (kSides[i].a == a && kSides[i].b == b) return i;
  fail(ErrorCode::Internal, "bad side");
}

// cyclic boundary order of sides for a triangle of the given sign
std::vector<int> boundary_cycle(int sign) {
  if (sign > 0) return {side_index(0, 1), side_index(1, 2), side_index(0, 2)};
  return {side_index(0, 2), side_index(1, 2), side_index(0, 1)};
}

}  // namespace

StateSumResult fhk_evaluate(const OrderedTriangulation& T, const FrobeniusStructure& F) {
  Complex c(T);
  if (c.dim() != 2) fail(ErrorCode::ShapeError, "fhk_evaluate needs a 2d triangulation");
  if (!c.closed()) fail(ErrorCode::NotClosed, "fhk_evaluate needs a closed surface");
  c.validate_oriented();
  FrobeniusStructure An = F.gamma_normalized();
  if (!An.is_symmetric()) fail(ErrorCode::NotSeparable, "state sum needs a separable symmetric algebra");
  FieldTag K = An.field();
  const int n = An.dim();
  const Algebra& A = An.algebra();
  Vec psi = An.psi();

  Graph g(K);
  // one variable per (triangle, side)
  std::vector<std::array<int, 3>> slot(c.top_count());
  for (int s = 0; s < c.top_count(); ++s)
    for (int i = 0; i < 3; ++i) slot[s][i] = g.add_var(n);

  // edge incidences
  std::vector<std::vector<std::pair<int, int>>> edge_inc(c.cell_count(1));
  for (int s = 0; s < c.top_count(); ++s)
    for (int i = 0; i < 3; ++i) {
      int e = c.cell_of(s, {kSides[i].a, kSides[i].b});
      edge_inc[e].push_back({s, i});
    }

  // vertex psi insertions: each vertex cell to its minimal incident edge
  std::vector<int> extra(c.cell_count(1), 0);
  for (int v = 0; v < c.cell_count(0); ++v) {
    int best = -1;
    for (int s = 0; s < c.top_count(); ++s)
      for (int i = 0; i < 3; ++i) {
        int va = c.cell_of(s, {kSides[i].a});
        int vb = c.cell_of(s, {kSides[i].b});
        if (va == v || vb == v) {
          int e = c.cell_of(s, {kSides[i].a, kSides[i].b});
          if (best < 0 || e < best) best = e;
        }
      }
    if (best < 0) fail(ErrorCode::Internal, "isolated vertex");
    ++extra[best];
  }

  // edge factors: L(psi^{m-1}) . pairing_inverse
  for (int e = 0; e < c.cell_count(1); ++e) {
    if (edge_inc[e].size() != 2) fail(ErrorCode::Internal, "edge incidence count");
    Vec z = A.unit;
    int power = extra[e] - 1;
    Vec p = power >= 0 ? psi : An.psi_inverse();
    for (int i = 0; i < std::abs(power); ++i) z = A.multiply(z, p);
    Matrix B = A.left_mult(z) * An.pairing_inverse();
    Factor f;
    f.vars = {slot[edge_inc[e][0].first][edge_inc[e][0].second],
              slot[edge_inc[e][1].first][edge_inc[e][1].second]};
    f.vals.assign(static_cast<size_t>(n) * n, NFE::zero(K));
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) f.vals[static_cast<size_t>(x) * n + y] = B.at(x, y);
    g.add_factor(std::move(f));
  }

  // triangle factors: eps'(psi x1 x2 x3) in cyclic boundary order
  for (int s = 0; s < c.top_count(); ++s) {
    auto cyc = boundary_cycle(T.orient[s]);
    Factor f;
    f.vars = {slot[s][cyc[0]], slot[s][cyc[1]], slot[s][cyc[2]]};
    f.vals.assign(static_cast<size_t>(n) * n * n, NFE::zero(K));
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        Vec ex(n, NFE::zero(K)), ey(n, NFE::zero(K));
        ex[x] = NFE::one(K);
        ey[y] = NFE::one(K);
        Vec xy = A.multiply(ex, ey);
        Vec pxy = A.multiply(psi, xy);
        for (int z = 0; z < n; ++z) {
          Vec ez(n, NFE::zero(K));
          ez[z] = NFE::one(K);
          f.vals[(static_cast<size_t>(x) * n + y) * n + z] = An.eps(A.multiply(pxy, ez));
        }
      }
    g.add_factor(std::move(f));
  }

  StateSumResult r;
  r.value = g.contract();
  r.simplex_count = c.top_count();
  r.term_count = g.touched;
  return r;
}

// ----------------------------------------------------------------------
// 3d system evaluation (shared by tv_evaluate and the defect evaluator)

namespace {

struct TetDescriptor {
  int edge_cell[6];  // 01, 12, 23, 02, 13, 03
};

const int kEdgePos[6][2] = {{0, 1}, {1, 2}, {2, 3}, {0, 2}, {1, 3}, {0, 3}};

StateSumResult tv_system(const Complex& c, const LabelSystem& sys, const NFE& vertex_weight,
                         const std::vector<std::vector<int>>& edge_labels) {
  FieldTag K = sys.field;
  Graph g(K);
  const int E = c.cell_count(1);
  std::vector<int> var(E);
  for (int e = 0; e < E; ++e) var[e] = g.add_var(static_cast<int>(edge_labels[e].size()));

  // diagonal-slot counts for the edge weight exponents
  std::vector<int> nplus(E, 0);
  std::vector<TetDescriptor> tets(c.top_count());
  for (int s = 0; s < c.top_count(); ++s) {
    for (int i = 0; i < 6; ++i) tets[s].edge_cell[i] = c.cell_of(s, {kEdgePos[i][0], kEdgePos[i][1]});
    ++nplus[tets[s].edge_cell[3]];  // (v0, v2)
    ++nplus[tets[s].edge_cell[4]];  // (v1, v3)
  }

  // edge weight factors: weight(label)^(1 - nplus/2)
  for (int e = 0; e < E; ++e) {
    if (nplus[e] % 2 != 0) fail(ErrorCode::Internal, "odd diagonal-slot count on a closed complex");
    int w = 1 - nplus[e] / 2;
    Factor f;
    f.vars = {var[e]};
    for (int lab : edge_labels[e]) f.vals.push_back(sys.weight[lab].pow(w));
    g.add_factor(std::move(f));
  }

  // triangle admissibility
  for (int tcell = 0; tcell < c.cell_count(2); ++tcell) {
    // find one incidence
    int fs = -1;
    int fa = 0, fb = 0, fc2 = 0;
    for (int s = 0; s < c.top_count() && fs < 0; ++s) {
      for (int omit = 0; omit < 4 && fs < 0; ++omit) {
        std::vector<int> pos;
        for (int p = 0; p < 4; ++p)
          if (p != omit) pos.push_back(p);
        if (c.cell_of(s, pos) == tcell) {
          fs = s;
          fa = c.cell_of(s, {pos[0], pos[1]});
          fb = c.cell_of(s, {pos[1], pos[2]});
          fc2 = c.cell_of(s, {pos[0], pos[2]});
        }
      }
    }
    if (fs < 0) fail(ErrorCode::Internal, "triangle without incidence");
    Factor f;
    f.vars = {var[fa], var[fb], var[fc2]};
    f.vals.assign(edge_labels[fa].size() * edge_labels[fb].size() * edge_labels[fc2].size(), NFE::zero(K));
    size_t idx = 0;
    for (int la : edge_labels[fa])
      for (int lb : edge_labels[fb])
        for (int lc : edge_labels[fc2]) {
          f.vals[idx++] = sys.n(la, lb, lc) ? NFE::one(K) : NFE::zero(K);
        }
    g.add_factor(std::move(f));
  }

  // tetrahedron factors
  std::map<uint64_t, std::pair<Matrix, std::pair<std::vector<int>, std::vector<int>>>> inv_cache;
  for (int s = 0; s < c.top_count(); ++s) {
    const TetDescriptor& td = tets[s];
    int ea = td.edge_cell[0], eb = td.edge_cell[1], ec = td.edge_cell[2];
    int ee = td.edge_cell[3], ef = td.edge_cell[4], eg = td.edge_cell[5];
    Factor f;
    f.vars = {var[ea], var[eb], var[ec], var[eg], var[ee], var[ef]};
    size_t total = edge_labels[ea].size() * edge_labels[eb].size() * edge_labels[ec].size() *
                   edge_labels[eg].size() * edge_labels[ee].size() * edge_labels[ef].size();
    f.vals.assign(total, NFE::zero(K));
    size_t idx = 0;
    for (int la : edge_labels[ea])
      for (int lb : edge_labels[eb])
        for (int lc : edge_labels[ec])
          for (int lg : edge_labels[eg])
            for (int le : edge_labels[ee])
              for (int lf : edge_labels[ef]) {
                NFE v = NFE::zero(K);
                bool adm = sys.n(la, lb, le) && sys.n(le, lc, lg) && sys.n(lb, lc, lf) && sys.n(la, lf, lg);
                if (adm) {
                  if (c.tri().orient[s] > 0) {
                    v = sys.fsym(la, lb, lc, lg, le, lf);
                  } else {
                    uint64_t key = LabelSystem::key(la, lb, lc, lg, 0, 0);
                    auto it = inv_cache.find(key);
                    if (it == inv_cache.end()) {
                      Matrix inv = sys.fmatrix_inverse(la, lb, lc, lg);
                      auto rows = sys.rows_of(la, lb, lc, lg);
                      auto cols = sys.cols_of(la, lb, lc, lg);
                      it = inv_cache.emplace(key, std::make_pair(inv, std::make_pair(rows, cols))).first;
                    }
                    const auto& rows = it->second.second.first;
                    const auto& cols = it->second.second.second;
                    int ri = -1, ci = -1;
                    for (size_t i = 0; i < rows.size(); ++i)
                      if (rows[i] == le) ri = static_cast<int>(i);
                    for (size_t i = 0; i < cols.size(); ++i)
                      if (cols[i] == lf) ci = static_cast<int>(i);
                    v = it->second.first.at(ci, ri);  // (F^{-1})_{f e}
                  }
                }
                f.vals[idx++] = v;
              }
    g.add_factor(std::move(f));
  }

  g.scalar *= vertex_weight.pow(c.cell_count(0));
  StateSumResult r;
  r.value = g.contract();
  r.simplex_count = c.top_count();
  r.term_count = g.touched;
  return r;
}

}  // namespace

StateSumResult tv_evaluate(const OrderedTriangulation& T, const FusionData& F) {
  Complex c(T);
  if (c.dim() != 3) fail(ErrorCode::ShapeError, "tv_evaluate needs a 3d triangulation");
  if (!c.closed()) fail(ErrorCode::NotClosed, "tv_evaluate needs a closed 3-manifold");
  c.validate_oriented();
  if (!c.order_preserving_gluings()) fail(ErrorCode::Unsupported, "3d gluings must be order-preserving");
  if (!F.vertex_weight) fail(ErrorCode::MissingEulerDatum, "fusion data without the Euler vertex weight");
  auto rep = check_fusion(F);
  if (!rep.all()) fail(ErrorCode::ShapeError, "fusion data fails validation: " + rep.witness);
  std::vector<int> base_labels(F.count());
  std::iota(base_labels.begin(), base_labels.end(), 0);
  std::vector<std::vector<int>> edge_labels(c.cell_count(1), base_labels);
  return tv_system(c, F.sys, *F.vertex_weight, edge_labels);
}

// ----------------------------------------------------------------------
// pachner suites

namespace {

PachnerSuite run_suite(const OrderedTriangulation& start, int moves, uint64_t seed,
                       const std::vector<std::string>& kinds, int size_cap,
                       const std::function<NFE(const OrderedTriangulation&)>& eval) {
  PachnerSuite out;
  OrderedTriangulation t = start;
  NFE ref = eval(t);
  std::mt19937_64 rng(seed);
  for (int i = 0; i < moves; ++i) {
    // lazily sample move candidates; targets are cheap ranges, apply_move
    // performs the full legality check
    Complex c(t);
    bool big = static_cast<int>(t.simplices.size()) > size_cap;
    std::vector<std::pair<std::string, int>> candidates;
    for (const auto& kind : kinds) {
      bool shrinking = kind == "31" || kind == "41" || kind == "32";
      if (big && !shrinking) continue;
      int range = 0;
      if (kind == "13" || kind == "14") range = static_cast<int>(t.simplices.size());
      else if (kind == "22" || kind == "23") range = static_cast<int>(c.facet_pairs().size());
      else if (kind == "31" || kind == "41") range = t.vertices;
      else range = c.cell_count(1);
      for (int target = 0; target < range; ++target) candidates.push_back({kind, target});
    }
    std::shuffle(candidates.begin(), candidates.end(), rng);
    bool moved = false;
    std::string kind_used;
    for (const auto& [kind, target] : candidates) {
      try {
        t = apply_move(t, {kind, target});
        kind_used = kind;
        moved = true;
        break;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::InvalidMove) throw;
      }
    }
    if (!moved) {
      out.witness = "no legal moves available";
      out.ok = false;
      return out;
    }
    ++out.applied;
    NFE val = eval(t);
    if (!(val == ref)) {
      out.ok = false;
      out.witness = "value changed after a " + kind_used + " move (step " + std::to_string(out.applied) +
                    "): " + ref.str() + " vs " + val.str();
      return out;
    }
  }
  return out;
}

}  // namespace

PachnerSuite pachner_suite_fhk(const OrderedTriangulation& T, const FrobeniusStructure& F, int moves,
                               uint64_t seed) {
  return run_suite(T, moves, seed, {"13", "31", "22"}, 36,
                   [&](const OrderedTriangulation& t) { return fhk_evaluate(t, F).value; });
}

PachnerSuite pachner_suite_tv(const OrderedTriangulation& T, const FusionData& F, int moves, uint64_t seed) {
  return run_suite(T, moves, seed, {"14", "41", "23", "32"}, 26,
                   [&](const OrderedTriangulation& t) { return tv_evaluate(t, F).value; });
}

// ----------------------------------------------------------------------
// 2d defect evaluation

StateSumResult orbifold_evaluate_2d(const Stratified2d& S) {
  Complex c(S.base);
  if (c.dim() != 2) fail(ErrorCode::ShapeError, "2d evaluator needs a surface");
  if (!c.closed()) fail(ErrorCode::NotClosed, "2d evaluator needs a closed surface");
  c.validate_oriented();
  FieldTag K = S.algebras.empty() ? S.circles.at(0).label.field() : S.algebras[0].field();

  // crossing data
  std::set<int> crossed;
  struct Crossing {
    int circle;
    int in_edge, out_edge;
    int in_var = -1, out_var = -1;
    bool f_left = false;
    int third_side = -1;
  };
  std::map<int, Crossing> traversed;  // triangle -> crossing data

  struct CircleWalk {
    std::vector<int> edges;      // cyclic
    std::vector<int> triangles;  // triangles[i] between edges[i] and edges[i+1]
  };
  std::vector<CircleWalk> walks(S.circles.size());

  for (size_t ci = 0; ci < S.circles.size(); ++ci) {
    const DefectCircle& circle = S.circles[ci];
    std::set<int> support(circle.edge_cells.begin(), circle.edge_cells.end());
    if (support.size() != circle.edge_cells.size())
      fail(ErrorCode::TransversalityViolation, "circle support lists an edge twice");
    for (int e : support) {
      if (crossed.count(e)) fail(ErrorCode::Unsupported, "edges crossed by more than one circle");
      crossed.insert(e);
    }
    // traversed triangles of this circle
    std::map<int, std::vector<int>> tri_sides;  // triangle -> crossed side indices
    for (int s = 0; s < c.top_count(); ++s)
      for (int i = 0; i < 3; ++i) {
        int e = c.cell_of(s, {kSides[i].a, kSides[i].b});
        if (support.count(e)) tri_sides[s].push_back(i);
      }
    std::map<int, std::pair<int, int>> tri_pair;
    std::map<int, std::vector<int>> edge_tris;
    for (auto& [s, sides] : tri_sides) {
      if (sides.size() != 2)
        fail(ErrorCode::TransversalityViolation, "circle meets a triangle in other than two sides");
      int e1 = c.cell_of(s, {kSides[sides[0]].a, kSides[sides[0]].b});
      int e2 = c.cell_of(s, {kSides[sides[1]].a, kSides[sides[1]].b});
      if (e1 == e2) fail(ErrorCode::Unsupported, "circle crosses an identified edge pair in one triangle");
      tri_pair[s] = {e1, e2};
      edge_tris[e1].push_back(s);
      edge_tris[e2].push_back(s);
    }
    for (int e : support)
      if (edge_tris[e].size() != 2)
        fail(ErrorCode::TransversalityViolation, "crossed edge not between two traversed triangles");
    // walk the cycle
    int e0 = *support.begin();
    int t0 = std::min(edge_tris[e0][0], edge_tris[e0][1]);
    int t1 = std::max(edge_tris[e0][0], edge_tris[e0][1]);
    int first_tri = circle.orientation >= 0 ? t0 : t1;
    CircleWalk walk;
    int cur_edge = e0, cur_tri = first_tri;
    do {
      walk.edges.push_back(cur_edge);
      walk.triangles.push_back(cur_tri);
      auto [a, b] = tri_pair[cur_tri];
      int next_edge = (a == cur_edge) ? b : a;
      int next_tri = (edge_tris[next_edge][0] == cur_tri) ? edge_tris[next_edge][1] : edge_tris[next_edge][0];
      cur_edge = next_edge;
      cur_tri = next_tri;
    } while (cur_edge != e0);
    if (walk.edges.size() != support.size())
      fail(ErrorCode::TransversalityViolation, "circle support is not a single cycle");
    // record crossings
    for (size_t i = 0; i < walk.triangles.size(); ++i) {
      int s = walk.triangles[i];
      Crossing cr;
      cr.circle = static_cast<int>(ci);
      cr.in_edge = walk.edges[i];
      cr.out_edge = walk.edges[(i + 1) % walk.edges.size()];
      auto cyc = boundary_cycle(S.base.orient[s]);
      int side_in = -1, side_out = -1, side_third = -1;
      for (int j = 0; j < 3; ++j) {
        int e = c.cell_of(s, {kSides[cyc[j]].a, kSides[cyc[j]].b});
        if (e == cr.in_edge) side_in = j;
        else if (e == cr.out_edge) side_out = j;
        else side_third = j;
      }
      if (side_in < 0 || side_out < 0 || side_third < 0) fail(ErrorCode::Internal, "crossing side lookup failed");
      cr.f_left = (side_out == (side_in + 1) % 3);
      cr.third_side = cyc[side_third];
      traversed[s] = cr;
    }
    walks[ci] = std::move(walk);
  }

  // side algebras and adjacency validation
  auto circle_alg = [&](int ci, bool left) -> const FrobeniusStructure& {
    return left ? S.circles[ci].label.left : S.circles[ci].label.right;
  };
  std::vector<const FrobeniusStructure*> tri_third_alg(c.top_count(), nullptr);
  for (int s = 0; s < c.top_count(); ++s) {
    auto it = traversed.find(s);
    if (it != traversed.end()) {
      tri_third_alg[s] = &circle_alg(it->second.circle, it->second.f_left);
    } else {
      if (S.triangle_label[s] < 0) fail(ErrorCode::LabelAdjacencyViolation, "untraversed triangle without a label");
      tri_third_alg[s] = &S.algebras[S.triangle_label[s]];
    }
  }
  // edge algebra consistency for uncrossed edges
  std::vector<std::vector<std::pair<int, int>>> edge_inc(c.cell_count(1));
  for (int s = 0; s < c.top_count(); ++s)
    for (int i = 0; i < 3; ++i) edge_inc[c.cell_of(s, {kSides[i].a, kSides[i].b})].push_back({s, i});
  std::vector<const FrobeniusStructure*> edge_alg(c.cell_count(1), nullptr);
  for (int e = 0; e < c.cell_count(1); ++e) {
    if (crossed.count(e)) continue;
    for (auto [s, i] : edge_inc[e]) {
      const FrobeniusStructure* alg;
      auto it = traversed.find(s);
      if (it != traversed.end()) {
        // the uncrossed side of a traversed triangle is its third edge
        alg = tri_third_alg[s];
      } else {
        alg = &S.algebras[S.triangle_label[s]];
      }
      if (edge_alg[e] && !same_structure(*edge_alg[e], *alg))
        fail(ErrorCode::LabelAdjacencyViolation, "edge between different bulk labels");
      edge_alg[e] = alg;
    }
  }

  // vertex side algebra + psi insertion targets (uncrossed incident edge of
  // the same algebra, else accumulate an action on the adjacent strand)
  Graph g(K);
  // variables: (triangle, side) slots for algebra legs; crossed edges get
  // defect variables (split by point insertions)
  std::vector<std::array<int, 3>> slot(c.top_count(), {-1, -1, -1});
  for (int s = 0; s < c.top_count(); ++s) {
    auto it = traversed.find(s);
    for (int i = 0; i < 3; ++i) {
      int e = c.cell_of(s, {kSides[i].a, kSides[i].b});
      if (crossed.count(e)) continue;
      int dim = 0;
      if (it != traversed.end())
        dim = tri_third_alg[s]->dim();
      else
        dim = S.algebras[S.triangle_label[s]].dim();
      slot[s][i] = g.add_var(dim);
    }
  }
  // defect variables per crossed edge: in/out split; the action tensors of
  // the adjacent triangles attach to them
  std::map<int, std::pair<int, int>> defect_var;  // edge -> (upstream var, downstream var)
  std::vector<Vec> pending_action_left(c.top_count());
  std::vector<Vec> pending_action_right(c.top_count());

  std::vector<int> extra_psi_edge(c.cell_count(1), 0);
  struct StrandInsertion {
    int circle;
    bool left;
    Vec element;
  };
  std::vector<StrandInsertion> strand_insertions;
  for (int v = 0; v < c.cell_count(0); ++v) {
    // side algebra of the vertex
    const FrobeniusStructure* valg = nullptr;
    int vcircle = -1;
    bool vleft = false;
    for (int s = 0; s < c.top_count() && !valg; ++s) {
      bool incident = false;
      for (int p = 0; p < 3; ++p)
        if (c.cell_of(s, {p}) == v) incident = true;
      if (!incident) continue;
      auto it = traversed.find(s);
      if (it != traversed.end()) {
        // the shared vertex of the two crossed edges sits opposite the third
        // side; v is on that side exactly when it is not an endpoint of the
        // third edge
        int a = kSides[it->second.third_side].a, b = kSides[it->second.third_side].b;
        bool on_third = c.cell_of(s, {a}) == v || c.cell_of(s, {b}) == v;
        vcircle = it->second.circle;
        vleft = on_third ? it->second.f_left : !it->second.f_left;
        valg = &circle_alg(vcircle, vleft);
        if (on_third) vcircle = -1;  // vertex lies in the bulk on the third-edge side
      } else {
        valg = &S.algebras[S.triangle_label[s]];
        vcircle = -1;
      }
    }
    if (!valg) fail(ErrorCode::Internal, "vertex without incident triangle");
    FrobeniusStructure norm = valg->gamma_normalized();
    // psi insertion: onto the minimal incident uncrossed edge with the same
    // algebra, else act on the defect strand
    int best = -1;
    for (auto [s, i] : [&] {
          std::vector<std::pair<int, int>> incs;
          for (int s2 = 0; s2 < c.top_count(); ++s2)
            for (int i2 = 0; i2 < 3; ++i2) {
              int va = c.cell_of(s2, {kSides[i2].a});
              int vb = c.cell_of(s2, {kSides[i2].b});
              if (va == v || vb == v) incs.push_back({s2, i2});
            }
          return incs;
        }()) {
      int e = c.cell_of(s, {kSides[i].a, kSides[i].b});
      if (crossed.count(e)) continue;
      if (!edge_alg[e] || !same_structure(*edge_alg[e], *valg)) continue;
      if (best < 0 || e < best) best = e;
    }
    if (best >= 0) {
      ++extra_psi_edge[best];
    } else if (vcircle >= 0) {
      strand_insertions.push_back({vcircle, vleft, norm.psi()});
    } else {
      fail(ErrorCode::Unsupported, "no strand available for the vertex Euler insertion");
    }
  }

  // edge copairing factors for uncrossed edges
  for (int e = 0; e < c.cell_count(1); ++e) {
    if (crossed.count(e)) continue;
    if (edge_inc[e].size() != 2) fail(ErrorCode::Internal, "edge incidence count");
    FrobeniusStructure An = edge_alg[e]->gamma_normalized();
    const Algebra& A = An.algebra();
    int n = An.dim();
    Vec z = A.unit;
    int power = extra_psi_edge[e] - 1;
    Vec p = power >= 0 ? An.psi() : An.psi_inverse();
    for (int i = 0; i < std::abs(power); ++i) z = A.multiply(z, p);
    Matrix B = A.left_mult(z) * An.pairing_inverse();
    Factor f;
    int v1 = slot[edge_inc[e][0].first][edge_inc[e][0].second];
    int v2 = slot[edge_inc[e][1].first][edge_inc[e][1].second];
    if (v1 < 0 || v2 < 0) fail(ErrorCode::Internal, "missing slot variable");
    f.vars = {v1, v2};
    f.vals.assign(static_cast<size_t>(n) * n, NFE::zero(K));
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) f.vals[static_cast<size_t>(x) * n + y] = B.at(x, y);
    g.add_factor(std::move(f));
  }

  // untraversed triangle factors (as in the plain evaluator)
  for (int s = 0; s < c.top_count(); ++s) {
    if (traversed.count(s)) continue;
    FrobeniusStructure An = S.algebras[S.triangle_label[s]].gamma_normalized();
    const Algebra& A = An.algebra();
    int n = An.dim();
    auto cyc = boundary_cycle(S.base.orient[s]);
    Factor f;
    f.vars = {slot[s][cyc[0]], slot[s][cyc[1]], slot[s][cyc[2]]};
    f.vals.assign(static_cast<size_t>(n) * n * n, NFE::zero(K));
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        Vec ex(n, NFE::zero(K)), ey(n, NFE::zero(K));
        ex[x] = NFE::one(K);
        ey[y] = NFE::one(K);
        Vec pxy = A.multiply(An.psi(), A.multiply(ex, ey));
        for (int z = 0; z < n; ++z) {
          Vec ez(n, NFE::zero(K));
          ez[z] = NFE::one(K);
          f.vals[(static_cast<size_t>(x) * n + y) * n + z] = An.eps(A.multiply(pxy, ez));
        }
      }
    g.add_factor(std::move(f));
  }

  // defect strands: walk each circle, create defect variables and action factors
  for (size_t ci = 0; ci < S.circles.size(); ++ci) {
    const DefectCircle& circle = S.circles[ci];
    const Bimodule& X = circle.label;
    X.validate();
    const CircleWalk& walk = walks[ci];
    int m = X.m;
    // insertion matrices per crossed edge (point defects + strand psi)
    std::map<int, Matrix> edge_insert;
    for (const auto& [e, mat] : circle.points) {
      if (!std::count(walk.edges.begin(), walk.edges.end(), e))
        fail(ErrorCode::LabelAdjacencyViolation, "point insertion off the circle");
      if (!is_bimodule_map(X, X, mat)) fail(ErrorCode::ShapeError, "point insertion is not a bimodule map");
      auto it = edge_insert.find(e);
      edge_insert[e] = it == edge_insert.end() ? mat : mat * it->second;
    }
    for (const auto& ins : strand_insertions) {
      if (ins.circle != static_cast<int>(ci)) continue;
      Matrix act = ins.left ? X.left_action(ins.element) : X.right_action(ins.element);
      int e = walk.edges[0];
      auto it = edge_insert.find(e);
      edge_insert[e] = it == edge_insert.end() ? act : act * it->second;
    }
    // variables along the walk
    std::map<int, std::pair<int, int>> evars;  // edge -> (before-insertion var, after-insertion var)
    for (int e : walk.edges) {
      int v1 = g.add_var(m);
      int v2 = v1;
      auto it = edge_insert.find(e);
      if (it != edge_insert.end()) {
        v2 = g.add_var(m);
        Factor f;
        f.vars = {v1, v2};  // (in, out)
        f.vals.assign(static_cast<size_t>(m) * m, NFE::zero(K));
        for (int x = 0; x < m; ++x)
          for (int y = 0; y < m; ++y) f.vals[static_cast<size_t>(x) * m + y] = it->second.at(y, x);
        g.add_factor(std::move(f));
      }
      evars[e] = {v1, v2};
    }
    // action factors per traversed triangle: M(in) -> M(out) with the third leg
    for (size_t i = 0; i < walk.triangles.size(); ++i) {
      int s = walk.triangles[i];
      const Crossing& cr = traversed[s];
      int vin = evars[cr.in_edge].second;
      int vout = evars[cr.out_edge].first;
      int third = slot[s][cr.third_side];
      if (third < 0) fail(ErrorCode::Internal, "traversed triangle third slot missing");
      int n = tri_third_alg[s]->dim();
      Factor f;
      f.vars = {vin, vout, third};
      f.vals.assign(static_cast<size_t>(m) * m * n, NFE::zero(K));
      for (int j = 0; j < n; ++j) {
        Vec ej(n, NFE::zero(K));
        ej[j] = NFE::one(K);
        Matrix act = cr.f_left ? X.left_action(ej) : X.right_action(ej);
        for (int x = 0; x < m; ++x)
          for (int y = 0; y < m; ++y)
            f.vals[(static_cast<size_t>(x) * m + y) * n + j] = act.at(y, x);
      }
      g.add_factor(std::move(f));
    }
  }

  StateSumResult r;
  r.value = g.contract();
  r.simplex_count = c.top_count();
  r.term_count = g.touched;
  return r;
}

// ----------------------------------------------------------------------
// 3d defect evaluation

StateSumResult orbifold_evaluate_3d(const Stratified3d& S) {
  Complex c(S.base);
  if (c.dim() != 3) fail(ErrorCode::ShapeError, "3d evaluator needs a 3-manifold");
  if (!c.closed()) fail(ErrorCode::NotClosed, "3d evaluator needs a closed 3-manifold");
  c.validate_oriented();
  if (!c.order_preserving_gluings()) fail(ErrorCode::Unsupported, "3d gluings must be order-preserving");
  if (!S.theory.vertex_weight) fail(ErrorCode::MissingEulerDatum, "fusion data without the Euler vertex weight");
  auto rep = check_fusion(S.theory);
  if (!rep.all()) fail(ErrorCode::ShapeError, "fusion data fails validation: " + rep.witness);

  if (S.spheres.empty()) {
    std::vector<int> base_labels(S.theory.count());
    std::iota(base_labels.begin(), base_labels.end(), 0);
    std::vector<std::vector<int>> edge_labels(c.cell_count(1), base_labels);
    return tv_system(c, S.theory.sys, *S.theory.vertex_weight, edge_labels);
  }
  if (S.spheres.size() != 1) fail(ErrorCode::Unsupported, "v1 supports a single defect sphere");
  const DefectSphere& sph = S.spheres[0];
  const ModuleData& md = sph.label;
  if (md.base.count() != S.theory.count() || (md.rbase && md.rbase->count() != S.theory.count()))
    fail(ErrorCode::LabelAdjacencyViolation, "module data does not match the bulk theory");
  int center = sph.center_vertex;
  for (const Gluing& gl : S.base.gluings)
    for (const auto& vv : {gl.from, gl.to})
      for (int x : vv)
        if (x == center) fail(ErrorCode::Unsupported, "defect sphere center touches a gluing");

  LabelSystem rs = md.right_system();
  auto p = rs.check_pentagon();
  if (!p.ok) fail(ErrorCode::ShapeError, "module data fails the mixed pentagon: " + p.witness);
  const int k = S.theory.count();

  // crossed edges: those containing the center vertex; validate transversality
  std::vector<std::vector<int>> edge_labels(c.cell_count(1));
  std::vector<int> base_labels(k), mod_labels(md.simples);
  std::iota(base_labels.begin(), base_labels.end(), 0);
  for (int i = 0; i < md.simples; ++i) mod_labels[i] = k + i;
  for (int e = 0; e < c.cell_count(1); ++e) {
    bool has_center = false;
    for (const auto& mem : c.cell(1, e).members)
      for (int v : mem)
        if (v == center) has_center = true;
    edge_labels[e] = has_center ? mod_labels : base_labels;
  }
  for (int s = 0; s < c.top_count(); ++s) {
    const auto& sx = S.base.simplices[s];
    int pos = -1;
    for (int i = 0; i < 4; ++i)
      if (sx[i] == center) pos = i;
    if (pos > 0) fail(ErrorCode::Unsupported, "defect sphere center must be order-minimal in its star");
  }
  return tv_system(c, rs, *S.theory.vertex_weight, edge_labels);
}

// ----------------------------------------------------------------------
// cylinder idempotents and state spaces

namespace {

// contract with fixed boundary variables; returns the value
NFE contract_fixed(Graph g, const std::vector<std::pair<int, int>>& fixed) {
  for (auto [var, val] : fixed) {
    for (auto& f : g.factors) {
      std::vector<int> positions;
      for (size_t i = 0; i < f.vars.size(); ++i)
        if (f.vars[i] == var) positions.push_back(static_cast<int>(i));
      if (positions.empty()) continue;
      SparseFactor nf;
      std::vector<int> keep;
      for (size_t i = 0; i < f.vars.size(); ++i)
        if (f.vars[i] != var) {
          nf.vars.push_back(f.vars[i]);
          nf.dims.push_back(f.dims[i]);
          keep.push_back(static_cast<int>(i));
        }
      for (const auto& [k, v] : f.items) {
        std::vector<int> a = Graph::unpack(k, f.dims);
        bool ok = true;
        for (int pos : positions)
          if (a[pos] != val) ok = false;
        if (!ok) continue;
        uint64_t ko = 0;
        for (size_t i = 0; i < keep.size(); ++i) ko = ko * nf.dims[i] + a[keep[i]];
        nf.items.push_back({ko, v});
      }
      f = std::move(nf);
    }
    g.domain[var] = 1;
  }
  std::vector<SparseFactor> keepf;
  for (auto& f : g.factors) {
    if (f.vars.empty()) {
      NFE v = NFE::zero(g.field);
      for (const auto& [k, x] : f.items) v += x;
      g.scalar *= v;
    } else {
      keepf.push_back(std::move(f));
    }
  }
  g.factors = std::move(keepf);
  return g.contract();
}

}  // namespace

CylinderIdempotent state_space_tv(const OrderedTriangulation& surface, const FusionData& F) {
  Complex sc(surface);
  if (sc.dim() != 2) fail(ErrorCode::ShapeError, "state space needs a closed surface");
  if (!sc.closed()) fail(ErrorCode::NotClosed, "state space needs a closed surface");
  if (!F.vertex_weight) fail(ErrorCode::MissingEulerDatum, "fusion data without the Euler vertex weight");
  CylinderComplex cyl = prism_cylinder(surface);
  Complex c(cyl.tri);
  c.validate_oriented();
  if (!c.order_preserving_gluings()) fail(ErrorCode::Unsupported, "3d gluings must be order-preserving");
  FieldTag K = F.sys.field;
  const int off = cyl.vertex_offset;
  const int k = F.count();

  // classify cells: bottom (all ids < off), top (all ids >= off), interior
  auto cell_kind = [&](int dim, int id) {
    bool lo = true, hi = true;
    for (const auto& mem : c.cell(dim, id).members)
      for (int v : mem) {
        if (v >= off) lo = false;
        if (v < off) hi = false;
      }
    return lo ? 0 : (hi ? 1 : 2);  // bottom, top, interior
  };

  // base edge cells in a canonical order; boundary labelings live on them
  Complex base(surface);
  const int BE = base.cell_count(1);
  // map base edge -> bottom/top cylinder edge cell
  std::vector<int> bottom_edge(BE, -1), top_edge(BE, -1);
  for (int e = 0; e < BE; ++e) {
    std::vector<int> rep = base.cell(1, e).members[0];
    std::vector<int> lo = rep, hi = rep;
    for (int& v : hi) v += off;
    for (int id = 0; id < c.cell_count(1); ++id)
      for (const auto& mem : c.cell(1, id).members) {
        if (mem == lo) bottom_edge[e] = id;
        if (mem == hi) top_edge[e] = id;
      }
    if (bottom_edge[e] < 0 || top_edge[e] < 0) fail(ErrorCode::Internal, "boundary edge lookup failed");
  }

  // admissible boundary labelings of the base
  std::vector<std::vector<int>> states;
  {
    std::vector<int> cur(BE, 0);
    std::function<void(int)> rec = [&](int pos) {
      if (pos == BE) {
        for (int s = 0; s < base.top_count(); ++s) {
          int a = cur[base.cell_of(s, {0, 1})];
          int b = cur[base.cell_of(s, {1, 2})];
          int cc = cur[base.cell_of(s, {0, 2})];
          if (!F.sys.n(a, b, cc)) return;
        }
        states.push_back(cur);
        return;
      }
      for (int l = 0; l < k; ++l) {
        cur[pos] = l;
        rec(pos + 1);
      }
    };
    rec(0);
  }
  if (states.empty()) fail(ErrorCode::Internal, "no admissible boundary labelings");

  // build the cylinder factor graph once (without boundary-cell weights),
  // then close each matrix entry by fixing boundary labels
  Graph g(K);
  const int E = c.cell_count(1);
  std::vector<int> var(E);
  for (int e = 0; e < E; ++e) var[e] = g.add_var(k);

  std::vector<int> nplus(E, 0);
  for (int s = 0; s < c.top_count(); ++s) {
    ++nplus[c.cell_of(s, {0, 2})];
    ++nplus[c.cell_of(s, {1, 3})];
  }
  for (int e = 0; e < E; ++e) {
    int kind = cell_kind(1, e);
    int num;
    if (kind == 2) {
      if (nplus[e] % 2 != 0) fail(ErrorCode::Unsupported, "odd diagonal-slot count on an interior cylinder edge");
      num = 1 - nplus[e] / 2;
    } else if (kind == 0) {
      if (nplus[e] % 2 != 0) fail(ErrorCode::Unsupported, "odd local diagonal-slot count on the incoming boundary");
      num = 1 - nplus[e] / 2;
    } else {
      if (nplus[e] % 2 != 0) fail(ErrorCode::Unsupported, "odd local diagonal-slot count on the outgoing boundary");
      num = -nplus[e] / 2;
    }
    Factor f;
    f.vars = {var[e]};
    for (int l = 0; l < k; ++l) f.vals.push_back(F.qdim(l).pow(num));
    g.add_factor(std::move(f));
  }
  for (int tcell = 0; tcell < c.cell_count(2); ++tcell) {
    int fs = -1, fa = 0, fb = 0, fc2 = 0;
    for (int s = 0; s < c.top_count() && fs < 0; ++s)
      for (int omit = 0; omit < 4 && fs < 0; ++omit) {
        std::vector<int> pos;
        for (int p2 = 0; p2 < 4; ++p2)
          if (p2 != omit) pos.push_back(p2);
        if (c.cell_of(s, pos) == tcell) {
          fs = s;
          fa = c.cell_of(s, {pos[0], pos[1]});
          fb = c.cell_of(s, {pos[1], pos[2]});
          fc2 = c.cell_of(s, {pos[0], pos[2]});
        }
      }
    Factor f;
    f.vars = {var[fa], var[fb], var[fc2]};
    f.vals.assign(static_cast<size_t>(k) * k * k, NFE::zero(K));
    size_t idx = 0;
    for (int la = 0; la < k; ++la)
      for (int lb = 0; lb < k; ++lb)
        for (int lc = 0; lc < k; ++lc) f.vals[idx++] = F.sys.n(la, lb, lc) ? NFE::one(K) : NFE::zero(K);
    g.add_factor(std::move(f));
  }
  for (int s = 0; s < c.top_count(); ++s) {
    int ea = c.cell_of(s, {0, 1}), eb = c.cell_of(s, {1, 2}), ec = c.cell_of(s, {2, 3});
    int ee = c.cell_of(s, {0, 2}), ef = c.cell_of(s, {1, 3}), eg = c.cell_of(s, {0, 3});
    Factor f;
    f.vars = {var[ea], var[eb], var[ec], var[eg], var[ee], var[ef]};
    f.vals.assign(static_cast<size_t>(k) * k * k * k * k * k, NFE::zero(K));
    size_t idx = 0;
    for (int la = 0; la < k; ++la)
      for (int lb = 0; lb < k; ++lb)
        for (int lc = 0; lc < k; ++lc)
          for (int lg = 0; lg < k; ++lg)
            for (int le = 0; le < k; ++le)
              for (int lf = 0; lf < k; ++lf) {
                NFE v = NFE::zero(K);
                if (F.sys.n(la, lb, le) && F.sys.n(le, lc, lg) && F.sys.n(lb, lc, lf) && F.sys.n(la, lf, lg)) {
                  if (cyl.tri.orient[s] > 0) {
                    v = F.sys.fsym(la, lb, lc, lg, le, lf);
                  } else {
                    Matrix inv = F.sys.fmatrix_inverse(la, lb, lc, lg);
                    auto rows = F.sys.rows_of(la, lb, lc, lg);
                    auto cols = F.sys.cols_of(la, lb, lc, lg);
                    int ri = -1, ci = -1;
                    for (size_t i = 0; i < rows.size(); ++i)
                      if (rows[i] == le) ri = static_cast<int>(i);
                    for (size_t i = 0; i < cols.size(); ++i)
                      if (cols[i] == lf) ci = static_cast<int>(i);
                    v = inv.at(ci, ri);
                  }
                }
                f.vals[idx++] = v;
              }
    g.add_factor(std::move(f));
  }
  // vertex weights: interior + bottom
  int weighted_vertices = 0;
  for (int vcell = 0; vcell < c.cell_count(0); ++vcell)
    if (cell_kind(0, vcell) != 1) ++weighted_vertices;
  g.scalar *= F.vertex_weight->pow(weighted_vertices);

  const int S = static_cast<int>(states.size());
  Matrix Kmat(S, S, K);
  for (int col = 0; col < S; ++col)
    for (int row = 0; row < S; ++row) {
      std::vector<std::pair<int, int>> fixed;
      for (int e = 0; e < BE; ++e) {
        fixed.push_back({var[bottom_edge[e]], states[col][e]});
        fixed.push_back({var[top_edge[e]], states[row][e]});
      }
      Kmat.at(row, col) = contract_fixed(g, fixed);
    }
  CylinderIdempotent out;
  if (!(Kmat * Kmat == Kmat)) fail(ErrorCode::Internal, "cylinder operator is not idempotent");
  out.k = Kmat;
  out.rank = Kmat.rank();
  out.boundary_states = S;
  return out;
}

CylinderIdempotent state_space_fhk(const OrderedTriangulation& circle, const FrobeniusStructure& F) {
  Complex cc(circle);
  if (cc.dim() != 1) fail(ErrorCode::ShapeError, "2d state space needs a circle");
  if (!cc.closed()) fail(ErrorCode::NotClosed, "2d state space needs a closed circle");
  CylinderComplex cyl = prism_cylinder(circle);
  Complex c(cyl.tri);
  c.validate_oriented();
  FrobeniusStructure An = F.gamma_normalized();
  const Algebra& A = An.algebra();
  FieldTag K = An.field();
  const int n = An.dim();
  const int off = cyl.vertex_offset;

  Graph g(K);
  std::vector<std::array<int, 3>> slot(c.top_count());
  for (int s = 0; s < c.top_count(); ++s)
    for (int i = 0; i < 3; ++i) slot[s][i] = g.add_var(n);

  auto cell_kind = [&](int dim, int id) {
    bool lo = true, hi = true;
    for (const auto& mem : c.cell(dim, id).members)
      for (int v : mem) {
        if (v >= off) lo = false;
        if (v < off) hi = false;
      }
    return lo ? 0 : (hi ? 1 : 2);
  };

  std::vector<std::vector<std::pair<int, int>>> edge_inc(c.cell_count(1));
  for (int s = 0; s < c.top_count(); ++s)
    for (int i = 0; i < 3; ++i) edge_inc[c.cell_of(s, {kSides[i].a, kSides[i].b})].push_back({s, i});

  // bottom vertices put their psi on their minimal incident bottom edge
  std::vector<int> extra(c.cell_count(1), 0);
  for (int v = 0; v < c.cell_count(0); ++v) {
    if (cell_kind(0, v) != 0) continue;
    int best = -1;
    for (int s = 0; s < c.top_count(); ++s)
      for (int i = 0; i < 3; ++i) {
        int va = c.cell_of(s, {kSides[i].a}), vb = c.cell_of(s, {kSides[i].b});
        if (va != v && vb != v) continue;
        int e = c.cell_of(s, {kSides[i].a, kSides[i].b});
        if (cell_kind(1, e) != 0) continue;
        if (best < 0 || e < best) best = e;
      }
    if (best < 0) fail(ErrorCode::Internal, "bottom vertex without bottom edge");
    ++extra[best];
  }

  // boundary variables: bottom edges via a copairing factor, top edges direct
  Complex base(circle);
  const int BE = base.cell_count(1);
  std::vector<int> bvar(BE, -1), tvar(BE, -1);
  for (int e = 0; e < c.cell_count(1); ++e) {
    int kind = cell_kind(1, e);
    if (kind == 2) {
      if (edge_inc[e].size() != 2) fail(ErrorCode::Internal, "interior edge incidence count");
      Vec z = A.unit;
      int power = extra[e] - 1;
      Vec p = power >= 0 ? An.psi() : An.psi_inverse();
      for (int i = 0; i < std::abs(power); ++i) z = A.multiply(z, p);
      Matrix B = A.left_mult(z) * An.pairing_inverse();
      Factor f;
      f.vars = {slot[edge_inc[e][0].first][edge_inc[e][0].second],
                slot[edge_inc[e][1].first][edge_inc[e][1].second]};
      f.vals.assign(static_cast<size_t>(n) * n, NFE::zero(K));
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) f.vals[static_cast<size_t>(x) * n + y] = B.at(x, y);
      g.add_factor(std::move(f));
      continue;
    }
    if (edge_inc[e].size() != 1) fail(ErrorCode::Internal, "boundary edge incidence count");
    // locate the base edge id
    int base_id = -1;
    std::vector<int> rep = c.cell(1, e).members[0];
    std::vector<int> low = rep;
    for (int& v : low)
      if (v >= off) v -= off;
    for (int be = 0; be < BE; ++be)
      for (const auto& mem : base.cell(1, be).members)
        if (mem == low) base_id = be;
    if (base_id < 0) fail(ErrorCode::Internal, "boundary edge lookup failed");
    if (kind == 0) {
      int bv = g.add_var(n);
      bvar[base_id] = bv;
      Vec z = A.unit;
      int power = extra[e] - 1;
      Vec p = power >= 0 ? An.psi() : An.psi_inverse();
      for (int i = 0; i < std::abs(power); ++i) z = A.multiply(z, p);
      Matrix B = A.left_mult(z) * An.pairing_inverse();
      Factor f;
      f.vars = {bv, slot[edge_inc[e][0].first][edge_inc[e][0].second]};
      f.vals.assign(static_cast<size_t>(n) * n, NFE::zero(K));
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) f.vals[static_cast<size_t>(x) * n + y] = B.at(x, y);
      g.add_factor(std::move(f));
    } else {
      tvar[base_id] = slot[edge_inc[e][0].first][edge_inc[e][0].second];
    }
  }

  // triangle factors
  for (int s = 0; s < c.top_count(); ++s) {
    auto cyc = boundary_cycle(cyl.tri.orient[s]);
    Factor f;
    f.vars = {slot[s][cyc[0]], slot[s][cyc[1]], slot[s][cyc[2]]};
    f.vals.assign(static_cast<size_t>(n) * n * n, NFE::zero(K));
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        Vec ex(n, NFE::zero(K)), ey(n, NFE::zero(K));
        ex[x] = NFE::one(K);
        ey[y] = NFE::one(K);
        Vec pxy = A.multiply(An.psi(), A.multiply(ex, ey));
        for (int z = 0; z < n; ++z) {
          Vec ez(n, NFE::zero(K));
          ez[z] = NFE::one(K);
          f.vals[(static_cast<size_t>(x) * n + y) * n + z] = An.eps(A.multiply(pxy, ez));
        }
      }
    g.add_factor(std::move(f));
  }

  long S = 1;
  for (int i = 0; i < BE; ++i) S *= n;
  Matrix Kmat(static_cast<int>(S), static_cast<int>(S), K);
  for (long col = 0; col < S; ++col)
    for (long row = 0; row < S; ++row) {
      std::vector<std::pair<int, int>> fixed;
      long rc = col, rr = row;
      for (int e = 0; e < BE; ++e) {
        fixed.push_back({bvar[e], static_cast<int>(rc % n)});
        fixed.push_back({tvar[e], static_cast<int>(rr % n)});
        rc /= n;
        rr /= n;
      }
      Kmat.at(static_cast<int>(row), static_cast<int>(col)) = contract_fixed(g, fixed);
    }
  CylinderIdempotent out;
  if (!(Kmat * Kmat == Kmat)) fail(ErrorCode::Internal, "cylinder operator is not idempotent");
  out.k = Kmat;
  out.rank = Kmat.rank();
  out.boundary_states = S;
  return out;
}

// ----------------------------------------------------------------------

Rat dw_partition(const OrderedTriangulation& T, int N) {
  Complex c(T);
  if (!c.closed()) fail(ErrorCode::NotClosed, "oracle needs a closed manifold");
  const int E = c.cell_count(1);
  // triangle constraints: x_ab + x_bc - x_ac = 0 mod N
  struct Tri {
    int a, b, cc;
  };
  std::vector<Tri> tris;
  if (c.dim() == 2) {
    for (int s = 0; s < c.top_count(); ++s)
      tris.push_back({c.cell_of(s, {0, 1}), c.cell_of(s, {1, 2}), c.cell_of(s, {0, 2})});
  } else {
    for (int tcell = 0; tcell < c.cell_count(2); ++tcell) {
      for (int s = 0; s < c.top_count(); ++s) {
        bool done = false;
        for (int omit = 0; omit < 4 && !done; ++omit) {
          std::vector<int> pos;
          for (int p = 0; p < 4; ++p)
            if (p != omit) pos.push_back(p);
          if (c.cell_of(s, pos) == tcell) {
            tris.push_back({c.cell_of(s, {pos[0], pos[1]}), c.cell_of(s, {pos[1], pos[2]}),
                            c.cell_of(s, {pos[0], pos[2]})});
            done = true;
          }
        }
        if (done) break;
      }
    }
  }
  long count = 0;
  std::vector<int> x(E, 0);
  std::function<void(int)> rec = [&](int pos) {
    if (pos == E) {
      ++count;
      return;
    }
    for (int v = 0; v < N; ++v) {
      x[pos] = v;
      bool ok = true;
      for (const Tri& t : tris) {
        if (t.a > pos || t.b > pos || t.cc > pos) continue;
        if ((x[t.a] + x[t.b] - x[t.cc]) % N != 0) {
          ok = false;
          break;
        }
      }
      if (ok) rec(pos + 1);
    }
  };
  rec(0);
  Rat out(count);
  for (int v = 0; v < c.cell_count(0); ++v) out /= N;
  return out;
}

}  // namespace orbkit
