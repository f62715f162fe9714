#include "orbkit/fusion.hpp"

#include <sstream>
#include <tuple>

namespace orbkit {

uint64_t LabelSystem::key(int a, int b, int c, int d, int e, int f) {
  uint64_t k = 0;
  for (int v : {a, b, c, d, e, f}) k = (k << 10) | static_cast<uint64_t>(v);
  return k;
}

NFE LabelSystem::fsym(int a, int b, int c, int d, int e, int f) const {
  if (a == unit) return (e == b && f == d && n(b, c, d)) ? NFE::one(field) : NFE::zero(field);
  if (b == unit) return (e == a && f == c && n(a, c, d)) ? NFE::one(field) : NFE::zero(field);
  if (c == unit) return (e == d && f == b && n(a, b, d)) ? NFE::one(field) : NFE::zero(field);
  if (!(n(a, b, e) && n(e, c, d) && n(b, c, f) && n(a, f, d))) return NFE::zero(field);
  auto it = F.find(key(a, b, c, d, e, f));
  if (it == F.end())
    fail(ErrorCode::ShapeError, "missing F-symbol for admissible tuple (" + std::to_string(a) + "," +
                                    std::to_string(b) + "," + std::to_string(c) + ";" + std::to_string(d) + ")");
  return it->second;
}

std::vector<int> LabelSystem::rows_of(int a, int b, int c, int d) const {
  std::vector<int> out;
  for (int e = 0; e < count; ++e)
    if (n(a, b, e) && n(e, c, d)) out.push_back(e);
  return out;
}

std::vector<int> LabelSystem::cols_of(int a, int b, int c, int d) const {
  std::vector<int> out;
  for (int f = 0; f < count; ++f)
    if (n(b, c, f) && n(a, f, d)) out.push_back(f);
  return out;
}

Matrix LabelSystem::fmatrix(int a, int b, int c, int d) const {
  auto rows = rows_of(a, b, c, d), cols = cols_of(a, b, c, d);
  Matrix m(static_cast<int>(rows.size()), static_cast<int>(cols.size()), field);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j)
      m.at(static_cast<int>(i), static_cast<int>(j)) = fsym(a, b, c, d, rows[i], cols[j]);
  return m;
}

Matrix LabelSystem::fmatrix_inverse(int a, int b, int c, int d) const {
  Matrix m = fmatrix(a, b, c, d);
  if (m.rows() != m.cols() || !m.invertible())
    fail(ErrorCode::ShapeError, "F-matrix (" + std::to_string(a) + "," + std::to_string(b) + "," +
                                    std::to_string(c) + ";" + std::to_string(d) + ") is not invertible");
  return m.inverse();
}

bool LabelSystem::unit_constraints_ok(std::string* witness) const {
  for (const auto& [k, v] : F) {
    int idx[6];
    uint64_t kk = k;
    for (int i = 5; i >= 0; --i) {
      idx[i] = static_cast<int>(kk & 0x3ff);
      kk >>= 10;
    }
    auto [a, b, c, d, e, f] = std::tuple(idx[0], idx[1], idx[2], idx[3], idx[4], idx[5]);
    if (a == unit || b == unit || c == unit) {
      NFE expected = fsym(a, b, c, d, e, f);
      if (!(v == expected)) {
        if (witness)
          *witness = "stored unit F-symbol differs from the triangle constraint at (" + std::to_string(a) + "," +
                     std::to_string(b) + "," + std::to_string(c) + ")";
        return false;
      }
      continue;
    }
    if (!(n(a, b, e) && n(e, c, d) && n(b, c, f) && n(a, f, d))) {
      if (witness) *witness = "stored F-symbol with inadmissible indices";
      return false;
    }
  }
  return true;
}

bool LabelSystem::fmatrices_invertible(std::string* witness) const {
  for (int a = 0; a < count; ++a)
    for (int b = 0; b < count; ++b)
      for (int c = 0; c < count; ++c)
        for (int d = 0; d < count; ++d) {
          auto rows = rows_of(a, b, c, d), cols = cols_of(a, b, c, d);
          if (rows.empty() && cols.empty()) continue;
          if (rows.size() != cols.size()) {
            if (witness)
              *witness = "F-matrix (" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) +
                         ";" + std::to_string(d) + ") is not square";
            return false;
          }
          if (!fmatrix(a, b, c, d).invertible()) {
            if (witness)
              *witness = "F-matrix (" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) +
                         ";" + std::to_string(d) + ") is singular";
            return false;
          }
        }
  return true;
}

LabelSystem::PentagonReport LabelSystem::check_pentagon() const {
  PentagonReport rep;
  for (int A = 0; A < count; ++A)
    for (int B = 0; B < count; ++B)
      for (int u = 0; u < count; ++u) {
        if (!n(A, B, u)) continue;
        for (int C = 0; C < count; ++C)
          for (int v = 0; v < count; ++v) {
            if (!n(u, C, v)) continue;
            for (int D = 0; D < count; ++D)
              for (int E = 0; E < count; ++E) {
                if (!n(v, D, E)) continue;
                for (int l = 0; l < count; ++l) {
                  if (!n(C, D, l)) continue;
                  for (int k = 0; k < count; ++k) {
                    if (!n(B, l, k) || !n(A, k, E)) continue;
                    NFE lhs = fsym(u, C, D, E, v, l) * fsym(A, B, l, E, u, k);
                    NFE rhs = NFE::zero(field);
                    for (int h = 0; h < count; ++h) {
                      NFE t = fsym(A, B, C, v, u, h);
                      if (t.is_zero()) continue;
                      t *= fsym(A, h, D, E, v, k);
                      if (t.is_zero()) continue;
                      t *= fsym(B, C, D, k, h, l);
                      rhs += t;
                    }
                    if (!(lhs == rhs)) {
                      rep.ok = false;
                      std::ostringstream os;
                      os << "pentagon fails at (A,B,C,D;E)=(" << A << "," << B << "," << C << "," << D << ";" << E
                         << ") source (u,v)=(" << u << "," << v << ") target (k,l)=(" << k << "," << l << ")";
                      rep.witness = os.str();
                      return rep;
                    }
                  }
                }
              }
          }
      }
  return rep;
}

NFE FusionData::global_dim() const {
  NFE s = NFE::zero(sys.field);
  for (int i = 0; i < count(); ++i) s += qdim(i) * qdim(i);
  return s;
}

FusionReport check_fusion(const FusionData& f) {
  FusionReport rep;
  const int k = f.count();
  FieldTag K = f.sys.field;
  rep.globaldim = NFE::zero(K);
  if (k <= 0 || f.sys.count != k || f.sys.base_count != k || static_cast<int>(f.dual.size()) != k ||
      static_cast<int>(f.sys.weight.size()) != k || f.sys.Nt.size() != static_cast<size_t>(k) * k * k) {
    rep.witness = "inconsistent tensor shapes";
    return rep;
  }
  rep.shape = true;
  rep.globaldim = f.global_dim();

  rep.unit = true;
  if (f.dual[0] != 0) rep.unit = false;
  for (int a = 0; a < k && rep.unit; ++a) {
    if (f.dual[a] < 0 || f.dual[a] >= k || f.dual[f.dual[a]] != a) rep.unit = false;
    for (int b = 0; b < k && rep.unit; ++b) {
      if (f.sys.n(0, a, b) != (a == b)) rep.unit = false;
      if (f.sys.n(a, 0, b) != (a == b)) rep.unit = false;
      if (f.sys.n(a, b, 0) != (b == f.dual[a])) rep.unit = false;
    }
  }
  if (!rep.unit) rep.witness = "unit/duality constraints fail";
  std::string w;
  if (rep.unit && !f.sys.unit_constraints_ok(&w)) {
    rep.unit = false;
    rep.witness = w;
  }
  if (rep.unit && !f.sys.fmatrices_invertible(&w)) {
    rep.unit = false;
    rep.witness = w;
  }

  auto pent = f.sys.check_pentagon();
  rep.pentagon = pent.ok;
  if (!pent.ok && rep.witness.empty()) rep.witness = pent.witness;

  rep.spherical = true;
  if (!(f.qdim(0) == NFE::one(K))) rep.spherical = false;
  for (int a = 0; a < k && rep.spherical; ++a) {
    if (f.qdim(a).is_zero() || !(f.qdim(a) == f.qdim(f.dual[a]))) rep.spherical = false;
    for (int b = 0; b < k && rep.spherical; ++b) {
      NFE lhs = f.qdim(a) * f.qdim(b);
      NFE rhs = NFE::zero(K);
      for (int c = 0; c < k; ++c)
        if (f.sys.n(a, b, c)) rhs += f.qdim(c);
      if (!(lhs == rhs)) rep.spherical = false;
    }
  }
  if (!rep.spherical && rep.witness.empty()) rep.witness = "quantum dimensions fail sphericality constraints";
  if (f.vertex_weight && rep.shape) {
    if (!(*f.vertex_weight * rep.globaldim == NFE::one(K))) {
      rep.spherical = false;
      rep.witness = "euler vertex weight does not invert the global dimension";
    }
  }
  return rep;
}

bool check_rigidity_strong(const FusionData& f, std::string* witness) {
  const int k = f.count();
  for (int c = 0; c < k; ++c)
    for (int x = 0; x < k; ++x)
      for (int kk = 0; kk < k; ++kk)
        for (int j = 0; j < k; ++j) {
          std::vector<int> rows, cols;
          for (int w = 0; w < k; ++w)
            if (f.sys.n(c, x, w) && f.sys.n(kk, j, w)) rows.push_back(w);
          for (int i = 0; i < k; ++i)
            if (f.sys.n(i, j, x) && f.sys.n(c, i, kk)) cols.push_back(i);
          if (rows.empty() && cols.empty()) continue;
          if (rows.size() != cols.size()) {
            if (witness)
              *witness = "lax structure block (c=" + std::to_string(c) + ",x=" + std::to_string(x) +
                         ",k=" + std::to_string(kk) + ",j=" + std::to_string(j) + ") is not square";
            return false;
          }
          Matrix m(static_cast<int>(rows.size()), static_cast<int>(cols.size()), f.sys.field);
          for (size_t r = 0; r < rows.size(); ++r)
            for (size_t cc = 0; cc < cols.size(); ++cc)
              m.at(static_cast<int>(r), static_cast<int>(cc)) = f.sys.fsym(c, cols[cc], j, rows[r], kk, x);
          if (!m.invertible()) {
            if (witness)
              *witness = "lax structure block (c=" + std::to_string(c) + ",x=" + std::to_string(x) +
                         ",k=" + std::to_string(kk) + ",j=" + std::to_string(j) + ") is singular";
            return false;
          }
        }
  return true;
}

// ----------------------------------------------------------------------

void CYData::validate() const {
  if (static_cast<int>(traces.size()) != simples) fail(ErrorCode::ShapeError, "trace list length mismatch");
  for (const NFE& t : traces)
    if (t.is_zero()) fail(ErrorCode::DegenerateTracePairing, "zero trace scalar on a simple object");
}

std::vector<int> SSFunctor::apply_obj(const std::vector<int>& x) const {
  std::vector<int> y(dst, 0);
  for (int j = 0; j < dst; ++j)
    for (int i = 0; i < src; ++i) y[j] += mult[j][i] * x[i];
  return y;
}

SSFunctor SSFunctor::transpose() const {
  SSFunctor t;
  t.src = dst;
  t.dst = src;
  t.mult.assign(t.dst, std::vector<int>(t.src, 0));
  for (int j = 0; j < dst; ++j)
    for (int i = 0; i < src; ++i) t.mult[i][j] = mult[j][i];
  return t;
}

SSMor ss_identity(const std::vector<int>& x, FieldTag f) {
  SSMor m;
  for (int xi : x) m.blocks.push_back(Matrix::identity(xi, f));
  return m;
}

SSMor ss_compose(const SSMor& g, const SSMor& f) {
  SSMor r;
  for (size_t i = 0; i < f.blocks.size(); ++i) r.blocks.push_back(g.blocks[i] * f.blocks[i]);
  return r;
}

SSMor ss_apply(const SSFunctor& F, const std::vector<int>& X, const std::vector<int>& Y, const SSMor& phi,
               FieldTag field) {
  SSMor out;
  for (int j = 0; j < F.dst; ++j) {
    int rows = 0, cols = 0;
    for (int i = 0; i < F.src; ++i) {
      rows += F.mult[j][i] * Y[i];
      cols += F.mult[j][i] * X[i];
    }
    Matrix block(rows, cols, field);
    int roff = 0, coff = 0;
    for (int i = 0; i < F.src; ++i)
      for (int s = 0; s < F.mult[j][i]; ++s) {
        for (int r = 0; r < Y[i]; ++r)
          for (int c = 0; c < X[i]; ++c) block.at(roff + r, coff + c) = phi.blocks[i].at(r, c);
        roff += Y[i];
        coff += X[i];
      }
    out.blocks.push_back(std::move(block));
  }
  return out;
}

namespace {

std::vector<int> simple_obj(int simples, int i) {
  std::vector<int> v(simples, 0);
  v[i] = 1;
  return v;
}

// counit-style family eps: F.G => Id, component at Z in the stepwise basis
SSMor counit_component(const std::vector<SSMor>& eps, const SSFunctor& F, const SSFunctor& G,
                       const std::vector<int>& Z, FieldTag field) {
  SSMor out;
  std::vector<int> GZ = G.apply_obj(Z);
  for (int j = 0; j < F.dst; ++j) {
    int cols = 0;
    for (int i = 0; i < F.src; ++i) cols += F.mult[j][i] * GZ[i];
    Matrix block(Z[j], cols, field);
    int off = 0;
    for (int i = 0; i < F.src; ++i)
      for (int s = 0; s < F.mult[j][i]; ++s) {
        int inner = 0;
        for (int j2 = 0; j2 < G.src; ++j2)
          for (int s2 = 0; s2 < G.mult[i][j2]; ++s2)
            for (int t = 0; t < Z[j2]; ++t) {
              if (j2 == j) {
                int sigma = 0;
                for (int i2 = 0; i2 < i; ++i2) sigma += F.mult[j][i2] * G.mult[i2][j];
                sigma += s * G.mult[i][j] + s2;
                block.at(t, off + inner) = eps[j].blocks[j].at(0, sigma);
              }
              ++inner;
            }
        off += F.mult[j][i] * GZ[i];
      }
    out.blocks.push_back(std::move(block));
  }
  return out;
}

// unit-style family eta: Id => G.F, component at Z
SSMor unit_component(const std::vector<SSMor>& eta, const SSFunctor& G, const SSFunctor& F,
                     const std::vector<int>& Z, FieldTag field) {
  SSMor out;
  std::vector<int> FZ = F.apply_obj(Z);
  for (int i = 0; i < G.dst; ++i) {
    int rows = 0;
    for (int j = 0; j < G.src; ++j) rows += G.mult[i][j] * FZ[j];
    Matrix block(rows, Z[i], field);
    int off = 0;
    for (int j = 0; j < G.src; ++j)
      for (int s = 0; s < G.mult[i][j]; ++s) {
        int inner = 0;
        for (int i2 = 0; i2 < F.src; ++i2)
          for (int s2 = 0; s2 < F.mult[j][i2]; ++s2)
            for (int t = 0; t < Z[i2]; ++t) {
              if (i2 == i) {
                int sigma = 0;
                for (int j2 = 0; j2 < j; ++j2) sigma += G.mult[i][j2] * F.mult[j2][i];
                sigma += s * F.mult[j][i] + s2;
                block.at(off + inner, t) = eta[i].blocks[i].at(sigma, 0);
              }
              ++inner;
            }
        off += G.mult[i][j] * FZ[j];
      }
    out.blocks.push_back(std::move(block));
  }
  return out;
}

NFE cy_trace(const CYData& C, const SSMor& endo) {
  NFE t = NFE::zero(C.field);
  for (int i = 0; i < C.simples; ++i) t += C.traces[i] * endo.blocks[i].trace();
  return t;
}

bool ss_is_identity(const SSMor& m) {
  for (const Matrix& b : m.blocks)
    if (!(b.rows() == 0 || b.is_identity())) return false;
  return true;
}

}  // namespace

SSMor nat_component(const std::vector<SSMor>&, const SSFunctor&, const std::vector<int>&, bool, FieldTag) {
  fail(ErrorCode::Internal, "nat_component is internal; use the adjunction checkers");
}

bool check_right_adjunction(const CYData& C, const CYData& Cp, const SSFunctor& F,
                            const AdjunctionComponents& right) {
  C.validate();
  Cp.validate();
  FieldTag field = C.field;
  SSFunctor G = F.transpose();
  for (int i = 0; i < C.simples; ++i) {
    std::vector<int> ei = simple_obj(C.simples, i);
    std::vector<int> GFi = G.apply_obj(F.apply_obj(ei));
    SSMor Feta = ss_apply(F, ei, GFi, right.unit[i], field);
    SSMor epsFi = counit_component(right.counit, F, G, F.apply_obj(ei), field);
    if (!ss_is_identity(ss_compose(epsFi, Feta))) return false;
  }
  for (int j = 0; j < Cp.simples; ++j) {
    std::vector<int> ej = simple_obj(Cp.simples, j);
    std::vector<int> FGj = F.apply_obj(G.apply_obj(ej));
    SSMor Geps = ss_apply(G, FGj, ej, right.counit[j], field);
    SSMor etaGj = unit_component(right.unit, G, F, G.apply_obj(ej), field);
    if (!ss_is_identity(ss_compose(Geps, etaGj))) return false;
  }
  return true;
}

LeftAdjointResult left_adjoint_from_trace(const CYData& C, const CYData& Cp, const SSFunctor& F,
                                          const AdjunctionComponents& right) {
  C.validate();
  Cp.validate();
  if (!check_right_adjunction(C, Cp, F, right))
    fail(ErrorCode::ShapeError, "supplied right adjunction fails its zorro identities");
  FieldTag field = C.field;
  SSFunctor G = F.transpose();

  LeftAdjointResult res;
  res.left.counit.resize(C.simples);
  res.left.unit.resize(Cp.simples);

  for (int i = 0; i < C.simples; ++i) {
    if (C.traces[i].is_zero()) fail(ErrorCode::DegenerateTracePairing, "zero trace scalar");
    std::vector<int> ei = simple_obj(C.simples, i);
    std::vector<int> Fi = F.apply_obj(ei);
    std::vector<int> GFi = G.apply_obj(Fi);
    SSMor epsFi = counit_component(right.counit, F, G, Fi, field);
    SSMor epsL;
    for (int s = 0; s < C.simples; ++s) epsL.blocks.push_back(Matrix(ei[s], GFi[s], field));
    for (int b = 0; b < GFi[i]; ++b) {
      SSMor v;
      for (int s = 0; s < C.simples; ++s) v.blocks.push_back(Matrix(GFi[s], ei[s], field));
      v.blocks[i].at(b, 0) = NFE::one(field);
      SSMor Fv = ss_apply(F, ei, GFi, v, field);
      NFE t = cy_trace(Cp, ss_compose(epsFi, Fv));
      epsL.blocks[i].at(0, b) = t / C.traces[i];
    }
    res.left.counit[i] = std::move(epsL);
  }

  for (int j = 0; j < Cp.simples; ++j) {
    if (Cp.traces[j].is_zero()) fail(ErrorCode::DegenerateTracePairing, "zero trace scalar");
    std::vector<int> ej = simple_obj(Cp.simples, j);
    std::vector<int> Gj = G.apply_obj(ej);
    std::vector<int> FGj = F.apply_obj(Gj);
    SSMor etaGj = unit_component(right.unit, G, F, Gj, field);
    SSMor etaL;
    for (int s = 0; s < Cp.simples; ++s) etaL.blocks.push_back(Matrix(FGj[s], ej[s], field));
    for (int b = 0; b < FGj[j]; ++b) {
      SSMor w;
      for (int s = 0; s < Cp.simples; ++s) w.blocks.push_back(Matrix(ej[s], FGj[s], field));
      w.blocks[j].at(0, b) = NFE::one(field);
      SSMor Gw = ss_apply(G, FGj, ej, w, field);
      NFE t = cy_trace(C, ss_compose(Gw, etaGj));
      etaL.blocks[j].at(b, 0) = t / Cp.traces[j];
    }
    res.left.unit[j] = std::move(etaL);
  }

  res.zorro = true;
  for (int j = 0; j < Cp.simples; ++j) {
    std::vector<int> ej = simple_obj(Cp.simples, j);
    std::vector<int> Gj = G.apply_obj(ej);
    std::vector<int> FGj = F.apply_obj(Gj);
    SSMor GetaL = ss_apply(G, ej, FGj, res.left.unit[j], field);
    SSMor epsLGj = counit_component(res.left.counit, G, F, Gj, field);
    if (!ss_is_identity(ss_compose(epsLGj, GetaL))) res.zorro = false;
  }
  for (int i = 0; i < C.simples; ++i) {
    std::vector<int> ei = simple_obj(C.simples, i);
    std::vector<int> Fi = F.apply_obj(ei);
    std::vector<int> GFi = G.apply_obj(Fi);
    SSMor FepsL = ss_apply(F, GFi, ei, res.left.counit[i], field);
    SSMor etaLFi = unit_component(res.left.unit, F, G, Fi, field);
    if (!ss_is_identity(ss_compose(FepsL, etaLFi))) res.zorro = false;
  }
  return res;
}

bool check_pivotal_equivalence(const CYData& C, const CYData& Cp, const std::vector<int>& bijection) {
  C.validate();
  Cp.validate();
  if (C.simples != Cp.simples || static_cast<int>(bijection.size()) != C.simples)
    fail(ErrorCode::NotAnEquivalence, "simple counts differ");
  std::vector<bool> hit(Cp.simples, false);
  for (int i = 0; i < C.simples; ++i) {
    if (bijection[i] < 0 || bijection[i] >= Cp.simples || hit[bijection[i]])
      fail(ErrorCode::NotAnEquivalence, "label map is not a bijection");
    hit[bijection[i]] = true;
  }
  for (int i = 0; i < C.simples; ++i)
    if (!(C.traces[i] == Cp.traces[bijection[i]])) return false;
  return true;
}

// ----------------------------------------------------------------------

LabelSystem ModuleData::left_system() const {
  const int k = base.count();
  LabelSystem s;
  s.count = k + simples;
  s.unit = 0;
  s.base_count = k;
  s.field = base.sys.field;
  s.Nt.assign(static_cast<size_t>(s.count) * s.count * s.count, 0);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c) s.set_n(a, b, c, base.sys.n(a, b, c));
  for (int c = 0; c < k; ++c)
    for (int m = 0; m < simples; ++m)
      for (int mp = 0; mp < simples; ++mp) s.set_n(c, k + m, k + mp, nl(c, m, mp));
  s.F = base.sys.F;
  for (const auto& [kk, v] : FL) {
    int idx[6];
    uint64_t key = kk;
    for (int i = 5; i >= 0; --i) {
      idx[i] = static_cast<int>(key & 0x3ff);
      key >>= 10;
    }
    s.F[LabelSystem::key(idx[0], idx[1], k + idx[2], k + idx[3], idx[4], k + idx[5])] = v;
  }
  s.weight = base.sys.weight;
  for (const NFE& t : traces) s.weight.push_back(t);
  return s;
}

LabelSystem ModuleData::right_system() const {
  const FusionData& rb = rbase ? *rbase : base;
  const int k = rb.count();
  LabelSystem s;
  s.count = k + simples;
  s.unit = 0;
  s.base_count = k;
  s.field = rb.sys.field;
  s.Nt.assign(static_cast<size_t>(s.count) * s.count * s.count, 0);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c) s.set_n(a, b, c, rb.sys.n(a, b, c));
  for (int m = 0; m < simples; ++m)
    for (int c = 0; c < k; ++c)
      for (int mp = 0; mp < simples; ++mp) s.set_n(k + m, c, k + mp, nr(m, c, mp));
  s.F = rb.sys.F;
  for (const auto& [kk, v] : FR) {
    int idx[6];
    uint64_t key = kk;
    for (int i = 5; i >= 0; --i) {
      idx[i] = static_cast<int>(key & 0x3ff);
      key >>= 10;
    }
    s.F[LabelSystem::key(k + idx[0], idx[1], idx[2], k + idx[3], k + idx[4], idx[5])] = v;
  }
  s.weight = rb.sys.weight;
  for (const NFE& t : traces) s.weight.push_back(t);
  return s;
}

ModuleData ModuleData::regular(const FusionData& f) {
  ModuleData m;
  m.base = f;
  m.rbase = f;
  m.simples = f.count();
  const int k = f.count();
  m.actL.assign(static_cast<size_t>(k) * k * k, 0);
  m.actR.assign(static_cast<size_t>(k) * k * k, 0);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c) {
        char v = f.sys.n(a, b, c) ? 1 : 0;
        m.actL[(static_cast<size_t>(a) * k + b) * k + c] = v;
        m.actR[(static_cast<size_t>(a) * k + b) * k + c] = v;
      }
  // materialize every admissible associator entry (the module-typed slot
  // does not benefit from the strict-unit shortcut)
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c)
        for (int d = 0; d < k; ++d)
          for (int e = 0; e < k; ++e)
            for (int g = 0; g < k; ++g) {
              if (!(f.sys.n(a, b, e) && f.sys.n(e, c, d) && f.sys.n(b, c, g) && f.sys.n(a, g, d))) continue;
              NFE v = f.sys.fsym(a, b, c, d, e, g);
              m.FL[LabelSystem::key(a, b, c, d, e, g)] = v;
              m.FR[LabelSystem::key(a, b, c, d, e, g)] = v;
            }
  m.traces = f.sys.weight;
  return m;
}

ModuleTraceReport check_module_trace(const ModuleData& md) {
  ModuleTraceReport rep;
  LabelSystem ls = md.left_system();
  auto p1 = ls.check_pentagon();
  LabelSystem rs = md.right_system();
  auto p2 = rs.check_pentagon();
  rep.pentagon = p1.ok && p2.ok;
  if (!rep.pentagon) {
    rep.witness = p1.ok ? ("right module pentagon: " + p2.witness) : ("left module pentagon: " + p1.witness);
    return rep;
  }
  const int k = md.base.count();
  rep.compatible = true;
  for (int c = 0; c < k && rep.compatible; ++c) {
    int cs = md.base.dual[c];
    for (int m = 0; m < md.simples && rep.compatible; ++m) {
      auto rows = ls.rows_of(cs, c, k + m, k + m);
      auto cols = ls.cols_of(cs, c, k + m, k + m);
      if (rows.empty() || cols.empty()) continue;
      Matrix Fm = ls.fmatrix(cs, c, k + m, k + m);
      Matrix Fi = ls.fmatrix_inverse(cs, c, k + m, k + m);
      int row0 = -1;
      for (size_t r = 0; r < rows.size(); ++r)
        if (rows[r] == 0) row0 = static_cast<int>(r);
      if (row0 < 0) fail(ErrorCode::Internal, "unit channel missing in the module trace matrix");
      for (size_t ci = 0; ci < cols.size(); ++ci) {
        int mp = cols[ci] - k;
        NFE kappa = md.base.qdim(c) * Fm.at(row0, static_cast<int>(ci)) * Fi.at(static_cast<int>(ci), row0);
        if (!(md.traces[mp] == md.traces[m] * kappa)) {
          rep.compatible = false;
          rep.witness = "left trace compatibility fails at (c=" + std::to_string(c) + ", m=" + std::to_string(m) +
                        ", m'=" + std::to_string(mp) + ")";
          break;
        }
      }
    }
  }
  const FusionData& rb = md.rbase ? *md.rbase : md.base;
  const int kr = rb.count();
  for (int c = 0; c < kr && rep.compatible; ++c) {
    int cs = rb.dual[c];
    for (int m = 0; m < md.simples && rep.compatible; ++m) {
      auto rows = rs.rows_of(kr + m, c, cs, kr + m);
      auto cols = rs.cols_of(kr + m, c, cs, kr + m);
      if (rows.empty() || cols.empty()) continue;
      Matrix Fm = rs.fmatrix(kr + m, c, cs, kr + m);
      Matrix Fi = rs.fmatrix_inverse(kr + m, c, cs, kr + m);
      int col0 = -1;
      for (size_t cc = 0; cc < cols.size(); ++cc)
        if (cols[cc] == 0) col0 = static_cast<int>(cc);
      if (col0 < 0) fail(ErrorCode::Internal, "unit channel missing in the module trace matrix");
      for (size_t ri = 0; ri < rows.size(); ++ri) {
        int mp = rows[ri] - kr;
        NFE kappa = rb.qdim(c) * Fm.at(static_cast<int>(ri), col0) * Fi.at(col0, static_cast<int>(ri));
        if (!(md.traces[mp] == md.traces[m] * kappa)) {
          rep.compatible = false;
          rep.witness = "right trace compatibility fails at (c'=" + std::to_string(c) + ", m=" + std::to_string(m) +
                        ", m'=" + std::to_string(mp) + ")";
          break;
        }
      }
    }
  }
  return rep;
}

// ----------------------------------------------------------------------

FusionData fusion_vec_zn(int nlabels, long field_d, const NFE& vertex_weight) {
  FusionData f;
  FieldTag K{field_d};
  f.labels.resize(nlabels);
  for (int i = 0; i < nlabels; ++i) f.labels[i] = "g" + std::to_string(i);
  f.dual.resize(nlabels);
  for (int i = 0; i < nlabels; ++i) f.dual[i] = (nlabels - i) % nlabels;
  f.sys.count = nlabels;
  f.sys.base_count = nlabels;
  f.sys.unit = 0;
  f.sys.field = K;
  f.sys.Nt.assign(static_cast<size_t>(nlabels) * nlabels * nlabels, 0);
  for (int a = 0; a < nlabels; ++a)
    for (int b = 0; b < nlabels; ++b) f.sys.set_n(a, b, (a + b) % nlabels, true);
  for (int a = 1; a < nlabels; ++a)
    for (int b = 1; b < nlabels; ++b)
      for (int c = 1; c < nlabels; ++c)
        f.sys.F[LabelSystem::key(a, b, c, (a + b + c) % nlabels, (a + b) % nlabels, (b + c) % nlabels)] =
            NFE::one(K);
  f.sys.weight.assign(nlabels, NFE::one(K));
  f.vertex_weight = vertex_weight;
  return f;
}

FusionData fusion_vec_z2_twisted(const NFE& vertex_weight) {
  FusionData f = fusion_vec_zn(2, vertex_weight.field().d, vertex_weight);
  // the nontrivial 3-cocycle on Z/2: omega(g,g,g) = -1
  f.sys.F[LabelSystem::key(1, 1, 1, 1, 0, 0)] = -NFE::one(f.sys.field);
  return f;
}

FusionData fusion_fibonacci() {
  FieldTag K{5};
  NFE one = NFE::one(K);
  NFE half = NFE::rational(Rat(1, 2), K);
  NFE phi = half + half * NFE::sqrt_gen(K);  // golden ratio
  NFE phinv = phi.inverse();
  FusionData f;
  f.labels = {"1", "t"};
  f.dual = {0, 1};
  f.sys.count = 2;
  f.sys.base_count = 2;
  f.sys.unit = 0;
  f.sys.field = K;
  f.sys.Nt.assign(8, 0);
  f.sys.set_n(0, 0, 0, true);
  f.sys.set_n(0, 1, 1, true);
  f.sys.set_n(1, 0, 1, true);
  f.sys.set_n(1, 1, 0, true);
  f.sys.set_n(1, 1, 1, true);
  f.sys.F[LabelSystem::key(1, 1, 1, 0, 1, 1)] = one;
  f.sys.F[LabelSystem::key(1, 1, 1, 1, 0, 0)] = phinv;
  f.sys.F[LabelSystem::key(1, 1, 1, 1, 0, 1)] = phinv;
  f.sys.F[LabelSystem::key(1, 1, 1, 1, 1, 0)] = one;
  f.sys.F[LabelSystem::key(1, 1, 1, 1, 1, 1)] = -phinv;
  f.sys.weight = {one, phi};
  NFE D2 = one + phi * phi;
  f.vertex_weight = D2.inverse();
  return f;
}

}  // namespace orbkit
