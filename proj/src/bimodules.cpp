#include "orbkit/bimodules.hpp"

namespace orbkit {

bool same_structure(const FrobeniusStructure& a, const FrobeniusStructure& b) {
  return a.dim() == b.dim() && a.field() == b.field() && a.algebra().unit == b.algebra().unit &&
         a.algebra().mul == b.algebra().mul && a.counit() == b.counit();
}

Matrix Bimodule::left_action(const Vec& b) const {
  Matrix r(m, m, field());
  for (int bi = 0; bi < left.dim(); ++bi) {
    if (b[bi].is_zero()) continue;
    for (int x = 0; x < m; ++x)
      for (int y = 0; y < m; ++y) {
        const NFE& c = lc(bi, x, y);
        if (!c.is_zero()) r.at(y, x) += b[bi] * c;
      }
  }
  return r;
}

Matrix Bimodule::right_action(const Vec& a) const {
  Matrix r(m, m, field());
  for (int ai = 0; ai < right.dim(); ++ai) {
    if (a[ai].is_zero()) continue;
    for (int x = 0; x < m; ++x)
      for (int y = 0; y < m; ++y) {
        const NFE& c = rc(x, ai, y);
        if (!c.is_zero()) r.at(y, x) += a[ai] * c;
      }
  }
  return r;
}

void Bimodule::validate() const {
  if (m <= 0 || lact.size() != static_cast<size_t>(left.dim()) * m * m ||
      ract.size() != static_cast<size_t>(m) * right.dim() * m)
    fail(ErrorCode::ShapeError, "bimodule tensors have inconsistent dimensions");
  if (!(left.field() == right.field())) fail(ErrorCode::MixedFields, "bimodule algebras over different fields");
  FieldTag K = field();
  if (!left_action(left.algebra().unit).is_identity() || !right_action(right.algebra().unit).is_identity())
    fail(ErrorCode::ShapeError, "units do not act as identity");
  for (int i = 0; i < left.dim(); ++i)
    for (int j = 0; j < left.dim(); ++j) {
      Vec ei(left.dim(), NFE::zero(K)), ej(left.dim(), NFE::zero(K));
      ei[i] = ej[j] = NFE::one(K);
      Matrix lhs = left_action(left.algebra().multiply(ei, ej));
      Matrix rhs = left_action(ei) * left_action(ej);
      if (!(lhs == rhs)) fail(ErrorCode::ShapeError, "left action not associative");
    }
  for (int i = 0; i < right.dim(); ++i)
    for (int j = 0; j < right.dim(); ++j) {
      Vec ei(right.dim(), NFE::zero(K)), ej(right.dim(), NFE::zero(K));
      ei[i] = ej[j] = NFE::one(K);
      Matrix lhs = right_action(right.algebra().multiply(ei, ej));
      Matrix rhs = right_action(ej) * right_action(ei);  // x <| (ab) = (x <| a) <| b
      if (!(lhs == rhs)) fail(ErrorCode::ShapeError, "right action not associative");
    }
  for (int i = 0; i < left.dim(); ++i)
    for (int j = 0; j < right.dim(); ++j) {
      Vec ei(left.dim(), NFE::zero(K)), ej(right.dim(), NFE::zero(K));
      ei[i] = NFE::one(K);
      ej[j] = NFE::one(K);
      if (!(left_action(ei) * right_action(ej) == right_action(ej) * left_action(ei)))
        fail(ErrorCode::ShapeError, "left and right actions do not commute");
    }
}

Bimodule regular_bimodule(const FrobeniusStructure& F) {
  Bimodule X;
  X.left = F;
  X.right = F;
  X.m = F.dim();
  int n = F.dim();
  X.lact.assign(static_cast<size_t>(n) * n * n, NFE::zero(F.field()));
  X.ract.assign(static_cast<size_t>(n) * n * n, NFE::zero(F.field()));
  for (int b = 0; b < n; ++b)
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        X.lc(b, x, y) = F.algebra().c(b, x, y);
        X.rc(x, b, y) = F.algebra().c(x, b, y);
      }
  return X;
}

bool is_bimodule_map(const Bimodule& X, const Bimodule& Y, const Matrix& f) {
  if (f.rows() != Y.m || f.cols() != X.m) return false;
  if (!same_structure(X.left, Y.left) || !same_structure(X.right, Y.right)) return false;
  FieldTag K = X.field();
  for (int i = 0; i < X.left.dim(); ++i) {
    Vec ei(X.left.dim(), NFE::zero(K));
    ei[i] = NFE::one(K);
    if (!(f * X.left_action(ei) == Y.left_action(ei) * f)) return false;
  }
  for (int i = 0; i < X.right.dim(); ++i) {
    Vec ei(X.right.dim(), NFE::zero(K));
    ei[i] = NFE::one(K);
    if (!(f * X.right_action(ei) == Y.right_action(ei) * f)) return false;
  }
  return true;
}

namespace {

SplitIdempotent split_of(const Matrix& p, FieldTag K) {
  SplitIdempotent sp;
  sp.p = p;
  sp.iota = p.column_space_basis();
  sp.pi = sp.iota.left_inverse() * p;
  sp.image_dim = sp.iota.cols();
  if (!(sp.pi * sp.iota == Matrix::identity(sp.image_dim, K)) || !(sp.iota * sp.pi == p))
    fail(ErrorCode::Internal, "idempotent splitting failed");
  return sp;
}

Matrix balancing_idempotent(const Bimodule& L, const Bimodule& R, const FrobeniusStructure& mid) {
  FieldTag K = L.field();
  const int n = L.m * R.m;
  Matrix p(n, n, K);
  const auto& us = mid.casimir_left();
  const auto& vs = mid.casimir_right();
  for (size_t t = 0; t < us.size(); ++t) {
    Matrix rx = L.right_action(us[t]);
    Matrix ly = R.left_action(vs[t]);
    for (int x = 0; x < L.m; ++x)
      for (int x2 = 0; x2 < L.m; ++x2) {
        if (rx.at(x2, x).is_zero()) continue;
        for (int y = 0; y < R.m; ++y)
          for (int y2 = 0; y2 < R.m; ++y2) {
            const NFE& c = ly.at(y2, y);
            if (!c.is_zero()) p.at(x2 * R.m + y2, x * R.m + y) += rx.at(x2, x) * c;
          }
      }
  }
  return p;
}

}  // namespace

RelativeTensor relative_tensor(const Bimodule& X, const Bimodule& Y) {
  if (!same_structure(X.right, Y.left))
    fail(ErrorCode::MiddleAlgebraMismatch, "relative tensor needs matching middle algebras");
  FrobeniusStructure Bn = X.right.gamma_normalized();  // throws NotSeparable when not normalizable
  if (!Bn.is_symmetric()) fail(ErrorCode::NotSeparable, "middle algebra must be symmetric");
  FieldTag K = X.field();
  const int mx = X.m, my = Y.m, n = mx * my;
  Matrix p = balancing_idempotent(X, Y, Bn);
  if (!(p * p == p)) fail(ErrorCode::Internal, "relative tensor idempotent is not idempotent");
  SplitIdempotent sp = split_of(p, K);

  Bimodule Z;
  Z.left = X.left;
  Z.right = Y.right;
  Z.m = sp.image_dim;
  Z.lact.assign(static_cast<size_t>(Z.left.dim()) * Z.m * Z.m, NFE::zero(K));
  Z.ract.assign(static_cast<size_t>(Z.m) * Z.right.dim() * Z.m, NFE::zero(K));
  for (int b = 0; b < Z.left.dim(); ++b) {
    Vec eb(Z.left.dim(), NFE::zero(K));
    eb[b] = NFE::one(K);
    Matrix act(n, n, K);
    Matrix lx = X.left_action(eb);
    for (int x = 0; x < mx; ++x)
      for (int x2 = 0; x2 < mx; ++x2) {
        if (lx.at(x2, x).is_zero()) continue;
        for (int y = 0; y < my; ++y) act.at(x2 * my + y, x * my + y) += lx.at(x2, x);
      }
    Matrix red = sp.pi * act * sp.iota;
    for (int u = 0; u < Z.m; ++u)
      for (int v = 0; v < Z.m; ++v) Z.lc(b, u, v) = red.at(v, u);
  }
  for (int a = 0; a < Z.right.dim(); ++a) {
    Vec ea(Z.right.dim(), NFE::zero(K));
    ea[a] = NFE::one(K);
    Matrix act(n, n, K);
    Matrix ry = Y.right_action(ea);
    for (int y = 0; y < my; ++y)
      for (int y2 = 0; y2 < my; ++y2) {
        if (ry.at(y2, y).is_zero()) continue;
        for (int x = 0; x < mx; ++x) act.at(x * my + y2, x * my + y) += ry.at(y2, y);
      }
    Matrix red = sp.pi * act * sp.iota;
    for (int u = 0; u < Z.m; ++u)
      for (int v = 0; v < Z.m; ++v) Z.rc(u, a, v) = red.at(v, u);
  }
  Z.validate();
  return {std::move(Z), std::move(sp)};
}

Adjunction adjoint(const Bimodule& X, bool euler) {
  X.validate();
  FrobeniusStructure Bn = X.left.gamma_normalized();
  FrobeniusStructure An = X.right.gamma_normalized();
  if (!Bn.is_symmetric() || !An.is_symmetric())
    fail(ErrorCode::NotSeparable, "adjunction needs separable symmetric algebras");
  FieldTag K = X.field();
  const int m = X.m, nA = An.dim(), nB = Bn.dim();

  Vec psiA = euler ? An.psi() : An.algebra().unit;
  Vec psiB = euler ? Bn.psi() : Bn.algebra().unit;
  Vec psiAinv = An.algebra().invert(psiA);
  Vec psiBinv = Bn.algebra().invert(psiB);

  Adjunction ad;
  ad.dual.left = X.right;
  ad.dual.right = X.left;
  ad.dual.m = m;
  ad.dual.lact.assign(static_cast<size_t>(nA) * m * m, NFE::zero(K));
  ad.dual.ract.assign(static_cast<size_t>(m) * nB * m, NFE::zero(K));
  for (int a = 0; a < nA; ++a) {
    Vec ea(nA, NFE::zero(K));
    ea[a] = NFE::one(K);
    Matrix t = X.right_action(ea).transpose();
    for (int x = 0; x < m; ++x)
      for (int y = 0; y < m; ++y) ad.dual.lc(a, x, y) = t.at(y, x);
  }
  for (int b = 0; b < nB; ++b) {
    Vec eb(nB, NFE::zero(K));
    eb[b] = NFE::one(K);
    Matrix t = X.left_action(eb).transpose();
    for (int x = 0; x < m; ++x)
      for (int y = 0; y < m; ++y) ad.dual.rc(x, b, y) = t.at(y, x);
  }
  ad.dual.validate();

  Matrix LpsiBinv = X.left_action(psiBinv);
  Matrix LpsiB = X.left_action(psiB);
  Matrix RpsiAinv = X.right_action(psiAinv);

  // ev: X^v (x)_B X -> A, cols (alpha, x):
  //   f (x) x |-> psiA . sum_i u_i f(psiB^{-1} x v_i)
  ad.ev = Matrix(nA, m * m, K);
  for (size_t t = 0; t < An.casimir_left().size(); ++t) {
    const Vec& u = An.casimir_left()[t];
    const Vec& v = An.casimir_right()[t];
    Vec uA = An.algebra().multiply(psiA, u);
    Matrix W = X.right_action(v) * LpsiBinv;
    for (int x = 0; x < m; ++x)
      for (int al = 0; al < m; ++al) {
        const NFE& c = W.at(al, x);
        if (c.is_zero()) continue;
        for (int k = 0; k < nA; ++k)
          if (!uA[k].is_zero()) ad.ev.at(k, al * m + x) += c * uA[k];
      }
  }

  // coev: B -> X (x)_A X^v, rows (x, alpha): b |> (psiB x_a <| psiA^{-1}) (x) d_a
  ad.coev = Matrix(m * m, nB, K);
  for (int k = 0; k < nB; ++k) {
    Vec ek(nB, NFE::zero(K));
    ek[k] = NFE::one(K);
    Matrix next = X.left_action(ek) * LpsiB * RpsiAinv;
    for (int al = 0; al < m; ++al)
      for (int x = 0; x < m; ++x) ad.coev.at(x * m + al, k) = next.at(x, al);
  }

  // evT: X (x)_A X^v -> B, cols (x, alpha):
  //   x (x) f |-> psiB . sum_j u_j f(v_j x <| psiA^{-1})
  ad.evT = Matrix(nB, m * m, K);
  for (size_t t = 0; t < Bn.casimir_left().size(); ++t) {
    const Vec& u = Bn.casimir_left()[t];
    const Vec& v = Bn.casimir_right()[t];
    Vec uB = Bn.algebra().multiply(psiB, u);
    Matrix W = RpsiAinv * X.left_action(v);
    for (int x = 0; x < m; ++x)
      for (int al = 0; al < m; ++al) {
        const NFE& c = W.at(al, x);
        if (c.is_zero()) continue;
        for (int k = 0; k < nB; ++k)
          if (!uB[k].is_zero()) ad.evT.at(k, x * m + al) += c * uB[k];
      }
  }

  // coevT: A -> X^v (x)_B X, rows (alpha, x): d_a (x) (psiB^{-1} x_a <| psiA a)
  ad.coevT = Matrix(m * m, nA, K);
  for (int k = 0; k < nA; ++k) {
    Vec ek(nA, NFE::zero(K));
    ek[k] = NFE::one(K);
    Vec pa = An.algebra().multiply(psiA, ek);
    Matrix next = X.right_action(pa) * LpsiBinv;
    for (int al = 0; al < m; ++al)
      for (int x = 0; x < m; ++x) ad.coevT.at(al * m + x, k) = next.at(x, al);
  }

  ad.dual_x = split_of(balancing_idempotent(ad.dual, X, Bn), K);
  ad.x_dual = split_of(balancing_idempotent(X, ad.dual, An), K);

  ad.ev_rel = ad.ev * ad.dual_x.iota;
  ad.coevT_rel = ad.dual_x.pi * ad.coevT;
  ad.evT_rel = ad.evT * ad.x_dual.iota;
  ad.coev_rel = ad.x_dual.pi * ad.coev;

  if (!(ad.x_dual.p * ad.coev == ad.coev)) fail(ErrorCode::Internal, "coev does not land in the relative product");
  if (!(ad.dual_x.p * ad.coevT == ad.coevT)) fail(ErrorCode::Internal, "coevT does not land in the relative product");
  return ad;
}

namespace {

// snake composites on plain coordinates; each should be the identity
Matrix snake1(const Bimodule& X, const Adjunction& ad) {
  // (id_X (x) ev) . (coev (x) id_X)
  FieldTag K = X.field();
  const int m = X.m;
  Matrix out(m, m, K);
  Vec unitB = X.left.algebra().unit;
  for (int xin = 0; xin < m; ++xin) {
    Vec acc(m, NFE::zero(K));
    for (int x1 = 0; x1 < m; ++x1)
      for (int al = 0; al < m; ++al) {
        NFE c = NFE::zero(K);
        for (int k = 0; k < X.left.dim(); ++k)
          if (!unitB[k].is_zero()) c += ad.coev.at(x1 * m + al, k) * unitB[k];
        if (c.is_zero()) continue;
        Vec a(X.right.dim(), NFE::zero(K));
        for (int k = 0; k < X.right.dim(); ++k) a[k] = ad.ev.at(k, al * m + xin);
        Matrix ra = X.right_action(a);
        for (int y = 0; y < m; ++y) acc[y] += c * ra.at(y, x1);
      }
    for (int y = 0; y < m; ++y) out.at(y, xin) = acc[y];
  }
  return out;
}

Matrix snake2(const Bimodule& X, const Adjunction& ad) {
  // (ev (x) id_Xv) . (id_Xv (x) coev) on X^v
  FieldTag K = X.field();
  const int m = X.m;
  Matrix out(m, m, K);
  Vec unitB = X.left.algebra().unit;
  for (int fin = 0; fin < m; ++fin) {
    Vec acc(m, NFE::zero(K));
    for (int x1 = 0; x1 < m; ++x1)
      for (int al = 0; al < m; ++al) {
        NFE c = NFE::zero(K);
        for (int k = 0; k < X.left.dim(); ++k)
          if (!unitB[k].is_zero()) c += ad.coev.at(x1 * m + al, k) * unitB[k];
        if (c.is_zero()) continue;
        Vec a(X.right.dim(), NFE::zero(K));
        for (int k = 0; k < X.right.dim(); ++k) a[k] = ad.ev.at(k, fin * m + x1);
        Matrix la = ad.dual.left_action(a);
        for (int y = 0; y < m; ++y) acc[y] += c * la.at(y, al);
      }
    for (int y = 0; y < m; ++y) out.at(y, fin) = acc[y];
  }
  return out;
}

Matrix snake3(const Bimodule& X, const Adjunction& ad) {
  // (id_Xv (x) evT) . (coevT (x) id_Xv) on X^v
  FieldTag K = X.field();
  const int m = X.m;
  Matrix out(m, m, K);
  Vec unitA = X.right.algebra().unit;
  for (int fin = 0; fin < m; ++fin) {
    Vec acc(m, NFE::zero(K));
    for (int al = 0; al < m; ++al)
      for (int x1 = 0; x1 < m; ++x1) {
        NFE c = NFE::zero(K);
        for (int k = 0; k < X.right.dim(); ++k)
          if (!unitA[k].is_zero()) c += ad.coevT.at(al * m + x1, k) * unitA[k];
        if (c.is_zero()) continue;
        Vec b(X.left.dim(), NFE::zero(K));
        for (int k = 0; k < X.left.dim(); ++k) b[k] = ad.evT.at(k, x1 * m + fin);
        Matrix rb = ad.dual.right_action(b);
        for (int y = 0; y < m; ++y) acc[y] += c * rb.at(y, al);
      }
    for (int y = 0; y < m; ++y) out.at(y, fin) = acc[y];
  }
  return out;
}

Matrix snake4(const Bimodule& X, const Adjunction& ad) {
  // (evT (x) id_X) . (id_X (x) coevT)
  FieldTag K = X.field();
  const int m = X.m;
  Matrix out(m, m, K);
  Vec unitA = X.right.algebra().unit;
  for (int xin = 0; xin < m; ++xin) {
    Vec acc(m, NFE::zero(K));
    for (int al = 0; al < m; ++al)
      for (int x1 = 0; x1 < m; ++x1) {
        NFE c = NFE::zero(K);
        for (int k = 0; k < X.right.dim(); ++k)
          if (!unitA[k].is_zero()) c += ad.coevT.at(al * m + x1, k) * unitA[k];
        if (c.is_zero()) continue;
        Vec b(X.left.dim(), NFE::zero(K));
        for (int k = 0; k < X.left.dim(); ++k) b[k] = ad.evT.at(k, xin * m + al);
        Matrix lb = X.left_action(b);
        for (int y = 0; y < m; ++y) acc[y] += c * lb.at(y, x1);
      }
    for (int y = 0; y < m; ++y) out.at(y, xin) = acc[y];
  }
  return out;
}

}  // namespace

bool zorro_check(const Bimodule& X, std::string* witness) {
  Adjunction ad = adjoint(X);
  return zorro_check_with(X, ad, witness);
}

bool zorro_check_with(const Bimodule& X, const Adjunction& ad, std::string* witness) {
  struct Item {
    const char* name;
    Matrix m;
  };
  Item items[] = {{"(id (x) ev).(coev (x) id)", snake1(X, ad)},
                  {"(ev (x) id).(id (x) coev)", snake2(X, ad)},
                  {"(id (x) evT).(coevT (x) id)", snake3(X, ad)},
                  {"(evT (x) id).(id (x) coevT)", snake4(X, ad)}};
  for (const auto& it : items) {
    if (!it.m.is_identity()) {
      if (witness) *witness = it.name;
      return false;
    }
  }
  return true;
}

namespace {

Vec central_value(const FrobeniusStructure& F, const Matrix& endo) {
  // extract z with endo = right-multiplication by z, z central
  Vec z(F.dim(), NFE::zero(F.field()));
  Vec unit = F.algebra().unit;
  for (int r = 0; r < F.dim(); ++r) {
    NFE v = NFE::zero(F.field());
    for (int k = 0; k < F.dim(); ++k)
      if (!unit[k].is_zero()) v += endo.at(r, k) * unit[k];
    z[r] = v;
  }
  if (!F.algebra().is_central(z)) fail(ErrorCode::Internal, "trace value is not central");
  if (!(F.algebra().right_mult(z) == endo)) fail(ErrorCode::Internal, "trace endomorphism is not multiplication");
  return z;
}

}  // namespace

TraceResult trace_and_qdim(const Bimodule& X, const Matrix& chi) {
  if (!is_bimodule_map(X, X, chi)) fail(ErrorCode::ShapeError, "trace argument is not a bimodule endomorphism");
  Adjunction ad = adjoint(X);
  FieldTag K = X.field();
  const int m = X.m;
  // right trace: ev . (id_Xv (x) chi) . coevT : A -> A
  Matrix right(X.right.dim(), X.right.dim(), K);
  for (int k = 0; k < X.right.dim(); ++k)
    for (int al = 0; al < m; ++al)
      for (int x = 0; x < m; ++x) {
        const NFE& c = ad.coevT.at(al * m + x, k);
        if (c.is_zero()) continue;
        for (int y = 0; y < m; ++y) {
          const NFE& cy = chi.at(y, x);
          if (cy.is_zero()) continue;
          for (int r = 0; r < X.right.dim(); ++r) right.at(r, k) += c * cy * ad.ev.at(r, al * m + y);
        }
      }
  // left trace: evT . (chi (x) id_Xv) . coev : B -> B
  Matrix left(X.left.dim(), X.left.dim(), K);
  for (int k = 0; k < X.left.dim(); ++k)
    for (int x = 0; x < m; ++x)
      for (int al = 0; al < m; ++al) {
        const NFE& c = ad.coev.at(x * m + al, k);
        if (c.is_zero()) continue;
        for (int y = 0; y < m; ++y) {
          const NFE& cy = chi.at(y, x);
          if (cy.is_zero()) continue;
          for (int r = 0; r < X.left.dim(); ++r) left.at(r, k) += c * cy * ad.evT.at(r, y * m + al);
        }
      }
  TraceResult t;
  t.tr_right = central_value(X.right, right);
  t.tr_left = central_value(X.left, left);
  return t;
}

TraceResult quantum_dims(const Bimodule& X) { return trace_and_qdim(X, Matrix::identity(X.m, X.field())); }

Matrix dual_map_via_right(const Bimodule& X, const Bimodule& Y, const Matrix& xi) {
  if (!is_bimodule_map(X, Y, xi)) fail(ErrorCode::ShapeError, "dual of a non-bimodule-map");
  Adjunction adX = adjoint(X), adY = adjoint(Y);
  FieldTag K = X.field();
  Matrix out(X.m, Y.m, K);  // Y^v -> X^v on dual bases
  Vec unitB = X.left.algebra().unit;
  for (int fin = 0; fin < Y.m; ++fin) {
    Vec acc(X.m, NFE::zero(K));
    for (int x1 = 0; x1 < X.m; ++x1)
      for (int al = 0; al < X.m; ++al) {
        NFE c = NFE::zero(K);
        for (int k = 0; k < X.left.dim(); ++k)
          if (!unitB[k].is_zero()) c += adX.coev.at(x1 * X.m + al, k) * unitB[k];
        if (c.is_zero()) continue;
        Vec a(X.right.dim(), NFE::zero(K));
        for (int y = 0; y < Y.m; ++y) {
          const NFE& cy = xi.at(y, x1);
          if (cy.is_zero()) continue;
          for (int k = 0; k < X.right.dim(); ++k) a[k] += cy * adY.ev.at(k, fin * Y.m + y);
        }
        Matrix la = adX.dual.left_action(a);
        for (int r = 0; r < X.m; ++r) acc[r] += c * la.at(r, al);
      }
    for (int r = 0; r < X.m; ++r) out.at(r, fin) = acc[r];
  }
  return out;
}

Matrix dual_map_via_left(const Bimodule& X, const Bimodule& Y, const Matrix& xi) {
  if (!is_bimodule_map(X, Y, xi)) fail(ErrorCode::ShapeError, "dual of a non-bimodule-map");
  Adjunction adX = adjoint(X), adY = adjoint(Y);
  FieldTag K = X.field();
  Matrix out(X.m, Y.m, K);
  Vec unitA = X.right.algebra().unit;
  for (int fin = 0; fin < Y.m; ++fin) {
    Vec acc(X.m, NFE::zero(K));
    for (int al = 0; al < X.m; ++al)
      for (int x1 = 0; x1 < X.m; ++x1) {
        NFE c = NFE::zero(K);
        for (int k = 0; k < X.right.dim(); ++k)
          if (!unitA[k].is_zero()) c += adX.coevT.at(al * X.m + x1, k) * unitA[k];
        if (c.is_zero()) continue;
        Vec b(X.left.dim(), NFE::zero(K));
        for (int y = 0; y < Y.m; ++y) {
          const NFE& cy = xi.at(y, x1);
          if (cy.is_zero()) continue;
          for (int k = 0; k < X.left.dim(); ++k) b[k] += cy * adY.evT.at(k, y * Y.m + fin);
        }
        Matrix rb = adX.dual.right_action(b);
        for (int r = 0; r < X.m; ++r) acc[r] += c * rb.at(r, al);
      }
    for (int r = 0; r < X.m; ++r) out.at(r, fin) = acc[r];
  }
  return out;
}

OrbifoldSplit split_orbifold_datum(const FrobeniusStructure& calA) {
  FrobeniusStructure A;
  try {
    A = calA.gamma_normalized();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotSeparable)
      fail(ErrorCode::NotAnOrbifoldDatum, "datum is not separable symmetric");
    throw;
  }
  if (!A.is_symmetric()) fail(ErrorCode::NotAnOrbifoldDatum, "datum is not symmetric");
  FieldTag K = A.field();
  FrobeniusStructure base = FrobeniusStructure::make(product_field_algebra(1, K), {NFE::one(K)});

  OrbifoldSplit out;
  out.condensing.left = A;
  out.condensing.right = base;
  out.condensing.m = A.dim();
  int n = A.dim();
  out.condensing.lact.assign(static_cast<size_t>(n) * n * n, NFE::zero(K));
  out.condensing.ract.assign(static_cast<size_t>(n) * n, NFE::zero(K));
  for (int b = 0; b < n; ++b)
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) out.condensing.lc(b, x, y) = A.algebra().c(b, x, y);
  for (int x = 0; x < n; ++x) out.condensing.rc(x, 0, x) = NFE::one(K);
  out.condensing.validate();

  // condensation condition: evT . coev = id on 1_A, with plain adjunction data
  Adjunction ad = adjoint(out.condensing, /*euler=*/false);
  Matrix comp(n, n, K);
  for (int k = 0; k < n; ++k)
    for (int x = 0; x < n; ++x)
      for (int al = 0; al < n; ++al) {
        const NFE& c = ad.coev.at(x * n + al, k);
        if (c.is_zero()) continue;
        for (int r = 0; r < n; ++r) comp.at(r, k) += c * ad.evT.at(r, x * n + al);
      }
  if (!comp.is_identity())
    fail(ErrorCode::NotAnOrbifoldDatum, "condensation composite evT . coev differs from the identity");

  out.split = ad.dual_x;
  // canonical map X^v o X -> A: [f (x) x] -> sum_j f(u_j) v_j x
  Matrix phi_plain(n, n * n, K);
  const auto& us = A.casimir_left();
  const auto& vs = A.casimir_right();
  for (int al = 0; al < n; ++al)
    for (int x = 0; x < n; ++x) {
      Vec acc(n, NFE::zero(K));
      for (size_t j = 0; j < us.size(); ++j) {
        const NFE& fu = us[j][al];
        if (fu.is_zero()) continue;
        Vec ex(n, NFE::zero(K));
        ex[x] = NFE::one(K);
        Vec term = A.algebra().multiply(vs[j], ex);
        for (int r = 0; r < n; ++r) acc[r] += fu * term[r];
      }
      for (int r = 0; r < n; ++r) phi_plain.at(r, al * n + x) = acc[r];
    }
  Matrix phi = phi_plain * out.split.iota;
  if (!phi.invertible()) fail(ErrorCode::NoIsomorphismFound, "canonical comparison map is singular");

  const int r = out.split.image_dim;
  // unit: image coords of coevT(1)
  {
    Matrix u = phi * (ad.dual_x.pi * ad.coevT);
    Vec unit_val(n, NFE::zero(K));
    for (int i = 0; i < n; ++i) unit_val[i] = u.at(i, 0);
    if (!(unit_val == A.algebra().unit)) fail(ErrorCode::NoIsomorphismFound, "comparison map is not unital");
  }
  // multiplicativity: (f (x) x) . (f' (x) x') = f (x) (evT(x (x) f') |> x')
  for (int z1 = 0; z1 < r; ++z1)
    for (int z2 = 0; z2 < r; ++z2) {
      Vec prod(static_cast<size_t>(n) * n, NFE::zero(K));
      for (int al = 0; al < n; ++al)
        for (int x = 0; x < n; ++x) {
          const NFE& c1 = ad.dual_x.iota.at(al * n + x, z1);
          if (c1.is_zero()) continue;
          for (int al2 = 0; al2 < n; ++al2)
            for (int x2 = 0; x2 < n; ++x2) {
              const NFE& c2 = ad.dual_x.iota.at(al2 * n + x2, z2);
              if (c2.is_zero()) continue;
              Vec b(n, NFE::zero(K));
              for (int k = 0; k < n; ++k) b[k] = ad.evT.at(k, x * n + al2);
              Vec ex2(n, NFE::zero(K));
              ex2[x2] = NFE::one(K);
              Vec bx = A.algebra().multiply(b, ex2);
              NFE c12 = c1 * c2;
              for (int y = 0; y < n; ++y) prod[static_cast<size_t>(al) * n + y] += c12 * bx[y];
            }
        }
      Vec lhs(n, NFE::zero(K));
      for (int al = 0; al < n; ++al)
        for (int y = 0; y < n; ++y) {
          const NFE& c = prod[static_cast<size_t>(al) * n + y];
          if (c.is_zero()) continue;
          for (int rr = 0; rr < n; ++rr) lhs[rr] += c * phi_plain.at(rr, al * n + y);
        }
      Vec p1(n, NFE::zero(K)), p2(n, NFE::zero(K));
      for (int rr = 0; rr < n; ++rr) {
        p1[rr] = phi.at(rr, z1);
        p2[rr] = phi.at(rr, z2);
      }
      Vec rhs = A.algebra().multiply(p1, p2);
      if (!(lhs == rhs)) fail(ErrorCode::NoIsomorphismFound, "comparison map is not multiplicative");
    }
  // counits: eps_E = ev into the base field
  for (int z = 0; z < r; ++z) {
    NFE eps_e = ad.ev_rel.at(0, z);
    Vec pz(n, NFE::zero(K));
    for (int rr = 0; rr < n; ++rr) pz[rr] = phi.at(rr, z);
    NFE eps_a = A.eps(pz);
    if (!(eps_e == eps_a)) fail(ErrorCode::NoIsomorphismFound, "comparison map does not match the counits");
  }
  out.iso = phi;
  return out;
}

}  // namespace orbkit
