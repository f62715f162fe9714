#include "orbkit/frobenius.hpp"

#include <algorithm>
#include <map>

namespace orbkit {

Vec Algebra::multiply(const Vec& x, const Vec& y) const {
  Vec r(n, NFE::zero(field));
  for (int i = 0; i < n; ++i) {
    if (x[i].is_zero()) continue;
    for (int j = 0; j < n; ++j) {
      if (y[j].is_zero()) continue;
      NFE f = x[i] * y[j];
      for (int k = 0; k < n; ++k) {
        const NFE& s = c(i, j, k);
        if (!s.is_zero()) r[k] += f * s;
      }
    }
  }
  return r;
}

Matrix Algebra::left_mult(const Vec& x) const {
  Matrix m(n, n, field);
  for (int j = 0; j < n; ++j) {
    Vec ej(n, NFE::zero(field));
    ej[j] = NFE::one(field);
    Vec col = multiply(x, ej);
    for (int k = 0; k < n; ++k) m.at(k, j) = col[k];
  }
  return m;
}

Matrix Algebra::right_mult(const Vec& x) const {
  Matrix m(n, n, field);
  for (int j = 0; j < n; ++j) {
    Vec ej(n, NFE::zero(field));
    ej[j] = NFE::one(field);
    Vec col = multiply(ej, x);
    for (int k = 0; k < n; ++k) m.at(k, j) = col[k];
  }
  return m;
}

bool Algebra::is_central(const Vec& x) const {
  for (int j = 0; j < n; ++j) {
    Vec ej(n, NFE::zero(field));
    ej[j] = NFE::one(field);
    if (multiply(x, ej) != multiply(ej, x)) return false;
  }
  return true;
}

bool Algebra::is_invertible(const Vec& x) const { return left_mult(x).invertible(); }

Vec Algebra::invert(const Vec& x) const {
  Matrix lx = left_mult(x);
  Matrix rhs(n, 1, field);
  for (int k = 0; k < n; ++k) rhs.at(k, 0) = unit[k];
  Matrix sol = lx.inverse() * rhs;
  Vec r(n, NFE::zero(field));
  for (int k = 0; k < n; ++k) r[k] = sol.at(k, 0);
  return r;
}

Vec Algebra::scale(const NFE& s, const Vec& x) const {
  Vec r = x;
  for (auto& v : r) v *= s;
  return r;
}

void Algebra::validate() const {
  if (n <= 0 || static_cast<int>(unit.size()) != n || mul.size() != static_cast<size_t>(n) * n * n)
    fail(ErrorCode::ShapeError, "algebra tensors have inconsistent dimensions");
  for (int i = 0; i < n; ++i) {
    Vec ei(n, NFE::zero(field));
    ei[i] = NFE::one(field);
    if (multiply(unit, ei) != ei || multiply(ei, unit) != ei)
      fail(ErrorCode::ShapeError, "stored unit is not a unit");
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Vec ei(n, NFE::zero(field)), ej(n, NFE::zero(field)), ek(n, NFE::zero(field));
        ei[i] = ej[j] = ek[k] = NFE::one(field);
        if (multiply(multiply(ei, ej), ek) != multiply(ei, multiply(ej, ek)))
          fail(ErrorCode::ShapeError, "structure constants are not associative");
      }
}

Vec vec_add(const Vec& x, const Vec& y) {
  Vec r = x;
  for (size_t i = 0; i < r.size(); ++i) r[i] += y[i];
  return r;
}

Vec vec_sub(const Vec& x, const Vec& y) {
  Vec r = x;
  for (size_t i = 0; i < r.size(); ++i) r[i] -= y[i];
  return r;
}

static bool vec_is_zero(const Vec& x) {
  return std::all_of(x.begin(), x.end(), [](const NFE& v) { return v.is_zero(); });
}

NFE FrobeniusStructure::eps(const Vec& x) const {
  NFE r = NFE::zero(field());
  for (int i = 0; i < dim(); ++i) r += eps_[i] * x[i];
  return r;
}

FrobeniusStructure FrobeniusStructure::make(Algebra a, Vec counit) {
  a.validate();
  if (static_cast<int>(counit.size()) != a.n) fail(ErrorCode::ShapeError, "counit length mismatch");
  FrobeniusStructure f;
  f.a_ = std::move(a);
  f.eps_ = std::move(counit);
  const int n = f.a_.n;
  FieldTag K = f.a_.field;
  f.g_ = Matrix(n, n, K);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec ei(n, NFE::zero(K)), ej(n, NFE::zero(K));
      ei[i] = ej[j] = NFE::one(K);
      f.g_.at(i, j) = f.eps(f.a_.multiply(ei, ej));
    }
  if (!f.g_.invertible()) {
    Matrix ker = f.g_.kernel_basis();
    std::string w = "pairing kernel witness:";
    for (int i = 0; i < ker.rows(); ++i) w += " " + ker.at(i, 0).str();
    fail(ErrorCode::NotFrobenius, w);
  }
  f.ginv_ = f.g_.inverse();
  for (int i = 0; i < n; ++i) {
    Vec u(n, NFE::zero(K)), v(n, NFE::zero(K));
    u[i] = NFE::one(K);
    bool nonzero = false;
    for (int j = 0; j < n; ++j) {
      v[j] = f.ginv_.at(i, j);
      if (!v[j].is_zero()) nonzero = true;
    }
    if (nonzero) {
      f.cas_u_.push_back(u);
      f.cas_v_.push_back(v);
    }
  }
  Vec w(n, NFE::zero(K));
  for (size_t t = 0; t < f.cas_u_.size(); ++t) w = vec_add(w, f.a_.multiply(f.cas_u_[t], f.cas_v_[t]));
  if (!f.a_.is_central(w)) fail(ErrorCode::Internal, "window element is not central");
  f.window_ = std::move(w);
  f.psi_ = f.a_.unit;
  return f;
}

bool FrobeniusStructure::is_symmetric() const {
  for (int i = 0; i < dim(); ++i)
    for (int j = i + 1; j < dim(); ++j)
      if (!(g_.at(i, j) == g_.at(j, i))) return false;
  return true;
}

bool FrobeniusStructure::is_delta_separable() const { return window_ == a_.unit; }

bool FrobeniusStructure::is_separable() const { return a_.is_invertible(window_); }

bool FrobeniusStructure::has_nontrivial_psi() const { return !(psi_ == a_.unit); }

Vec FrobeniusStructure::psi_inverse() const { return a_.invert(psi_); }

Matrix FrobeniusStructure::comultiplication() const {
  const int n = dim();
  Matrix d(n * n, n, field());
  for (int x = 0; x < n; ++x) {
    Vec ex(n, NFE::zero(field()));
    ex[x] = NFE::one(field());
    for (size_t t = 0; t < cas_u_.size(); ++t) {
      Vec left = a_.multiply(ex, cas_u_[t]);
      for (int i = 0; i < n; ++i) {
        if (left[i].is_zero()) continue;
        for (int j = 0; j < n; ++j) {
          if (cas_v_[t][j].is_zero()) continue;
          d.at(i * n + j, x) += left[i] * cas_v_[t][j];
        }
      }
    }
  }
  return d;
}

FrobeniusStructure FrobeniusStructure::euler_gamma() const {
  if (!is_separable() || !is_symmetric())
    fail(ErrorCode::NotSeparable, "euler_gamma needs a separable symmetric structure");
  Vec eps2(dim(), NFE::zero(field()));
  Matrix rw = a_.right_mult(window_);
  for (int j = 0; j < dim(); ++j) {
    // eps'(e_j) = eps(e_j * omega)
    NFE v = NFE::zero(field());
    for (int k = 0; k < dim(); ++k) v += rw.at(k, j) * eps_[k];
    eps2[j] = v;
  }
  FrobeniusStructure g = make(a_, eps2);
  g.psi_ = window_;
  if (!g.is_delta_separable() || !g.is_symmetric())
    fail(ErrorCode::Internal, "euler_gamma output failed its own invariants");
  return g;
}

FrobeniusStructure FrobeniusStructure::gamma_normalized() const {
  if (is_delta_separable()) return *this;
  return euler_gamma();
}

// ---------------------------------------------------------------------------
// center and idempotents

std::vector<Vec> center_basis(const Algebra& a) {
  const int n = a.n;
  Matrix sys(n * n, n, a.field);
  for (int j = 0; j < n; ++j) {
    Vec ej(n, NFE::zero(a.field));
    ej[j] = NFE::one(a.field);
    Matrix l = a.left_mult(ej), r = a.right_mult(ej);
    for (int col = 0; col < n; ++col)
      for (int row = 0; row < n; ++row) sys.at(j * n + row, col) = l.at(row, col) - r.at(row, col);
  }
  Matrix ker = sys.kernel_basis();
  std::vector<Vec> basis;
  for (int c = 0; c < ker.cols(); ++c) {
    Vec v(n, NFE::zero(a.field));
    for (int i = 0; i < n; ++i) v[i] = ker.at(i, c);
    basis.push_back(v);
  }
  return basis;
}

namespace {

// rational polynomial helpers for idempotent splitting (coefficients low->high)
using QPoly = std::vector<Rat>;

QPoly qp_trim(QPoly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

QPoly qp_mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1, Rat(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

// divide a by (x - root); assumes exact
QPoly qp_deflate(const QPoly& a, const Rat& root) {
  QPoly q(a.size() - 1, Rat(0));
  Rat carry = 0;
  for (int i = static_cast<int>(a.size()) - 1; i >= 1; --i) {
    q[i - 1] = a[i] + carry;
    carry = q[i - 1] * root;
  }
  return q;
}

Rat qp_eval(const QPoly& p, const Rat& x) {
  Rat r = 0;
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i) r = r * x + p[i];
  return r;
}

std::vector<mpz_class> divisors(mpz_class n) {
  if (n < 0) n = -n;
  std::vector<mpz_class> ds;
  if (n == 0) return ds;
  for (mpz_class i = 1; i * i <= n; ++i) {
    if (n % i == 0) {
      ds.push_back(i);
      if (i * i != n) ds.push_back(n / i);
    }
  }
  return ds;
}

std::vector<Rat> rational_roots(const QPoly& poly) {
  QPoly p = qp_trim(poly);
  std::vector<Rat> roots;
  if (p.size() <= 1) return roots;
  // strip x^k factors
  size_t shift = 0;
  while (shift < p.size() && p[shift] == 0) ++shift;
  if (shift > 0) {
    roots.push_back(Rat(0));
    p.erase(p.begin(), p.begin() + shift);
  }
  if (p.size() <= 1) return roots;
  mpz_class den(1);
  for (const Rat& c : p) den = lcm(den, c.get_den());
  std::vector<mpz_class> ip;
  for (const Rat& c : p) {
    Rat s = c * Rat(den);
    ip.push_back(s.get_num());
  }
  for (const mpz_class& pnum : divisors(ip.front()))
    for (const mpz_class& qden : divisors(ip.back()))
      for (int sgn : {1, -1}) {
        Rat cand(sgn * pnum, qden);
        cand.canonicalize();
        if (std::find(roots.begin(), roots.end(), cand) != roots.end()) continue;
        if (qp_eval(p, cand) == 0) roots.push_back(cand);
      }
  return roots;
}

// exact charpoly of a rational matrix via Faddeev-LeVerrier
QPoly rational_charpoly(const std::vector<std::vector<Rat>>& m) {
  const int n = static_cast<int>(m.size());
  std::vector<std::vector<Rat>> M(n, std::vector<Rat>(n, Rat(0)));
  QPoly c(n + 1, Rat(0));
  c[n] = 1;
  std::vector<std::vector<Rat>> I(n, std::vector<Rat>(n, Rat(0)));
  for (int i = 0; i < n; ++i) I[i][i] = 1;
  std::vector<std::vector<Rat>> Mk = I;
  for (int k = 1; k <= n; ++k) {
    // Mk = A * M_{k-1}
    std::vector<std::vector<Rat>> next(n, std::vector<Rat>(n, Rat(0)));
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) {
        if (m[i][l] == 0) continue;
        for (int j = 0; j < n; ++j) next[i][j] += m[i][l] * Mk[l][j];
      }
    Rat tr = 0;
    for (int i = 0; i < n; ++i) tr += next[i][i];
    Rat ck = -tr / k;
    c[n - k] = ck;
    for (int i = 0; i < n; ++i) next[i][i] += ck;
    Mk = next;
  }
  return c;
}

}  // namespace

std::vector<Vec> central_primitive_idempotents(const Algebra& a) {
  FieldTag K = a.field;
  std::vector<Vec> zb = center_basis(a);
  const int m = static_cast<int>(zb.size());
  const bool ext = K.d > 1;
  // restriction of scalars: Q-basis of the center is {z_i} or {z_i, sqrt(d) z_i}
  std::vector<Vec> qb;
  for (const Vec& z : zb) {
    qb.push_back(z);
    if (ext) qb.push_back(a.scale(NFE::sqrt_gen(K), z));
  }
  const int qm = static_cast<int>(qb.size());

  // K-coordinates w.r.t. zb, then split into rational/radical parts
  Matrix emb(a.n, m, K);
  for (int c = 0; c < m; ++c)
    for (int r = 0; r < a.n; ++r) emb.at(r, c) = zb[c][r];
  Matrix extract = emb.left_inverse();

  auto to_coords = [&](const Vec& z) {
    Matrix col(a.n, 1, K);
    for (int r = 0; r < a.n; ++r) col.at(r, 0) = z[r];
    Matrix q = extract * col;
    std::vector<Rat> out(qm);
    for (int i = 0; i < m; ++i) {
      out[ext ? 2 * i : i] = q.at(i, 0).rational_part();
      if (ext) out[2 * i + 1] = q.at(i, 0).radical_part();
    }
    // verify exactness (z must lie in the center)
    Vec back(a.n, NFE::zero(K));
    for (int i = 0; i < m; ++i) back = vec_add(back, a.scale(q.at(i, 0), zb[i]));
    if (!(back == z)) fail(ErrorCode::Internal, "center coordinate extraction failed");
    return out;
  };

  // multiplication by z as a rational qm x qm matrix restricted to the center
  auto mult_matrix = [&](const Vec& z) {
    std::vector<std::vector<Rat>> M(qm, std::vector<Rat>(qm, Rat(0)));
    for (int j = 0; j < qm; ++j) {
      auto col = to_coords(a.multiply(z, qb[j]));
      for (int i = 0; i < qm; ++i) M[i][j] = col[i];
    }
    return M;
  };

  auto apply_poly = [&](const QPoly& p, const Vec& z) {
    Vec acc(a.n, NFE::zero(K));
    Vec power = a.unit;
    for (size_t i = 0; i < p.size(); ++i) {
      if (p[i] != 0) acc = vec_add(acc, a.scale(NFE::rational(p[i], K), power));
      power = a.multiply(power, z);
    }
    return acc;
  };

  // Split e (an idempotent) using a rational eigenvalue of mult-by-z on e*Z.
  // Returns {} when no candidate splits.
  auto try_split = [&](const Vec& e) -> std::vector<Vec> {
    std::vector<Vec> cands;
    for (const Vec& z : zb) cands.push_back(a.multiply(e, z));
    for (size_t i = 0; i < zb.size(); ++i)
      for (size_t j = i + 1; j < zb.size(); ++j) {
        cands.push_back(a.multiply(e, vec_add(zb[i], zb[j])));
        cands.push_back(a.multiply(e, vec_sub(zb[i], zb[j])));
      }
    for (const Vec& z : cands) {
      // spectrum of mult-by-z on the full center; project with e afterwards
      auto M = mult_matrix(z);
      QPoly chi = rational_charpoly(M);
      for (const Rat& root : rational_roots(chi)) {
        // factor chi = (x-root)^k q(x), q(root) != 0
        QPoly q = chi;
        int k = 0;
        while (!q.empty() && qp_eval(q, root) == 0) {
          q = qp_deflate(q, root);
          ++k;
        }
        if (k == 0) continue;
        // projector onto the root-eigenblock: p(z) with p = q * (q(root))^-1
        // works because z is semisimple on a split center (k-fold roots come
        // from repeated blocks, (z - root) annihilates each of them)
        Rat qr = qp_eval(q, root);
        QPoly proj = q;
        for (auto& cf : proj) cf /= qr;
        Vec cand = apply_poly(proj, z);
        cand = a.multiply(e, cand);
        if (!(a.multiply(cand, cand) == cand)) continue;  // non-semisimple direction
        if (vec_is_zero(cand) || cand == e) continue;
        return {cand, vec_sub(e, cand)};
      }
    }
    return {};
  };

  // K-dimension of e*Z
  auto block_center_dim = [&](const Vec& e) {
    Matrix span(a.n, m, K);
    for (int c = 0; c < m; ++c) {
      Vec v = a.multiply(e, zb[c]);
      for (int r = 0; r < a.n; ++r) span.at(r, c) = v[r];
    }
    return span.rank();
  };

  std::vector<Vec> done;
  std::vector<Vec> work{a.unit};
  while (!work.empty()) {
    Vec e = work.back();
    work.pop_back();
    if (block_center_dim(e) == 1) {
      done.push_back(e);
      continue;
    }
    auto split = try_split(e);
    if (split.empty())
      fail(ErrorCode::NotSplitSemisimple,
           "center block of dimension " + std::to_string(block_center_dim(e)) +
               " does not split over the tagged field");
    work.push_back(split[0]);
    work.push_back(split[1]);
  }

  // deterministic order: lexicographically smallest support (first basis index
  // with a nonzero coefficient, then second, ...)
  auto support_key = [&](const Vec& v) {
    std::vector<int> key;
    for (int i = 0; i < a.n; ++i)
      if (!v[i].is_zero()) key.push_back(i);
    return key;
  };
  std::sort(done.begin(), done.end(), [&](const Vec& x, const Vec& y) {
    auto kx = support_key(x), ky = support_key(y);
    if (kx != ky) return kx < ky;
    for (int i = 0; i < a.n; ++i) {
      if (x[i] == y[i]) continue;
      return (x[i] - y[i]).sign() > 0;
    }
    return false;
  });

  // completeness / orthogonality sanity
  Vec sum(a.n, NFE::zero(K));
  for (const Vec& e : done) sum = vec_add(sum, e);
  if (!(sum == a.unit)) fail(ErrorCode::Internal, "central idempotents do not sum to 1");
  for (size_t i = 0; i < done.size(); ++i)
    for (size_t j = 0; j < done.size(); ++j) {
      Vec p = a.multiply(done[i], done[j]);
      if (i == j ? !(p == done[i]) : !vec_is_zero(p))
        fail(ErrorCode::Internal, "central idempotents are not orthogonal");
    }
  return done;
}

Vec FrobeniusStructure::window_sqrt() const {
  if (!is_separable()) fail(ErrorCode::NotSeparable, "window square root needs invertible window");
  auto idems = central_primitive_idempotents(a_);
  Vec s(dim(), NFE::zero(field()));
  for (const Vec& e : idems) {
    Vec we = a_.multiply(window_, e);
    // on a split block, window * e = c * e for a scalar c
    int ref = -1;
    for (int i = 0; i < dim(); ++i)
      if (!e[i].is_zero()) {
        ref = i;
        break;
      }
    NFE c = we[ref] / e[ref];
    if (!(a_.scale(c, e) == we))
      fail(ErrorCode::NotSplitSemisimple, "window is not scalar on a central block");
    NFE r = c.sqrt();  // throws NoSquareRootInField
    s = vec_add(s, a_.scale(r, e));
  }
  Vec check = a_.multiply(s, s);
  if (!(check == window_)) fail(ErrorCode::Internal, "window sqrt verification failed");
  return s;
}

FrobeniusReport check_frobenius(const Algebra& a, const Vec& counit) {
  a.validate();
  FrobeniusReport rep;
  try {
    FrobeniusStructure f = FrobeniusStructure::make(a, counit);
    rep.frobenius = true;
    rep.symmetric = f.is_symmetric();
    rep.delta_separable = f.is_delta_separable();
    rep.separable = f.is_separable();
    rep.window = f.window();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotFrobenius) throw;
    rep.frobenius = false;
    // recompute the kernel witness
    const int n = a.n;
    Matrix g(n, n, a.field);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Vec ei(n, NFE::zero(a.field)), ej(n, NFE::zero(a.field));
        ei[i] = ej[j] = NFE::one(a.field);
        Vec p = a.multiply(ei, ej);
        NFE v = NFE::zero(a.field);
        for (int k = 0; k < n; ++k) v += counit[k] * p[k];
        g.at(i, j) = v;
      }
    Matrix ker = g.kernel_basis();
    Vec w(n, NFE::zero(a.field));
    for (int i = 0; i < n; ++i) w[i] = ker.at(i, 0);
    rep.kernel_witness = w;
  }
  return rep;
}

Algebra group_algebra_z2(FieldTag f) {
  Algebra a;
  a.n = 2;
  a.field = f;
  a.unit = {NFE::one(f), NFE::zero(f)};
  a.mul.assign(8, NFE::zero(f));
  a.c(0, 0, 0) = NFE::one(f);
  a.c(0, 1, 1) = NFE::one(f);
  a.c(1, 0, 1) = NFE::one(f);
  a.c(1, 1, 0) = NFE::one(f);
  return a;
}

Algebra matrix_algebra(int n, FieldTag f) {
  Algebra a;
  a.n = n * n;
  a.field = f;
  a.unit.assign(a.n, NFE::zero(f));
  a.mul.assign(static_cast<size_t>(a.n) * a.n * a.n, NFE::zero(f));
  auto idx = [n](int i, int j) { return i * n + j; };
  for (int i = 0; i < n; ++i) a.unit[idx(i, i)] = NFE::one(f);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          if (j == k) a.c(idx(i, j), idx(k, l), idx(i, l)) = NFE::one(f);
  return a;
}

Algebra product_field_algebra(int k, FieldTag f) {
  Algebra a;
  a.n = k;
  a.field = f;
  a.unit.assign(k, NFE::one(f));
  a.mul.assign(static_cast<size_t>(k) * k * k, NFE::zero(f));
  for (int i = 0; i < k; ++i) a.c(i, i, i) = NFE::one(f);
  return a;
}

Algebra dual_numbers(FieldTag f) {
  Algebra a;
  a.n = 2;
  a.field = f;
  a.unit = {NFE::one(f), NFE::zero(f)};
  a.mul.assign(8, NFE::zero(f));
  a.c(0, 0, 0) = NFE::one(f);
  a.c(0, 1, 1) = NFE::one(f);
  a.c(1, 0, 1) = NFE::one(f);
  // x*x = 0
  return a;
}

}  // namespace orbkit
