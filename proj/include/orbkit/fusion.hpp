#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orbkit/linalg.hpp"

namespace orbkit {

// Skeletal label calculus shared by fusion categories and module-category
// data: labels with multiplicity-free fusion and scalar F-symbols. Labels
// >= base_count are module-typed (they appear only in the last tensor slot
// of admissible triples).
struct LabelSystem {
  int count = 0;
  int unit = 0;
  int base_count = 0;
  FieldTag field{1};
  std::vector<char> Nt;       // count^3, N(a,b,c)
  std::map<uint64_t, NFE> F;  // key(a,b,c,d,e,f)
  std::vector<NFE> weight;    // qdim for base labels, trace scalars for module labels

  static uint64_t key(int a, int b, int c, int d, int e, int f);

  bool n(int a, int b, int c) const { return Nt[(static_cast<size_t>(a) * count + b) * count + c] != 0; }
  void set_n(int a, int b, int c, bool v) {
    Nt[(static_cast<size_t>(a) * count + b) * count + c] = v ? 1 : 0;
  }

  // F-symbol with the strict-unit conventions; 0 for inadmissible tuples.
  NFE fsym(int a, int b, int c, int d, int e, int f) const;

  // channel lists for the F-matrix of (a,b,c;d)
  std::vector<int> rows_of(int a, int b, int c, int d) const;  // e: N(a,b,e) N(e,c,d)
  std::vector<int> cols_of(int a, int b, int c, int d) const;  // f: N(b,c,f) N(a,f,d)
  Matrix fmatrix(int a, int b, int c, int d) const;
  Matrix fmatrix_inverse(int a, int b, int c, int d) const;

  struct PentagonReport {
    bool ok = true;
    std::string witness;
  };
  PentagonReport check_pentagon() const;
  bool unit_constraints_ok(std::string* witness = nullptr) const;
  bool fmatrices_invertible(std::string* witness = nullptr) const;
};

struct FusionData {
  std::vector<std::string> labels;  // labels[0] is the unit
  std::vector<int> dual;
  LabelSystem sys;                      // base_count == labels.size()
  std::optional<NFE> vertex_weight;     // phi^2, the per-vertex Euler weight

  int count() const { return static_cast<int>(labels.size()); }
  const NFE& qdim(int i) const { return sys.weight[i]; }
  NFE global_dim() const;  // D^2 = sum d_i^2
};

struct FusionReport {
  bool shape = false;
  bool unit = false;
  bool pentagon = false;
  bool spherical = false;
  NFE globaldim;
  std::string witness;
  bool all() const { return shape && unit && pentagon && spherical; }
};

FusionReport check_fusion(const FusionData& f);

// rigidity via strongness of the canonical lax bimodule structure on the
// right adjoint of the tensor product (checked blockwise on simples)
bool check_rigidity_strong(const FusionData& f, std::string* witness = nullptr);

// ----------------------------------------------------------------------
// semisimple Calabi-Yau categories and functors on simples

struct CYData {
  int simples = 0;
  std::vector<NFE> traces;
  FieldTag field{1};
  void validate() const;  // nondegeneracy: all trace scalars nonzero
};

// linear functor between semisimple categories by multiplicities;
// morphisms are per-simple blocks
struct SSFunctor {
  int src = 0, dst = 0;
  std::vector<std::vector<int>> mult;  // mult[j][i], j in dst, i in src
  std::vector<int> apply_obj(const std::vector<int>& x) const;
  SSFunctor transpose() const;  // the adjoint on multiplicities
};

// morphism X -> Y between multiplicity vectors: blocks[i] is Y_i x X_i
struct SSMor {
  std::vector<Matrix> blocks;
};

SSMor ss_identity(const std::vector<int>& x, FieldTag f);
SSMor ss_compose(const SSMor& g, const SSMor& f);
// functor applied to a morphism, with the (i, copy, index) basis ordering
SSMor ss_apply(const SSFunctor& F, const std::vector<int>& X, const std::vector<int>& Y, const SSMor& phi,
               FieldTag field);

struct AdjunctionComponents {
  // unit[i]: i -> GF(i); counit[j]: FG(j) -> j, as full morphisms
  std::vector<SSMor> unit;
  std::vector<SSMor> counit;
};

struct LeftAdjointResult {
  AdjunctionComponents left;  // unit[j']: j' -> FG(j'), counit[i]: GF(i) -> i
  bool zorro = false;
};

// natural-transformation component of a simple-indexed family at an object
SSMor nat_component(const std::vector<SSMor>& simple_components, const SSFunctor& FG,
                    const std::vector<int>& obj, bool from_composite, FieldTag field);

bool check_right_adjunction(const CYData& C, const CYData& Cp, const SSFunctor& F,
                            const AdjunctionComponents& right);

LeftAdjointResult left_adjoint_from_trace(const CYData& C, const CYData& Cp, const SSFunctor& F,
                                          const AdjunctionComponents& right);

// pivotal equivalence of CY data along a bijection of simples
bool check_pivotal_equivalence(const CYData& C, const CYData& Cp, const std::vector<int>& bijection);

// ----------------------------------------------------------------------
// module categories with trace

struct ModuleData {
  FusionData base;                   // acts on the left
  std::optional<FusionData> rbase;   // acts on the right (bimodule categories)
  int simples = 0;                   // module simples
  std::vector<char> actL;            // (c, m, m')
  std::vector<char> actR;            // (m, c', m')
  std::map<uint64_t, NFE> FL;        // key(c1, c2, m, m_tgt, x, m_mid)
  std::map<uint64_t, NFE> FR;        // key(m, c1, c2, m_tgt, m_mid, x)
  std::vector<NFE> traces;

  bool nl(int c, int m, int mp) const {
    return actL[(static_cast<size_t>(c) * simples + m) * simples + mp] != 0;
  }
  bool nr(int m, int c, int mp) const {
    return actR[(static_cast<size_t>(m) * rbase_count() + c) * simples + mp] != 0;
  }
  int rbase_count() const { return rbase ? rbase->count() : 1; }

  // extended label system: base labels, then module labels (left-module
  // orientation: module labels sit in the last slot)
  LabelSystem left_system() const;
  // right-module orientation: module labels in the first slot
  LabelSystem right_system() const;

  // the regular module of a fusion category over itself
  static ModuleData regular(const FusionData& f);
};

struct ModuleTraceReport {
  bool pentagon = false;
  bool compatible = false;
  std::string witness;
};

ModuleTraceReport check_module_trace(const ModuleData& m);

// shipped constructions
FusionData fusion_vec_zn(int nlabels, long field_d, const NFE& vertex_weight);
FusionData fusion_vec_z2_twisted(const NFE& vertex_weight);
FusionData fusion_fibonacci();

}  // namespace orbkit
