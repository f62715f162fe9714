#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orbkit/bimodules.hpp"
#include "orbkit/fusion.hpp"
#include "orbkit/triangulation.hpp"

namespace orbkit {

struct StateSumResult {
  NFE value;
  long simplex_count = 0;
  long term_count = 0;  // factor entries touched during contraction
};

// 2d state sum of a separable symmetric Frobenius algebra on a closed
// oriented ordered triangulation; Euler insertions realize psi^{chi}.
StateSumResult fhk_evaluate(const OrderedTriangulation& T, const FrobeniusStructure& F);

// Turaev-Viro-Barrett-Westbury sum on a closed oriented 3d triangulation.
StateSumResult tv_evaluate(const OrderedTriangulation& T, const FusionData& F);

struct PachnerSuite {
  bool ok = true;
  int applied = 0;
  std::string witness;
};

// applies `moves` random bistellar flips (seeded), re-evaluating after each
PachnerSuite pachner_suite_fhk(const OrderedTriangulation& T, const FrobeniusStructure& F, int moves,
                               uint64_t seed);
PachnerSuite pachner_suite_tv(const OrderedTriangulation& T, const FusionData& F, int moves, uint64_t seed);

// ----------------------------------------------------------------------
// stratified complexes

struct DefectCircle {
  std::vector<int> edge_cells;  // unordered support; must form a single dual cycle
  int orientation = 1;
  Bimodule label;
  // point insertions: (support edge cell, bimodule endomorphism matrix)
  std::vector<std::pair<int, Matrix>> points;
};

struct Stratified2d {
  OrderedTriangulation base;
  std::vector<FrobeniusStructure> algebras;  // palette
  std::vector<int> triangle_label;           // palette index per triangle; -1 for traversed triangles
  std::vector<DefectCircle> circles;
};

StateSumResult orbifold_evaluate_2d(const Stratified2d& S);

struct DefectSphere {
  int center_vertex = 0;  // the (order-minimal) vertex whose link carries the defect
  ModuleData label;
};

struct Stratified3d {
  OrderedTriangulation base;
  FusionData theory;
  std::vector<DefectSphere> spheres;
};

StateSumResult orbifold_evaluate_3d(const Stratified3d& S);

// ----------------------------------------------------------------------
// state spaces via cylinder idempotents

struct CylinderIdempotent {
  Matrix k;          // exact idempotent
  int rank = 0;
  long boundary_states = 0;
};

// 3d theory on a closed surface (2d base triangulation)
CylinderIdempotent state_space_tv(const OrderedTriangulation& surface, const FusionData& F);
// 2d theory on a circle
CylinderIdempotent state_space_fhk(const OrderedTriangulation& circle, const FrobeniusStructure& F);

// Dijkgraaf-Witten counting oracle: |flat Z/N colorings| / N^{#vertices}
Rat dw_partition(const OrderedTriangulation& T, int N);

}  // namespace orbkit
