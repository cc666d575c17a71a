#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sb/decomposition.hpp"
#include "sb/hall.hpp"
#include "sb/marginals.hpp"
#include "sb/matrix.hpp"

// Deliberately naive ground truth: exhaustive enumeration, exact rational
// hull construction and literal dense iteration. Everything here is
// independent of the flow-based implementations it cross-checks.
namespace sb::oracle {

// One maximal stable set X ⊔ ([m] ∖ Γ(X)) per subset X of the rows.
// Requires n ≤ 20 and m ≤ 64.
std::vector<StableSet> enumerate_stable(const NonnegMatrix& a);

struct HullPoint {
  Rational x;  // r(X)
  Rational y;  // c(Y)
  StableSet set;
};

std::vector<HullPoint> stable_points(const NonnegMatrix& a, const MarginalPair& mp);

// Vertices of the upper-right boundary of Conv 𝒮 from (R,0) to (0,C), in
// that order: the extreme stable sets X_0 ⊃ … ⊃ X_θ. Exact rational
// orientation tests, so edge-interior points are never reported.
std::vector<HullPoint> hull_extremes(std::vector<HullPoint> points);

struct DeficiencyResult {
  std::vector<int> set;
  int value = 0;
};

// Exact argmax of |X| − |Γ(X)| over all 2^{n1} subsets; ties resolve to the
// lexicographically smallest index list. Requires n1 ≤ 20.
DeficiencyResult max_deficiency_exhaustive(const BipartiteGraph& g);

struct DenseRun {
  std::vector<std::vector<double>> matrix;  // N_steps
  bool underflow = false;                   // some support entry reached 0
};

// Literal dense evaluation of the alternating normalizations, no log
// domain. The observer, when given, sees (k, N_k) for k = 0..steps.
DenseRun dense_sinkhorn(
    const NonnegMatrix& a, const MarginalPair& mp, std::uint64_t steps,
    const std::function<void(std::uint64_t, const std::vector<std::vector<double>>&)>& observer =
        nullptr);

// Exact check of the optimality certificate for p*: the gradient expansion
// coefficients are positive and every constraint p*(X_κ) = c(Γ(X_κ)) is
// tight in rational arithmetic.
bool verify_kkt(const NonnegMatrix& a, const MarginalPair& mp, const PrincipalPartition& pp);

// Maximum matching size via augmenting paths.
int maximum_matching(const BipartiteGraph& g);

}  // namespace sb::oracle
