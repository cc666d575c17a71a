#pragma once

#include <span>

#include "sb/matrix.hpp"

namespace sb {

// D(p ‖ q) = Σ p_i log(p_i/q_i) with 0·log(0/x) = 0 and x·log(x/0) = +inf
// for x > 0. Returns +inf exactly when support(p) ⊄ support(q).
double kl_vec(std::span<const double> p, std::span<const double> q);

// Entrywise KL sum over the union of supports, same zero conventions.
double kl_matrix(const NonnegMatrix& m, const NonnegMatrix& n);

// D(p‖q) − ‖p−q‖₁²/(2·p_total); nonnegative by Pinsker's inequality.
// Requires matching totals (relative 1e-9).
double pinsker_gap(std::span<const double> p, std::span<const double> q);

}  // namespace sb
