#pragma once

// Pinned constants. Each was fixed from a sweep run before the verification
// suites existed; the observed maximum is recorded next to it.

#include <cmath>
#include <numbers>

#include "rank1ks/geometry.hpp"

namespace rank1ks::pinned {

/// ψ / comparator ∈ [1/C*, C*] over five spaces (observed range about
/// [0.333, 1.0]; the worst case is (4,3) with shape factor near 1/3).
inline constexpr double kKernelComparability = 3.2;

/// sup_s Abel / (∫F dens)^{1/2} for indicators on (2,0) and (2,1)
/// (ball family tends to √2 and 1.1107).
inline constexpr double kAbelL21 = 1.5;

/// Mixed-norm row embedding; 20000 random matrices up to 16×16 peaked at 1.
inline constexpr double kRowEmbedding = 1.0;

/// Exponential-weight embedding; extremal on prefix indicators.
inline constexpr double kExpEmbedding = std::numbers::sqrt2;

/// Step 1 to Step 2. For a fixed offset σ, Σ_t min(F1, H1) e^{ρ(t+t')} is at
/// most min(F² e^{ρs}, H² e^{-ρs}), and the threshold picks exactly that
/// minimum, so 1 is provable (observed 0.61).
inline constexpr double kChain12 = 1.0;

/// Step 2 to Step 3. Observed over 3000 models per space: (2,0) 0.904,
/// (2,1) 0.360, (1,0) 2.49, (3,0) 0.429.
inline double chain23(const SpaceParams& sp) {
  if (sp.m1 == 2 && sp.m2 == 0) return 1.25;
  if (sp.m1 == 2 && sp.m2 == 1) return 0.5;
  if (sp.m1 == 1 && sp.m2 == 0) return 3.5;
  if (sp.m1 == 3 && sp.m2 == 0) return 0.6;
  return NAN;
}

/// Endpoint boundedness: ratio(R = 8) <= factor · ratio(R = 4); observed 1.15.
inline constexpr double kEndpointGrowth = 1.5;
inline constexpr double kEndpointMaxRelStderr = 0.10;

/// φ-sup identity on (2,0); observed range [0.48, 1.82].
inline constexpr double kPhiSup = 2.5;

/// Pointwise domination of M̃2 by the M3 column integral. The unit ball
/// gives 0.46. Single balls of radius 0.3 to 0.45 are the worst case: 400
/// fields from seeds 1 and 2 peaked at 0.82 on 48³, and refining the worst
/// one gave 0.86 on 64³ and 0.74 on 96³.
inline constexpr double kDomination = 1.0;

/// Overlap weak norm of greedy coverings against |∪ B|^{1/2}; observed 1.0.
inline constexpr double kCoveringOverlap = 1.5;

/// Greedy covering union ratio, guaranteed by the completion pass.
inline constexpr double kCoveringUnion = 2.0;

}  // namespace rank1ks::pinned
