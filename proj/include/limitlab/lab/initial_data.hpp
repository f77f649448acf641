#pragma once

#include "limitlab/ericksen_leslie.hpp"
#include "limitlab/lab/config.hpp"
#include "limitlab/qian_sheng.hpp"

namespace limitlab {

// Director-model initial data (n unit, ndot tangential, v solenoidal).
ElState make_el_initial(const PeriodicGrid& g, const InitialRecipe& r, DiffContext& ctx);

// Q-tensor initial data built from the same recipe: Q = s1(nn - I/3) + amplitude_q * (random
// band-limited tensor), Qdot = s1(ndot n + n ndot), same v.
QsState make_qs_initial(const PeriodicGrid& g, const InitialRecipe& r, const MaterialParams& p, DiffContext& ctx);

// Random smooth field with integer wavenumbers |kx|, |ky| <= modes, amplitude-normalized
// so that the sup of each component is at most `amplitude`.
template <int C>
Field<C> random_smooth_field(const PeriodicGrid& g, int modes, double amplitude, std::uint64_t seed);

}  // namespace limitlab
