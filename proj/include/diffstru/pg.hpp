#pragma once

#include "diffstru/rng.hpp"

namespace diffstru {

// Exact draw from the Polya-Gamma PG(1, c) distribution via the
// alternating-series rejection sampler (Devroye-type). E[PG(1,c)] =
// tanh(c/2)/(2c), with limit 1/4 at c = 0. Symmetric in c.
double pg_draw(double c, Rng& rng);

}  // namespace diffstru
