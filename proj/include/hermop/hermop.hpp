#pragma once

// Umbrella header: Hermite-spectral operator calculus, kernel factorization,
// Op_t quantization layer, and Schatten-von Neumann numerics.

#include "hermop/coeff_tensor.hpp"
#include "hermop/decay.hpp"
#include "hermop/errors.hpp"
#include "hermop/factorize.hpp"
#include "hermop/generators.hpp"
#include "hermop/hermite.hpp"
#include "hermop/multi_index.hpp"
#include "hermop/phase_grid.hpp"
#include "hermop/quadrature.hpp"
#include "hermop/schatten.hpp"
#include "hermop/serialize.hpp"
#include "hermop/transforms.hpp"
#include "hermop/weights.hpp"
#include "hermop/weyl.hpp"
