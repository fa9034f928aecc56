#pragma once

// Umbrella header.

#include "bajd/bessel_mixtures.hpp"
#include "bajd/cir.hpp"
#include "bajd/ergodicity.hpp"
#include "bajd/errors.hpp"
#include "bajd/invariant.hpp"
#include "bajd/io.hpp"
#include "bajd/quadrature.hpp"
#include "bajd/simulate.hpp"
#include "bajd/special_functions.hpp"
#include "bajd/transition.hpp"
#include "bajd/validation.hpp"
