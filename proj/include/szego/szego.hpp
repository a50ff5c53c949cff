#pragma once

// Umbrella header for the szego library: kernel functions of potential
// theory on smooth finitely connected planar domains.

#include "szego/classical.hpp"
#include "szego/domain_io.hpp"
#include "szego/errors.hpp"
#include "szego/geometry.hpp"
#include "szego/hardy.hpp"
#include "szego/numerics.hpp"
#include "szego/potential.hpp"
#include "szego/reconstruct.hpp"
#include "szego/suites.hpp"
#include "szego/verify.hpp"
#include "szego/weightexpr.hpp"
