#pragma once

// Anisotropic (Minkowski) differential geometry of closed hypersurfaces
// relative to a smooth convex gauge body: support functions and the inverse
// Gauss map, parametric surface sampling with spectral calculus, Birkhoff
// frames and Minkowski curvatures, global functionals and mixed volumes,
// first/second variation formulas with finite-difference oracles, and the
// stability spectrum of the second-variation form.

#include "minkgeo/body.hpp"
#include "minkgeo/common.hpp"
#include "minkgeo/fields.hpp"
#include "minkgeo/frames.hpp"
#include "minkgeo/functionals.hpp"
#include "minkgeo/io.hpp"
#include "minkgeo/polynomial.hpp"
#include "minkgeo/spectral.hpp"
#include "minkgeo/spectrum.hpp"
#include "minkgeo/suite.hpp"
#include "minkgeo/surface.hpp"
#include "minkgeo/variation.hpp"
