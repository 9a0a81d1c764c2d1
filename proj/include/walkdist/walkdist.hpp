#pragma once

// Walk-product distributions on decorated graphs: groups, harmonic
// analysis, walk counting, twisted spectra, effective bounds, and the
// integer-matrix applications, plus JSON/CSV I/O and the CLI driver.

#include "walkdist/bounds.hpp"
#include "walkdist/errors.hpp"
#include "walkdist/graphwalk.hpp"
#include "walkdist/groups.hpp"
#include "walkdist/io.hpp"
#include "walkdist/linalg.hpp"
#include "walkdist/matapp.hpp"
#include "walkdist/parallel.hpp"
#include "walkdist/repsfourier.hpp"
#include "walkdist/rng.hpp"
#include "walkdist/spectral.hpp"
