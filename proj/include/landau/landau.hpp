#ifndef LANDAU_LANDAU_HPP
#define LANDAU_LANDAU_HPP

#include "landau/config.hpp"
#include "landau/density.hpp"
#include "landau/diagnostics.hpp"
#include "landau/dynamics.hpp"
#include "landau/estimators.hpp"
#include "landau/functionals.hpp"
#include "landau/philox.hpp"
#include "landau/potential.hpp"
#include "landau/reference.hpp"
#include "landau/stats.hpp"
#include "landau/types.hpp"

#endif  // LANDAU_LANDAU_HPP
