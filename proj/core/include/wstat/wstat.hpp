#pragma once

#include "wstat/densities.hpp"
#include "wstat/errors.hpp"
#include "wstat/estimation.hpp"
#include "wstat/geometry.hpp"
#include "wstat/io.hpp"
#include "wstat/model.hpp"
#include "wstat/montecarlo.hpp"
#include "wstat/optimize.hpp"
#include "wstat/quadrature.hpp"
#include "wstat/serialization.hpp"
#include "wstat/transport.hpp"
