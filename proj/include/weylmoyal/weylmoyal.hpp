#pragma once

#include "bivector.hpp"
#include "core.hpp"
#include "heisenberg.hpp"
#include "io_json.hpp"
#include "lattice.hpp"
#include "orbits.hpp"
#include "sections.hpp"
#include "star_product.hpp"
#include "weyl_system.hpp"
