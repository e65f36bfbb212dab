#pragma once

#include "pentalab/errors.hpp"
#include "pentalab/exact_linalg.hpp"
#include "pentalab/projective.hpp"
#include "pentalab/polygon.hpp"
#include "pentalab/map_spec.hpp"
#include "pentalab/maps.hpp"
#include "pentalab/bigfloat.hpp"
#include "pentalab/lax.hpp"
#include "pentalab/height_lab.hpp"
#include "pentalab/checks.hpp"
#include "pentalab/io.hpp"
