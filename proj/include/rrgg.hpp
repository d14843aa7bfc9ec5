#pragma once

#include "rrgg/cell_search.hpp"
#include "rrgg/cells.hpp"
#include "rrgg/coloring.hpp"
#include "rrgg/cycle_state.hpp"
#include "rrgg/errors.hpp"
#include "rrgg/geometry.hpp"
#include "rrgg/harness.hpp"
#include "rrgg/io.hpp"
#include "rrgg/oracle.hpp"
#include "rrgg/pipeline.hpp"
#include "rrgg/properties.hpp"
#include "rrgg/rng.hpp"
#include "rrgg/splice.hpp"
#include "rrgg/ugly_cover.hpp"
#include "rrgg/walecki.hpp"
