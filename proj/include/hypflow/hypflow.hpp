#pragma once

#include "hypflow/config.hpp"
#include "hypflow/diagnostics.hpp"
#include "hypflow/errors.hpp"
#include "hypflow/flow.hpp"
#include "hypflow/graph_geometry.hpp"
#include "hypflow/hyptrig.hpp"
#include "hypflow/integrals.hpp"
#include "hypflow/io.hpp"
#include "hypflow/presets.hpp"
#include "hypflow/sphere_grid.hpp"
#include "hypflow/version.hpp"
