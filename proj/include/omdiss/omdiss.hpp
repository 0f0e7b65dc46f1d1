#pragma once

#include "omdiss/errors.hpp"
#include "omdiss/gaussian.hpp"
#include "omdiss/model.hpp"
#include "omdiss/observables.hpp"
#include "omdiss/presets.hpp"
#include "omdiss/response.hpp"
#include "omdiss/runner.hpp"
#include "omdiss/scenario.hpp"
#include "omdiss/smallmat.hpp"
#include "omdiss/sweep.hpp"
#include "omdiss/table.hpp"
#include "omdiss/tolerances.hpp"
#include "omdiss/version.hpp"
