#pragma once

// Core library: learners, mirror maps, comparators and checks. The bench/
// headers (stream generators, file formats, experiment driver) are separate;
// io.hpp and experiment.hpp additionally need nlohmann/json.

#include "scomd/comparator.hpp"
#include "scomd/error.hpp"
#include "scomd/newton.hpp"
#include "scomd/omd.hpp"
#include "scomd/ops.hpp"
#include "scomd/quantum.hpp"
#include "scomd/random.hpp"
#include "scomd/schedules.hpp"
#include "scomd/simplex.hpp"
#include "scomd/verify.hpp"
