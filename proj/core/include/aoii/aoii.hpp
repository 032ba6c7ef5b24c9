#pragma once

#include "aoii/drph.hpp"
#include "aoii/errors.hpp"
#include "aoii/linalg.hpp"
#include "aoii/markov.hpp"
#include "aoii/policy.hpp"
#include "aoii/presets.hpp"
#include "aoii/sim.hpp"
#include "aoii/smdp.hpp"
#include "aoii/tolerances.hpp"
