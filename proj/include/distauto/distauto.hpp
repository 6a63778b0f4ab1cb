#pragma once

#include "distauto/constructions.hpp"
#include "distauto/engine.hpp"
#include "distauto/families.hpp"
#include "distauto/graph.hpp"
#include "distauto/machine.hpp"
#include "distauto/machine_io.hpp"
#include "distauto/schedule.hpp"
#include "distauto/state.hpp"
#include "distauto/turing.hpp"
