#pragma once

// Umbrella header: pulls in the whole planning/simulation toolkit.

#include "onocplan/rational.hpp"
#include "onocplan/model.hpp"
#include "onocplan/costmodel.hpp"
#include "onocplan/optimizer.hpp"
#include "onocplan/mapping.hpp"
#include "onocplan/netsim.hpp"
#include "onocplan/config.hpp"
#include "onocplan/commands.hpp"
