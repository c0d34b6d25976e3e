#pragma once

#include "umssim/agents.hpp"
#include "umssim/config.hpp"
#include "umssim/domain.hpp"
#include "umssim/engine.hpp"
#include "umssim/report.hpp"
#include "umssim/reputation.hpp"
#include "umssim/rng.hpp"
#include "umssim/world.hpp"
