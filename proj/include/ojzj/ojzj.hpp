#pragma once

// Umbrella header.

#include <ojzj/algorithms.hpp>
#include <ojzj/bitstring.hpp>
#include <ojzj/harness.hpp>
#include <ojzj/individual.hpp>
#include <ojzj/objectives.hpp>
#include <ojzj/operators.hpp>
#include <ojzj/random.hpp>
#include <ojzj/ranking.hpp>
#include <ojzj/stages.hpp>
