#pragma once

// Umbrella header for the library (the CLI front end lives in fogform/cli.hpp).

#include "fogform/config.hpp"
#include "fogform/errors.hpp"
#include "fogform/experiments.hpp"
#include "fogform/queueing.hpp"
#include "fogform/rng.hpp"
#include "fogform/scenario.hpp"
#include "fogform/selection.hpp"
#include "fogform/solver.hpp"
#include "fogform/version.hpp"
