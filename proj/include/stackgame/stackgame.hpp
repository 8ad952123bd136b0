#pragma once

#include "adp_basis.hpp"
#include "adp_learner.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "game_model.hpp"
#include "linalg.hpp"
#include "model_based.hpp"
#include "oracle.hpp"
#include "plant_sim.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "runner.hpp"
