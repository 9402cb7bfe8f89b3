#pragma once

#include "fairnoma/channel_model.hpp"
#include "fairnoma/ergodic_analysis.hpp"
#include "fairnoma/experiments.hpp"
#include "fairnoma/monte_carlo.hpp"
#include "fairnoma/noma_core.hpp"
#include "fairnoma/quadrature.hpp"
#include "fairnoma/special_functions.hpp"
