/// @file degenls.hpp
/// @brief Umbrella header for the whole library.

#pragma once

#include "degenls/error.hpp"
#include "degenls/linalg.hpp"
#include "degenls/grid.hpp"
#include "degenls/discretization.hpp"
#include "degenls/profile.hpp"
#include "degenls/model.hpp"
#include "degenls/functionals.hpp"
#include "degenls/ground_state.hpp"
#include "degenls/spectral.hpp"
#include "degenls/dynamics.hpp"
#include "degenls/asymptotics.hpp"
#include "degenls/config.hpp"
#include "degenls/io.hpp"
#include "degenls/sweep.hpp"
