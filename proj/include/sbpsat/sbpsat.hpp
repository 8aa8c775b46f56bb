#pragma once

#include "sbpsat/banded.hpp"
#include "sbpsat/diagnostics.hpp"
#include "sbpsat/dissipation.hpp"
#include "sbpsat/error.hpp"
#include "sbpsat/experiments.hpp"
#include "sbpsat/grid.hpp"
#include "sbpsat/induction.hpp"
#include "sbpsat/io.hpp"
#include "sbpsat/sbp_operator.hpp"
#include "sbpsat/timestep.hpp"
