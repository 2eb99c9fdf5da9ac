#pragma once

#include "loggas/errors.hpp"
#include "loggas/rng.hpp"
#include "loggas/rational.hpp"
#include "loggas/subset.hpp"
#include "loggas/coupling.hpp"
#include "loggas/parallel.hpp"
#include "loggas/nest.hpp"
#include "loggas/critical_solver.hpp"
#include "loggas/spectral.hpp"
#include "loggas/closed_forms.hpp"
#include "loggas/graph_bridge.hpp"
#include "loggas/sphere_mc.hpp"
#include "loggas/cli_reports.hpp"
