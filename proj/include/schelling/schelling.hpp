#pragma once

#include "schelling/constructors.hpp"
#include "schelling/dynamics.hpp"
#include "schelling/experiments.hpp"
#include "schelling/fixtures.hpp"
#include "schelling/game.hpp"
#include "schelling/graph.hpp"
#include "schelling/graph_gen.hpp"
#include "schelling/instance_io.hpp"
#include "schelling/oracle.hpp"
