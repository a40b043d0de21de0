#pragma once

#include "memcon/experiments.hpp"
#include "memcon/graph.hpp"
#include "memcon/graph_io.hpp"
#include "memcon/memory_graph.hpp"
#include "memcon/probability.hpp"
#include "memcon/random.hpp"
#include "memcon/rational.hpp"
#include "memcon/simulation.hpp"
#include "memcon/stationary.hpp"
#include "memcon/statistics.hpp"
#include "memcon/structure.hpp"
#include "memcon/text.hpp"
#include "memcon/topology.hpp"
