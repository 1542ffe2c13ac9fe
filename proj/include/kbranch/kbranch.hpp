#pragma once

#include "kbranch/dca.hpp"
#include "kbranch/digraph.hpp"
#include "kbranch/exchange.hpp"
#include "kbranch/feasibility.hpp"
#include "kbranch/function_table.hpp"
#include "kbranch/io.hpp"
#include "kbranch/matroid.hpp"
#include "kbranch/maxflow.hpp"
#include "kbranch/packing.hpp"
#include "kbranch/recognition.hpp"
#include "kbranch/rootloc.hpp"
#include "kbranch/vertex_set.hpp"
