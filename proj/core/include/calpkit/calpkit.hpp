#pragma once

#include "calpkit/calp.hpp"
#include "calpkit/embedding.hpp"
#include "calpkit/emlp.hpp"
#include "calpkit/error.hpp"
#include "calpkit/generate.hpp"
#include "calpkit/graphs.hpp"
#include "calpkit/io.hpp"
#include "calpkit/lp.hpp"
#include "calpkit/maxflow.hpp"
#include "calpkit/oracle.hpp"
#include "calpkit/reductions.hpp"
#include "calpkit/scheduler.hpp"
#include "calpkit/structured.hpp"
#include "calpkit/twonode.hpp"
