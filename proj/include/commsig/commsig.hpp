#pragma once

#include "commsig/baselines.hpp"
#include "commsig/binomial.hpp"
#include "commsig/eval.hpp"
#include "commsig/graph.hpp"
#include "commsig/group_graph.hpp"
#include "commsig/io.hpp"
#include "commsig/louvain.hpp"
#include "commsig/membership.hpp"
#include "commsig/synth.hpp"
#include "commsig/util.hpp"
