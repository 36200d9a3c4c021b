#pragma once

#include "intervene/dag.hpp"
#include "intervene/enumerate.hpp"
#include "intervene/io.hpp"
#include "intervene/knowledge.hpp"
#include "intervene/oracle.hpp"
#include "intervene/planner.hpp"
#include "intervene/report.hpp"
#include "intervene/simulation.hpp"
#include "intervene/variable_set.hpp"
#include "intervene/verifier.hpp"
