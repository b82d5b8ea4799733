#pragma once

#include "rol/acceptance.hpp"
#include "rol/adversaries.hpp"
#include "rol/agnostic.hpp"
#include "rol/core.hpp"
#include "rol/corpus.hpp"
#include "rol/dimension.hpp"
#include "rol/experts.hpp"
#include "rol/game.hpp"
#include "rol/harness.hpp"
#include "rol/learners.hpp"
#include "rol/oracle.hpp"
#include "rol/random.hpp"
#include "rol/scenario.hpp"
#include "rol/stats.hpp"
#include "rol/uncertain.hpp"
