#pragma once

#include "mib/ball_trees.hpp"
#include "mib/bench.hpp"
#include "mib/bubble.hpp"
#include "mib/counter.hpp"
#include "mib/dataset.hpp"
#include "mib/distance.hpp"
#include "mib/errors.hpp"
#include "mib/index.hpp"
#include "mib/pivot_trees.hpp"
#include "mib/rng.hpp"
#include "mib/unicode.hpp"
#include "mib/vp_trees.hpp"
