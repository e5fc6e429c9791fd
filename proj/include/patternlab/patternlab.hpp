#pragma once

// Umbrella header.

#include "patternlab/altstruct.hpp"
#include "patternlab/bounds.hpp"
#include "patternlab/combinatorics.hpp"
#include "patternlab/constructions.hpp"
#include "patternlab/error.hpp"
#include "patternlab/extremal.hpp"
#include "patternlab/harness.hpp"
#include "patternlab/mis.hpp"
#include "patternlab/patterns.hpp"
#include "patternlab/rng.hpp"
#include "patternlab/stochastic.hpp"
#include "patternlab/walks.hpp"
