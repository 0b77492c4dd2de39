#pragma once

// Umbrella header for the whole library.

#include "sublaw/capacity.hpp"
#include "sublaw/choquet.hpp"
#include "sublaw/config.hpp"
#include "sublaw/distribution.hpp"
#include "sublaw/errors.hpp"
#include "sublaw/expectation.hpp"
#include "sublaw/experiments.hpp"
#include "sublaw/functional.hpp"
#include "sublaw/inequalities.hpp"
#include "sublaw/instances.hpp"
#include "sublaw/report.hpp"
#include "sublaw/rng.hpp"
#include "sublaw/selector.hpp"
#include "sublaw/seq_analysis.hpp"
#include "sublaw/sequence_model.hpp"
#include "sublaw/sequences.hpp"
#include "sublaw/slln.hpp"
