#pragma once

#include "jamsim/channel.hpp"
#include "jamsim/config.hpp"
#include "jamsim/detection.hpp"
#include "jamsim/errors.hpp"
#include "jamsim/estimation.hpp"
#include "jamsim/jammer.hpp"
#include "jamsim/performance.hpp"
#include "jamsim/pilot_book.hpp"
#include "jamsim/pilot_phase.hpp"
#include "jamsim/rng.hpp"
#include "jamsim/runner.hpp"
#include "jamsim/scenario.hpp"
#include "jamsim/types.hpp"
