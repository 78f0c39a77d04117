#pragma once

/**
 * @file regen.hpp
 * @brief Umbrella header for the whole library.
 */

#include "regen/chains.hpp"
#include "regen/decrement.hpp"
#include "regen/deletion.hpp"
#include "regen/eppf.hpp"
#include "regen/errors.hpp"
#include "regen/json_io.hpp"
#include "regen/kernel.hpp"
#include "regen/linalg.hpp"
#include "regen/paintbox.hpp"
#include "regen/partition.hpp"
#include "regen/random.hpp"
#include "regen/rational.hpp"
