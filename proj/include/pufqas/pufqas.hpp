// pufqas.hpp
// Umbrella header pulling in the whole library.

#pragma once

#include "pufqas/bounds.hpp"
#include "pufqas/cli.hpp"
#include "pufqas/cloning.hpp"
#include "pufqas/errors.hpp"
#include "pufqas/numeric_policy.hpp"
#include "pufqas/protocol.hpp"
#include "pufqas/quantum.hpp"
#include "pufqas/report.hpp"
#include "pufqas/rng.hpp"
#include "pufqas/special_functions.hpp"
