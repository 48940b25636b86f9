#pragma once

/// \file steerharvest.hpp
/// \brief Umbrella header.

#include "analysis.hpp"
#include "complex_erf.hpp"
#include "errors.hpp"
#include "harvest.hpp"
#include "oracle.hpp"
#include "xstate.hpp"
