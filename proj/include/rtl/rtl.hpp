#pragma once

// Umbrella header for the whole library.

#include "rtl/core.hpp"
#include "rtl/direct.hpp"
#include "rtl/errors.hpp"
#include "rtl/flow.hpp"
#include "rtl/inverse.hpp"
#include "rtl/io.hpp"
#include "rtl/ode.hpp"
#include "rtl/poly.hpp"
