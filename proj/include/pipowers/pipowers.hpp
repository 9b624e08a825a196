#pragma once

#include "pipowers/analytic_kernel.hpp"
#include "pipowers/bell.hpp"
#include "pipowers/bigreal.hpp"
#include "pipowers/combinatorics.hpp"
#include "pipowers/errors.hpp"
#include "pipowers/pi_engine.hpp"
#include "pipowers/report.hpp"
#include "pipowers/series_sum.hpp"
#include "pipowers/verify.hpp"
