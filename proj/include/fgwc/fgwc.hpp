#pragma once

#include "fgwc/approximation.hpp"
#include "fgwc/contractivity.hpp"
#include "fgwc/errors.hpp"
#include "fgwc/expression.hpp"
#include "fgwc/grid.hpp"
#include "fgwc/interval.hpp"
#include "fgwc/iteration.hpp"
#include "fgwc/piecewise_map.hpp"
#include "fgwc/psi.hpp"
#include "fgwc/real.hpp"
#include "fgwc/report.hpp"
#include "fgwc/runner.hpp"
#include "fgwc/scenario.hpp"
#include "fgwc/schedule.hpp"
#include "fgwc/trace_io.hpp"
