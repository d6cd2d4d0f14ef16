#pragma once

#include "splitfp/core/error.hpp"
#include "splitfp/core/lcg.hpp"
#include "splitfp/core/linear_map.hpp"
#include "splitfp/core/point.hpp"
#include "splitfp/diagnostics/fejer.hpp"
#include "splitfp/diagnostics/fixed_points.hpp"
#include "splitfp/diagnostics/oracle.hpp"
#include "splitfp/examples/catalog.hpp"
#include "splitfp/operators/catalog.hpp"
#include "splitfp/operators/expr.hpp"
#include "splitfp/operators/fixed_point_map.hpp"
#include "splitfp/operators/map_class.hpp"
#include "splitfp/operators/sequence.hpp"
#include "splitfp/operators/verify.hpp"
#include "splitfp/projections/convex_body.hpp"
#include "splitfp/projections/sampling.hpp"
#include "splitfp/solvers/driver.hpp"
#include "splitfp/solvers/presets.hpp"
#include "splitfp/solvers/problem.hpp"
#include "splitfp/solvers/steps.hpp"
#include "splitfp/solvers/trace.hpp"
