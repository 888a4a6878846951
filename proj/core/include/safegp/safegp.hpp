#pragma once

#include "safegp/active_learning.hpp"
#include "safegp/benchmarks.hpp"
#include "safegp/bounds.hpp"
#include "safegp/centering.hpp"
#include "safegp/deciders.hpp"
#include "safegp/errors.hpp"
#include "safegp/gp.hpp"
#include "safegp/io.hpp"
#include "safegp/normal.hpp"
#include "safegp/parallel.hpp"
#include "safegp/random.hpp"
#include "safegp/tail_curve.hpp"
#include "safegp/trajectory.hpp"
