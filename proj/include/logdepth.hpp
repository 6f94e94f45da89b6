#pragma once

#include "logdepth/bench.hpp"
#include "logdepth/errors.hpp"
#include "logdepth/expand.hpp"
#include "logdepth/field.hpp"
#include "logdepth/formula.hpp"
#include "logdepth/hardpoly.hpp"
#include "logdepth/pit.hpp"
#include "logdepth/poly.hpp"
#include "logdepth/report.hpp"
#include "logdepth/rng.hpp"
#include "logdepth/text.hpp"
#include "logdepth/transforms/binarize.hpp"
#include "logdepth/transforms/bonet_buss.hpp"
#include "logdepth/transforms/collapse.hpp"
#include "logdepth/transforms/composite.hpp"
#include "logdepth/transforms/homogenize.hpp"
#include "logdepth/transforms/main_reduction.hpp"
#include "logdepth/transforms/params.hpp"
#include "logdepth/transforms/product_fanin.hpp"
#include "logdepth/transforms/skew.hpp"
