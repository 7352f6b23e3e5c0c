#pragma once

// Umbrella header: numerical ranges, joint dilations, and maximal operator
// system classification for dense complex matrices.

#include "omax/boundary.hpp"
#include "omax/choi_solver.hpp"
#include "omax/classify.hpp"
#include "omax/cmatrix.hpp"
#include "omax/counterexamples.hpp"
#include "omax/dilation_verify.hpp"
#include "omax/ellipse.hpp"
#include "omax/hermeig.hpp"
#include "omax/io_json.hpp"
#include "omax/io_plot.hpp"
#include "omax/matfun.hpp"
#include "omax/rank_one_normal.hpp"
#include "omax/rng.hpp"
#include "omax/shape.hpp"
#include "omax/simplex.hpp"
#include "omax/support.hpp"
#include "omax/system_checks.hpp"
#include "omax/tolerances.hpp"
#include "omax/tuple.hpp"
