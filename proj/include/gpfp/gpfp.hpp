#pragma once

#include "gpfp/dist.hpp"
#include "gpfp/errors.hpp"
#include "gpfp/fid.hpp"
#include "gpfp/holomorphic.hpp"
#include "gpfp/io.hpp"
#include "gpfp/moments.hpp"
#include "gpfp/nc_lattice.hpp"
#include "gpfp/quadrature.hpp"
#include "gpfp/rational.hpp"
#include "gpfp/sampling.hpp"
