#pragma once

#include "assembly.hpp"
#include "curvature.hpp"
#include "errors.hpp"
#include "geometry2d.hpp"
#include "jet.hpp"
#include "mat2.hpp"
#include "sampling.hpp"
#include "solver.hpp"
#include "surfaces.hpp"
#include "verify.hpp"
