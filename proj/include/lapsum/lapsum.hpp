#pragma once

#include "lapsum/contour.hpp"
#include "lapsum/expsum.hpp"
#include "lapsum/fit.hpp"
#include "lapsum/function_expr.hpp"
#include "lapsum/laplace.hpp"
#include "lapsum/norms.hpp"
#include "lapsum/quadrature.hpp"
#include "lapsum/rectangle.hpp"
#include "lapsum/registry.hpp"
#include "lapsum/serialize.hpp"
#include "lapsum/smoothing.hpp"
#include "lapsum/tauberian.hpp"
