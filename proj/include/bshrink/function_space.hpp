#pragma once

#include "bshrink/function_space/basis.hpp"
#include "bshrink/function_space/diagnostics.hpp"
#include "bshrink/function_space/expansion.hpp"
#include "bshrink/function_space/fejer.hpp"
#include "bshrink/function_space/function_family.hpp"
#include "bshrink/function_space/grid_function.hpp"
