#pragma once

#include "bshrink/estimators/guards.hpp"
#include "bshrink/estimators/series_estimate.hpp"
#include "bshrink/estimators/settings.hpp"
#include "bshrink/estimators/ustat.hpp"
#include "bshrink/estimators/workspace.hpp"
