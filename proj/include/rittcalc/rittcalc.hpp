#pragma once

#include "errors.hpp"
#include "fcalc.hpp"
#include "geometry.hpp"
#include "io.hpp"
#include "linalg.hpp"
#include "operators.hpp"
#include "parallel.hpp"
#include "poly.hpp"
#include "profile.hpp"
#include "report.hpp"
#include "search.hpp"
#include "special.hpp"
#include "sqfe.hpp"
#include "suites.hpp"
