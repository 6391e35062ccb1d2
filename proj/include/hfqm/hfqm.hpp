#pragma once

#include "hfqm/analytic_oracle.hpp"
#include "hfqm/derivative.hpp"
#include "hfqm/distributions.hpp"
#include "hfqm/euclidean_scalar.hpp"
#include "hfqm/grid.hpp"
#include "hfqm/operators.hpp"
#include "hfqm/seed.hpp"
#include "hfqm/stages.hpp"
#include "hfqm/symbolic.hpp"
