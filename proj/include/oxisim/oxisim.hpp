#pragma once

#include "oxisim/errors.hpp"
#include "oxisim/grid.hpp"
#include "oxisim/culture_model.hpp"
#include "oxisim/ode.hpp"
#include "oxisim/sweep.hpp"
#include "oxisim/fit.hpp"
#include "oxisim/organism.hpp"
#include "oxisim/config.hpp"
#include "oxisim/csv.hpp"
#include "oxisim/plot.hpp"
#include "oxisim/app.hpp"
