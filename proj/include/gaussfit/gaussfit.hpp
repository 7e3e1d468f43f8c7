#ifndef GAUSSFIT_GAUSSFIT_HPP
#define GAUSSFIT_GAUSSFIT_HPP

#include "gaussfit/bench.hpp"
#include "gaussfit/crlb.hpp"
#include "gaussfit/csv.hpp"
#include "gaussfit/erf_table.hpp"
#include "gaussfit/error.hpp"
#include "gaussfit/fit_result.hpp"
#include "gaussfit/initfit.hpp"
#include "gaussfit/linfit.hpp"
#include "gaussfit/methods.hpp"
#include "gaussfit/random.hpp"
#include "gaussfit/signal.hpp"
#include "gaussfit/types.hpp"

#endif  // GAUSSFIT_GAUSSFIT_HPP
