#ifndef TAILWEIGHT_TAILWEIGHT_HPP
#define TAILWEIGHT_TAILWEIGHT_HPP

#include "tailweight/asymptotics.hpp"
#include "tailweight/error.hpp"
#include "tailweight/estimators.hpp"
#include "tailweight/models.hpp"
#include "tailweight/montecarlo.hpp"
#include "tailweight/normality.hpp"
#include "tailweight/parallel.hpp"
#include "tailweight/quadrature.hpp"
#include "tailweight/rng.hpp"
#include "tailweight/sampling.hpp"
#include "tailweight/special_functions.hpp"
#include "tailweight/weights.hpp"

#define TAILWEIGHT_VERSION "0.1.0"

#endif  // TAILWEIGHT_TAILWEIGHT_HPP
