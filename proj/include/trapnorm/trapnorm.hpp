#ifndef TRAPNORM_TRAPNORM_HPP
#define TRAPNORM_TRAPNORM_HPP

#include <trapnorm/bigreal.hpp>
#include <trapnorm/errors.hpp>
#include <trapnorm/plan.hpp>
#include <trapnorm/sampling.hpp>
#include <trapnorm/quadrature.hpp>
#include <trapnorm/analytic_models.hpp>
#include <trapnorm/wkb.hpp>
#include <trapnorm/schrodinger.hpp>
#include <trapnorm/eigen_cache.hpp>
#include <trapnorm/normalizer.hpp>

#endif  // TRAPNORM_TRAPNORM_HPP
