#ifndef STH_STH_HPP
#define STH_STH_HPP

#include "sth/error.hpp"
#include "sth/quadrature.hpp"
#include "sth/specfun.hpp"
#include "sth/models.hpp"
#include "sth/outage.hpp"
#include "sth/optimizer.hpp"
#include "sth/diversity.hpp"
#include "sth/montecarlo.hpp"
#include "sth/network.hpp"
#include "sth/scenario.hpp"
#include "sth/sweep_result.hpp"
#include "sth/validation.hpp"

#endif
