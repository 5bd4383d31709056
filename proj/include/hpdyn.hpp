#pragma once

#include "hpdyn/catalog.hpp"
#include "hpdyn/criteria.hpp"
#include "hpdyn/disc.hpp"
#include "hpdyn/errors.hpp"
#include "hpdyn/geometry.hpp"
#include "hpdyn/herglotz.hpp"
#include "hpdyn/koenigs.hpp"
#include "hpdyn/limits.hpp"
#include "hpdyn/mapspec.hpp"
#include "hpdyn/measure.hpp"
#include "hpdyn/orbit.hpp"
#include "hpdyn/quadrature.hpp"
#include "hpdyn/verdict.hpp"
#include "hpdyn/version.hpp"
