#pragma once

#include <hrg/address.hpp>
#include <hrg/cascade.hpp>
#include <hrg/config.hpp>
#include <hrg/errors.hpp>
#include <hrg/graph.hpp>
#include <hrg/montecarlo.hpp>
#include <hrg/rng.hpp>
#include <hrg/stats.hpp>
#include <hrg/theory.hpp>
#include <hrg/union_find.hpp>
#include <hrg/version.hpp>
