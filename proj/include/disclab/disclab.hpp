#pragma once

#include "disclab/beck_fiala.hpp"
#include "disclab/bench.hpp"
#include "disclab/errors.hpp"
#include "disclab/full_coloring.hpp"
#include "disclab/oracle.hpp"
#include "disclab/orthobasis.hpp"
#include "disclab/parallel.hpp"
#include "disclab/partial_coloring.hpp"
#include "disclab/report.hpp"
#include "disclab/rng.hpp"
#include "disclab/set_system.hpp"
