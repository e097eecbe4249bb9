/// Umbrella header for the whole library.

#pragma once

#include "subknap/bruteforce.hpp"
#include "subknap/continuous.hpp"
#include "subknap/derandomize.hpp"
#include "subknap/enumeration.hpp"
#include "subknap/errors.hpp"
#include "subknap/generate.hpp"
#include "subknap/instance.hpp"
#include "subknap/io.hpp"
#include "subknap/multilinear.hpp"
#include "subknap/oracle.hpp"
#include "subknap/polytope.hpp"
#include "subknap/random.hpp"
#include "subknap/report.hpp"
#include "subknap/rounding.hpp"
#include "subknap/suite.hpp"
#include "subknap/verify.hpp"
