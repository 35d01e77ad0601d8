#ifndef POLYA_POLYA_HPP
#define POLYA_POLYA_HPP

#include "errors.hpp"
#include "laplace.hpp"
#include "output.hpp"
#include "quad.hpp"
#include "return_probability.hpp"
#include "rng.hpp"
#include "series.hpp"
#include "specfun.hpp"
#include "walk.hpp"

#endif
