#pragma once

#include "bounds.hpp"
#include "coeffs.hpp"
#include "error.hpp"
#include "eval.hpp"
#include "experiments.hpp"
#include "indices.hpp"
#include "quadrature.hpp"
#include "spectral.hpp"
