#pragma once

// Bounds on the set of interventional distributions compatible with an
// observed joint distribution of two discrete variables confounded by one
// discrete latent variable.

#define INTERBOUND_VERSION "0.1.0"

#include "interbound/bounds.hpp"
#include "interbound/distributions.hpp"
#include "interbound/errors.hpp"
#include "interbound/model.hpp"
#include "interbound/mu_program.hpp"
#include "interbound/oracle.hpp"
#include "interbound/perfect.hpp"
#include "interbound/rng.hpp"
#include "interbound/simplex.hpp"
