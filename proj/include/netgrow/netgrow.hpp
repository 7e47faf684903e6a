#pragma once

#include "netgrow/error.hpp"
#include "netgrow/graph.hpp"
#include "netgrow/laplacian.hpp"
#include "netgrow/secular.hpp"
#include "netgrow/measures.hpp"
#include "netgrow/random.hpp"
#include "netgrow/axioms.hpp"
#include "netgrow/synthesis.hpp"
#include "netgrow/limits.hpp"
#include "netgrow/montecarlo.hpp"
#include "netgrow/io.hpp"
