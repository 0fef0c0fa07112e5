#pragma once

#include "symrig/blockdiag.hpp"
#include "symrig/errors.hpp"
#include "symrig/exact.hpp"
#include "symrig/framework.hpp"
#include "symrig/graph.hpp"
#include "symrig/io.hpp"
#include "symrig/linalg.hpp"
#include "symrig/maxwell.hpp"
#include "symrig/representation.hpp"
#include "symrig/symmetry.hpp"
