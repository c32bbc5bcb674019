#pragma once

// Umbrella header for the resonet library.

#include "resonet/coupling_matrix.hpp"
#include "resonet/error.hpp"
#include "resonet/extraction.hpp"
#include "resonet/linalg.hpp"
#include "resonet/optimizer.hpp"
#include "resonet/polynomials.hpp"
#include "resonet/prototype.hpp"
#include "resonet/response.hpp"
#include "resonet/version.hpp"
#include "resonet/waveguide.hpp"
