#pragma once

// Umbrella header for the neural fuzzy extractor toolkit.

#include "nfe/binary_io.hpp"
#include "nfe/binary_sketch.hpp"
#include "nfe/bits.hpp"
#include "nfe/embedding.hpp"
#include "nfe/entropy.hpp"
#include "nfe/errors.hpp"
#include "nfe/evaluation.hpp"
#include "nfe/expander.hpp"
#include "nfe/fixed.hpp"
#include "nfe/geometry.hpp"
#include "nfe/hash.hpp"
#include "nfe/lattice.hpp"
#include "nfe/linear_code.hpp"
#include "nfe/prng.hpp"
#include "nfe/record.hpp"
