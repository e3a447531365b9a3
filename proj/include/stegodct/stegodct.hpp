#pragma once

// DCT-domain image steganography: 8x8 block transform pipeline, chaotic
// position schedules keyed by a 128-bit secret, LSB substitution in the first
// eight AC coefficients, and the quality/security metrics used to evaluate
// the result.

#include "stegodct/blake2b.hpp"
#include "stegodct/chaos.hpp"
#include "stegodct/codec.hpp"
#include "stegodct/errors.hpp"
#include "stegodct/image.hpp"
#include "stegodct/keyschedule.hpp"
#include "stegodct/metrics.hpp"
#include "stegodct/transform.hpp"
