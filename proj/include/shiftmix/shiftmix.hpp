#pragma once

// Umbrella header: weighted shift operators under infinitely divisible
// measures on sequence spaces — codifferences, decay bounds, mixing
// diagnostics, and Monte Carlo verification.

#include "shiftmix/errors.hpp"
#include "shiftmix/numeric.hpp"
#include "shiftmix/specfun.hpp"
#include "shiftmix/seqspace.hpp"
#include "shiftmix/shifts.hpp"
#include "shiftmix/measures.hpp"
#include "shiftmix/codiff.hpp"
#include "shiftmix/bounds.hpp"
#include "shiftmix/mixing.hpp"
#include "shiftmix/rng.hpp"
#include "shiftmix/mc.hpp"
#include "shiftmix/serialize.hpp"
#include "shiftmix/report.hpp"
