#pragma once

// Umbrella header for the semismooth Fredholm solver library.

#include "semismooth/spectral.hpp"
#include "semismooth/kernels.hpp"
#include "semismooth/fredholm.hpp"
#include "semismooth/composite.hpp"
#include "semismooth/schrodinger.hpp"
#include "semismooth/baselines.hpp"
