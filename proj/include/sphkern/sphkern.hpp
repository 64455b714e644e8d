#pragma once

#include "sphkern/errors.hpp"
#include "sphkern/holder.hpp"
#include "sphkern/integrate.hpp"
#include "sphkern/jackson.hpp"
#include "sphkern/kernels.hpp"
#include "sphkern/multipliers.hpp"
#include "sphkern/oracle.hpp"
#include "sphkern/parallel.hpp"
#include "sphkern/spectra.hpp"
#include "sphkern/sphere_math.hpp"
#include "sphkern/symmetric_eigen.hpp"
