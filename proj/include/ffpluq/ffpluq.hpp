#pragma once

// Dense exact linear algebra over Z/pZ: delayed-reduction BLAS-like kernels,
// full-rank and rank-profile-revealing PLUQ factorizations in five block
// variants, instrumented modular-reduction counting with closed-form
// predictions, and reproducible matrix generation.

#include "ffpluq/blas.hpp"
#include "ffpluq/errors.hpp"
#include "ffpluq/field.hpp"
#include "ffpluq/fullrank.hpp"
#include "ffpluq/generate.hpp"
#include "ffpluq/io.hpp"
#include "ffpluq/ledger.hpp"
#include "ffpluq/matrix.hpp"
#include "ffpluq/oracle.hpp"
#include "ffpluq/perm.hpp"
#include "ffpluq/pluq.hpp"
#include "ffpluq/pool.hpp"
#include "ffpluq/predict.hpp"
#include "ffpluq/rankrev.hpp"
