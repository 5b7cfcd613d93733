#pragma once

#include "gpair/acoustic.hpp"
#include "gpair/assa.hpp"
#include "gpair/error.hpp"
#include "gpair/geometry.hpp"
#include "gpair/io.hpp"
#include "gpair/metrics.hpp"
#include "gpair/operators.hpp"
#include "gpair/parallel.hpp"
#include "gpair/phantom.hpp"
#include "gpair/projection.hpp"
#include "gpair/recon.hpp"
#include "gpair/regularization.hpp"
#include "gpair/wavefield.hpp"
