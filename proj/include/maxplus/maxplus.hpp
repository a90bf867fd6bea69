#pragma once

#include "maxplus/scalar.hpp"
#include "maxplus/errors.hpp"
#include "maxplus/matrix.hpp"
#include "maxplus/graph.hpp"
#include "maxplus/io.hpp"
#include "maxplus/spectral.hpp"
#include "maxplus/eigen.hpp"
#include "maxplus/asymptotics.hpp"
#include "maxplus/kernels.hpp"
#include "maxplus/report.hpp"
