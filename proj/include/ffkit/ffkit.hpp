#pragma once

#include "control.hpp"
#include "drive.hpp"
#include "errors.hpp"
#include "filter_function.hpp"
#include "geometric.hpp"
#include "magnus.hpp"
#include "optimizer.hpp"
#include "oracle.hpp"
#include "pauli.hpp"
#include "propagation.hpp"
#include "scale_pinning.hpp"
