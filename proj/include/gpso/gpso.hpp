#pragma once

#include "gpso/design.hpp"
#include "gpso/design_io.hpp"
#include "gpso/pso.hpp"
#include "gpso/runner.hpp"
#include "gpso/verification.hpp"
