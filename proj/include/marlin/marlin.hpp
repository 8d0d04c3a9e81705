#pragma once

#include "marlin/angles.hpp"
#include "marlin/csv.hpp"
#include "marlin/errors.hpp"
#include "marlin/estimation.hpp"
#include "marlin/harness.hpp"
#include "marlin/measurement.hpp"
#include "marlin/report.hpp"
#include "marlin/scenario.hpp"
#include "marlin/sensors.hpp"
#include "marlin/types.hpp"
#include "marlin/validation.hpp"
#include "marlin/vessel.hpp"
#include "marlin/waves.hpp"
