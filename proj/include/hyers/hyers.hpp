#pragma once

#include "hyers/algebra.hpp"
#include "hyers/control.hpp"
#include "hyers/errors.hpp"
#include "hyers/iteration.hpp"
#include "hyers/maps.hpp"
#include "hyers/report.hpp"
#include "hyers/verify.hpp"
