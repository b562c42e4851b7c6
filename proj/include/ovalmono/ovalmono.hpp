#pragma once

#include "ovalmono/area.hpp"
#include "ovalmono/curve.hpp"
#include "ovalmono/errors.hpp"
#include "ovalmono/exact.hpp"
#include "ovalmono/io.hpp"
#include "ovalmono/lattice.hpp"
#include "ovalmono/oddcheck.hpp"
#include "ovalmono/path.hpp"
#include "ovalmono/picard_lefschetz.hpp"
#include "ovalmono/report.hpp"
#include "ovalmono/tracking.hpp"
#include "ovalmono/upoly.hpp"
